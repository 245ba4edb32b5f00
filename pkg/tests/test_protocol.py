import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skarc.ensemble import Ensemble, generate_ensemble
from skarc.errors import DomainError
from skarc.noisysim import EXACT
from skarc.protocol import (
    RunReport, SkarcConfig, evaluate_cell, mean_vector, precision_sweep, project_to_disk,
    propagated_errbar, rms_radius, sample_assignments, sampling_contour, select_fewest_h,
    subensemble_distance_curve, target_vector,
)
from skarc.su2 import trace_distance


def test_target_vector():
    assert np.allclose(target_vector(1.0), [math.cos(1), math.sin(1), 0], atol=1e-15)


def test_mean_vector_examples():
    vs = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0]])
    assert np.array_equal(mean_vector(vs, [2]), vs[2])
    assert np.allclose(mean_vector(vs, [0, 1]), 0)
    m = mean_vector(vs, [0, 2, 2])
    assert np.allclose(m, [(1 + 0 + 0) / 3, (0 + 1 + 1) / 3, 0])
    with pytest.raises(DomainError):
        mean_vector(vs, [])
    with pytest.raises(DomainError):
        mean_vector(vs, [3])


def test_select_fewest_h():
    assert select_fewest_h(["HTH", "", "T"]) == 1
    assert select_fewest_h(["HTTH", "HSH", "HTH"]) == 1
    ens = generate_ensemble(1.0, 4, 20, 7)
    i = select_fewest_h(ens)
    assert i == select_fewest_h(generate_ensemble(1.0, 4, 20, 7))
    hs = [w.count("H") for w in ens.words]
    assert hs[i] == min(hs)


def test_curve_trivial_cases():
    vs = np.tile([0.5, 0.5, 0.0], (5, 1))
    rows = subensemble_distance_curve(vs, [1.0, 0, 0], [1, 3, 5])
    for row in rows:
        assert row.d_mean == pytest.approx(trace_distance(vs[0], [1, 0, 0]))
        assert row.d_std == pytest.approx(0, abs=1e-15)
    rows = subensemble_distance_curve(vs, vs[0], [1, 2])
    assert all(r.d_mean == 0 for r in rows)


def test_curve_draw_counts_and_full_row():
    rng = np.random.default_rng(0)
    vs = rng.normal(size=(4, 3)) * 0.1
    rows = {r.m: r for r in subensemble_distance_curve(vs, [1, 0, 0], [1, 2, 3, 4], q_cap=15)}
    assert rows[1].draws == 4          # C(4,1)
    assert rows[2].draws == 10         # C(5,2)
    assert rows[3].draws == 15         # capped below C(6,3)=20
    assert rows[4].draws == 1
    assert rows[4].d_mean == pytest.approx(trace_distance(vs.mean(axis=0), [1, 0, 0]), abs=1e-15)
    with pytest.raises(DomainError):
        subensemble_distance_curve(vs, [1, 0, 0], [5])
    with pytest.raises(DomainError):
        subensemble_distance_curve(vs, [1, 0, 0], [1], q_cap=0)


def test_project_examples():
    t = target_vector(1.0)
    assert np.allclose(project_to_disk([t], t), 0, atol=1e-15)
    n = t / np.linalg.norm(t)
    e1 = np.cross([0, 0, 1], n)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    basis = np.array([e1, e2, n])
    assert np.allclose(basis @ basis.T, np.eye(3), atol=1e-12)
    # rotate the target by a small angle about e1: the radius is that angle
    a = 1e-3
    v = math.cos(a) * n + math.sin(a) * e2
    (u, w), = project_to_disk([v], t)
    assert math.hypot(u, w) == pytest.approx(a, rel=1e-6)
    # target on the z axis falls back to x
    assert np.allclose(project_to_disk([[1, 0, 0]], [0, 0, 1]), [[1, 0]])
    with pytest.raises(DomainError):
        project_to_disk([t], [0, 0, 0])


def test_rms_and_errbar():
    assert rms_radius([[3, 4], [0, 0]]) == pytest.approx(math.sqrt(12.5))
    vs = np.array([[1.0, 0, 0], [0.8, 0, 0]])
    # spread only along the distance direction: errbar = std_x / 2
    assert propagated_errbar(vs, [0, 0, 0]) == pytest.approx(0.05)


def test_config_validation():
    with pytest.raises(DomainError):
        SkarcConfig(q_cap=0)
    with pytest.raises(DomainError):
        SkarcConfig(r=5, m_range=[6])
    with pytest.raises(DomainError):
        SkarcConfig(delta_list=[-1])
    with pytest.raises(DomainError):
        SkarcConfig(shots=0)


def test_single_member_sweep():
    rep = precision_sweep(SkarcConfig(b_list=[5], r=1))
    c, = rep.cells
    assert np.array_equal(c.mean, c.vectors[0])
    assert c.d_mean_vector == c.d_fewest_h


def test_report_recomputable_and_round_trip():
    cfg = SkarcConfig(b_list=[4], delta_list=[0.0, 0.005], r=10, shots=1000, m_range=[1, 5, 10])
    rep = precision_sweep(cfg)
    again = RunReport.from_dict(rep.to_dict())
    assert again.to_dict() == rep.to_dict()
    for c in rep.cells:
        assert abs(trace_distance(c.vectors.mean(axis=0), c.target) - c.d_mean_vector) < 1e-12
        d_seq = [trace_distance(v, c.target) for v in c.vectors]
        assert np.allclose(d_seq, c.d_sequences, atol=1e-12, rtol=0)
        assert abs(d_seq[c.fewest_h] - c.d_fewest_h) < 1e-12
        full = [r for r in c.dm_curve if r.m == 10][0]
        assert full.d_mean == pytest.approx(c.d_mean_vector, abs=1e-15)
        # equal shots: pooled counts give the same vector as averaging
        pooled = np.array(c.raw_counts).sum(axis=0)
        assert np.allclose((2 * pooled[:, 0] - pooled[:, 1]) / pooled[:, 1], c.mean, atol=1e-12)


def test_evaluate_cell_is_deterministic():
    ens = generate_ensemble(1.0, 5, 8, 0)
    a = evaluate_cell(ens, 0.002, 4096, seed=3, stream=(1, 0, 0), m_range=[2], q_cap=50)
    b = evaluate_cell(ens, 0.002, 4096, seed=3, stream=(1, 0, 0), m_range=[2], q_cap=50)
    assert a.to_dict() == b.to_dict()


def test_contour_rows():
    cfg = SkarcConfig(r=10)
    ens = {5: generate_ensemble(1.0, 5, 10, 0)}
    rand = sampling_contour([5], [16, 4 ** 9], True, cfg, n_seeds=5, ensembles=ens)
    nom = sampling_contour([5], [16, 4 ** 9], False, cfg, n_seeds=5, ensembles=ens)
    assert [r.reference_shots for r in rand] == [4 ** 5, 4 ** 5]
    # many shots: plateau at the exact distance
    assert rand[1].d_mean <= 2 * rand[1].d_exact + 2 / 2 ** 9
    # few shots: shot noise dominates
    assert rand[0].d_mean > rand[1].d_mean
    assert nom[0].d_exact == evaluate_cell(
        Ensemble(1.0, 5, 0, ens[5].words[:1], ens[5].distances[:1]), 0.0, EXACT).d_mean_vector
    with pytest.raises(DomainError):
        sampling_contour([], [16], True, cfg)


def test_sample_assignments():
    assert sample_assignments(1, 3, 5, 0) == [(0, 0, 0)] * 5
    draws = sample_assignments(2, 1, 10000, 4)
    ones = sum(d[0] for d in draws)
    assert abs(ones - 5000) <= 3 * math.sqrt(10000 * 0.25)
    assert sample_assignments(7, 2, 20, 9) == sample_assignments(7, 2, 20, 9)
    assert len(sample_assignments(2, 2, 50, 1)) == 50
    with pytest.raises(DomainError):
        sample_assignments(0, 1, 1, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31))
def test_mean_vector_inside_ball(n, seed):
    g = np.random.default_rng(seed)
    v = g.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    idx = g.integers(0, n, size=int(g.integers(1, 20)))
    assert np.linalg.norm(mean_vector(v, idx)) <= 1 + 1e-9


def test_noisy_mean_beats_median_sequence():
    # coherent-noise gain: for most precisions the mean vector is closer than the median member
    cfg = SkarcConfig(b_list=list(range(4, 11)), delta_list=[5e-3], r=100)
    rep = precision_sweep(cfg)
    wins = sum(c.d_mean_vector <= np.median(c.d_sequences) for c in rep.cells)
    assert wins > len(rep.cells) / 2


def test_coherent_bias_persists_at_high_precision():
    cfg = SkarcConfig(b_list=[11, 12], delta_list=[0.0, 5e-3], r=20)
    cells = {(c.b, c.delta): c.d_mean_vector for c in precision_sweep(cfg).cells}
    floor_clean = max(cells[(11, 0.0)], cells[(12, 0.0)])
    floor_noisy = min(cells[(11, 5e-3)], cells[(12, 5e-3)])
    assert floor_noisy >= 5 * floor_clean
