import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skarc.errors import DomainError
from skarc.su2 import (
    GATES, I2, KET0, KET1, KET_PLUS, X_AXIS, Y_AXIS, Z_AXIS,
    apply, axis_angle, bloch_of_state, canonical_sign, gate_matrix, is_unitary, op_distance,
    quat_distance, quat_mul, quat_to_matrix, rotation, rz, to_quaternion, trace_distance,
)

from conftest import ORACLE_GATES, phase_distance, random_su2

angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)
unit_axes = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 0.1).map(
    lambda v: np.asarray(v) / np.linalg.norm(v))


def test_rotation_identity_and_clifford_t():
    assert np.allclose(rotation(Z_AXIS, 0.0), I2, atol=1e-15)
    assert op_distance(rotation(Z_AXIS, math.pi / 2), GATES["S"]) < 1e-12
    assert op_distance(rotation(Z_AXIS, math.pi / 4), GATES["T"]) < 1e-12


def test_rz_sign_convention():
    t = 0.3
    assert np.allclose(rz(t), np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)]))


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(DomainError):
        rotation([1.0, 1.0, 0.0], 0.1)


def test_gate_matrices_exact():
    for g in "HST":
        assert np.allclose(gate_matrix(g), ORACLE_GATES[g], atol=1e-15)
    s = gate_matrix("S")
    assert np.allclose(s @ s @ s @ s, I2)
    t = gate_matrix("T")
    assert np.allclose(t @ t, s, atol=1e-15)
    with pytest.raises(DomainError):
        gate_matrix("X")


def test_op_distance_examples():
    u = gate_matrix("H")
    assert op_distance(u, u) == 0.0
    assert op_distance(I2, np.diag([1, -1]).astype(complex)) == pytest.approx(1.0, abs=1e-15)
    # sqrt(1 - cos(pi/8)) by direct arithmetic
    assert op_distance(I2, gate_matrix("T")) == pytest.approx(math.sqrt(1 - math.cos(math.pi / 8)),
                                                             abs=1e-15)
    assert op_distance(I2, gate_matrix("T")) == pytest.approx(0.27590, abs=1e-4)


def test_op_distance_matches_trace_formula(rng):
    for _ in range(200):
        u, v = random_su2(rng), random_su2(rng)
        assert op_distance(u, v) == pytest.approx(phase_distance(u, v), abs=1e-7)


def test_apply_and_bloch():
    assert np.allclose(apply(I2, KET0), KET0)
    assert np.allclose(apply(GATES["H"], KET0), KET_PLUS)
    assert np.allclose(bloch_of_state(apply(rotation(Z_AXIS, 1.0), KET_PLUS)),
                       [math.cos(1), math.sin(1), 0], atol=1e-12)
    assert np.allclose(bloch_of_state(KET0), [0, 0, 1])
    assert np.allclose(bloch_of_state(KET_PLUS), [1, 0, 0])
    assert np.allclose(bloch_of_state(np.array([1, 1j]) / math.sqrt(2)), [0, 1, 0])


def test_trace_distance_examples():
    assert trace_distance([0, 0, 1], [0, 0, 1]) == 0
    assert trace_distance([0, 0, 1], [0, 0, -1]) == pytest.approx(1.0)
    assert trace_distance([1, 0, 0], [0, 0, 1]) == pytest.approx(math.sqrt(2) / 2)


def test_quaternion_examples():
    assert np.allclose(to_quaternion(I2), [1, 0, 0, 0])
    assert np.allclose(to_quaternion(rotation(Z_AXIS, math.pi)), [0, 0, 0, 1])
    assert np.allclose(to_quaternion(GATES["T"]),
                       [math.cos(math.pi / 8), 0, 0, math.sin(math.pi / 8)], atol=1e-12)


@settings(max_examples=300, deadline=None)
@given(unit_axes, angles)
def test_rotation_inverse(axis, theta):
    assert np.allclose(rotation(axis, theta) @ rotation(axis, -theta), I2, atol=1e-10)
    assert is_unitary(rotation(axis, theta))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_triangle_and_phase_invariance(seed):
    g = np.random.default_rng(seed)
    u, v, w = random_su2(g), random_su2(g), random_su2(g)
    assert op_distance(u, w) <= op_distance(u, v) + op_distance(v, w) + 1e-9
    phase = np.exp(1j * g.uniform(0, 2 * math.pi))
    assert abs(op_distance(u, phase * v) - op_distance(u, v)) < 1e-12
    assert abs(op_distance(u, v) - op_distance(v, u)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_quaternion_phase_free_and_canonical(seed):
    g = np.random.default_rng(seed)
    u = random_su2(g) * np.exp(1j * g.uniform(0, 2 * math.pi))
    q = to_quaternion(u)
    assert abs(np.linalg.norm(q) - 1) < 1e-12
    first = q[np.abs(q) > 1e-9][0]
    assert first > 0
    assert np.allclose(canonical_sign(-q), q)
    assert op_distance(quat_to_matrix(q), u) < 1e-12


def test_quaternion_nearest_agrees_with_op_distance(rng):
    pool = [random_su2(rng) for _ in range(200)]
    pq = np.array([to_quaternion(u) for u in pool])
    for _ in range(1000 // 20):
        u = random_su2(rng)
        q = to_quaternion(u)
        by_quat = min(range(len(pool)), key=lambda i: quat_distance(pq[i], q))
        by_op = min(range(len(pool)), key=lambda i: op_distance(pool[i], u))
        assert by_quat == by_op


def test_quaternion_product_is_matrix_product(rng):
    for _ in range(100):
        u, v = random_su2(rng), random_su2(rng)
        pq = quat_mul(to_quaternion(u), to_quaternion(v))
        assert op_distance(quat_to_matrix(pq), u @ v) < 1e-12


def test_axis_angle_of_rz():
    axis, angle = axis_angle(to_quaternion(rz(1.0)))
    assert angle == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.abs(axis), [0, 0, 1])


def test_trace_distance_pure_states(rng):
    for _ in range(1000):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        expect = math.sqrt(max(0.0, 1 - abs(np.vdot(a, b)) ** 2))
        assert trace_distance(bloch_of_state(a), bloch_of_state(b)) == pytest.approx(expect, abs=1e-9)


def test_ket_constants():
    assert np.allclose(KET1, [0, 1])
    for ax in (X_AXIS, Y_AXIS, Z_AXIS):
        assert np.linalg.norm(ax) == 1
