"""SKARC: average Bloch vectors over an ensemble of synthesized words.

Seed policy. A run has one master seed. Circuit ``i`` of sweep cell
``(b_index, delta_index)`` samples its tomography from stream
``(tag, b_index, delta_index, i)`` (see ``noisysim.run_circuit``); sub-ensemble
draws for size ``m`` use ``SeedSequence(seed, spawn_key=(m,))``. Results are
therefore independent of execution order.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .ensemble import Ensemble, generate_ensemble
from .errors import DomainError
from .gateword import counts
from .noisysim import EXACT, NoiseModel, check_shots, run_circuit
from .su2 import KET_PLUS, apply, bloch_of_state, rz, trace_distance
from .synthesis import DEFAULT_MAX_DEPTH, DEFAULT_MAX_H

SWEEP_TAG = 1
CONTOUR_TAG = 2


def target_vector(theta):
    """Bloch vector of the ideal ``rz(theta)|+>``, i.e. ``(cos theta, sin theta, 0)``."""
    return bloch_of_state(apply(rz(theta), KET_PLUS))


def mean_vector(vectors, subset=None):
    """Mean of the selected Bloch vectors; ``subset`` is an index multiset (repeats count)."""
    vectors = np.asarray(vectors, dtype=float)
    if subset is None:
        subset = range(len(vectors))
    idx = np.asarray(list(subset), dtype=np.intp)
    if idx.size == 0:
        raise DomainError("mean_vector needs a non-empty subset")
    if idx.min() < 0 or idx.max() >= len(vectors):
        raise DomainError("subset index out of range")
    return vectors[idx].mean(axis=0)


def _fewest_h_key(word):
    c = counts(word)
    return (c.h_count, c.t_count, c.total, word)


def select_fewest_h(ensemble):
    """Index of the member with fewest H; ties by fewest T, fewest gates, then lexicographic."""
    words = ensemble.words if isinstance(ensemble, Ensemble) else list(ensemble)
    if not words:
        raise DomainError("ensemble is empty")
    return min(range(len(words)), key=lambda i: _fewest_h_key(words[i]))


@dataclass(frozen=True)
class DmRow:
    m: int
    d_mean: float
    d_std: float
    d_sem: float
    draws: int


def _multiset_count(r, m):
    return math.comb(r + m - 1, m)


def subensemble_distance_curve(vectors, target, m_range, q_cap=1000, seed=0):
    """Mean trace distance to ``target`` of size-``m`` sub-ensemble averages.

    Sub-ensembles are drawn with replacement, ``min(q_cap, #multisets)`` per m.
    The ``m == r`` row is the deterministic full ensemble (one draw).
    """
    vectors = np.asarray(vectors, dtype=float)
    target = np.asarray(target, dtype=float)
    r = len(vectors)
    if q_cap < 1:
        raise DomainError(f"q_cap must be >= 1, got {q_cap}")
    rows = []
    for m in sorted(set(int(m) for m in m_range)):
        if not 1 <= m <= r:
            raise DomainError(f"sub-ensemble size {m} outside [1, {r}]")
        if m == r:
            d = trace_distance(vectors.mean(axis=0), target)
            rows.append(DmRow(m, d, 0.0, 0.0, 1))
            continue
        draws = min(q_cap, _multiset_count(r, m))
        rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(m,)))
        idx = rng.integers(0, r, size=(draws, m))
        means = vectors[idx].mean(axis=1)
        d = np.linalg.norm(means - target, axis=1) / 2.0
        std = float(d.std())
        rows.append(DmRow(m, float(d.mean()), std, std / math.sqrt(draws), draws))
    return rows


def project_to_disk(vectors, target):
    """Coordinates of each vector in the plane orthogonal to ``target``.

    Basis: ``e1 = normalize(z x n)`` (``x`` if that is degenerate), ``e2 = n x e1``.
    """
    target = np.asarray(target, dtype=float)
    norm = np.linalg.norm(target)
    if norm <= 1e-9:
        raise DomainError("projection target must be non-zero")
    n = target / norm
    e1 = np.cross([0.0, 0.0, 1.0], n)
    if np.linalg.norm(e1) < 1e-6:
        e1 = np.array([1.0, 0.0, 0.0])
    else:
        e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    p = np.atleast_2d(np.asarray(vectors, dtype=float))
    return np.stack([p @ e1, p @ e2], axis=1)


def rms_radius(points):
    p = np.asarray(points, dtype=float)
    return float(np.sqrt((p ** 2).sum(axis=1).mean()))


def propagated_errbar(vectors, target):
    """Ensemble component spread propagated through ``|mean - target| / 2``."""
    vectors = np.asarray(vectors, dtype=float)
    sigma = vectors.std(axis=0)
    diff = vectors.mean(axis=0) - np.asarray(target, dtype=float)
    norm = np.linalg.norm(diff)
    if norm == 0.0:
        return float(0.5 * sigma.max())
    return float(0.5 * np.sqrt(((diff / norm) ** 2 * sigma ** 2).sum()))


@dataclass
class SkarcConfig:
    theta: float = 1.0
    b_list: list = field(default_factory=lambda: [4])
    delta_list: list = field(default_factory=lambda: [0.0])
    r: int = 100
    shots: object = EXACT
    m_range: list = field(default_factory=list)
    q_cap: int = 1000
    seed: int = 0
    max_h: int = DEFAULT_MAX_H
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.q_cap < 1:
            raise DomainError("q_cap must be >= 1")
        if self.r < 1:
            raise DomainError("r must be >= 1")
        if any(not 1 <= m <= self.r for m in self.m_range):
            raise DomainError(f"m_range must lie within [1, {self.r}]")
        self.shots = check_shots(self.shots)
        for d in self.delta_list:
            NoiseModel(float(d))

    def to_dict(self):
        return asdict(self)


@dataclass
class CellResult:
    b: int
    delta: float
    shots: object
    theta: float
    words: list
    vectors: np.ndarray
    raw_counts: list
    target: np.ndarray
    mean: np.ndarray
    fewest_h: int
    d_mean_vector: float
    d_fewest_h: float
    errbar: float
    d_sequences: np.ndarray
    projection: np.ndarray
    dm_curve: list

    def to_dict(self):
        return {
            "b": self.b,
            "delta": self.delta,
            "shots": self.shots,
            "theta": self.theta,
            "words": list(self.words),
            "h_counts": [w.count("H") for w in self.words],
            "t_counts": [w.count("T") for w in self.words],
            "vectors": self.vectors.tolist(),
            "raw_counts": self.raw_counts,
            "target": self.target.tolist(),
            "mean_vector": self.mean.tolist(),
            "fewest_h_index": self.fewest_h,
            "d_mean_vector": self.d_mean_vector,
            "d_fewest_h": self.d_fewest_h,
            "errbar": self.errbar,
            "d_sequences": self.d_sequences.tolist(),
            "projection": self.projection.tolist(),
            "dm_curve": [asdict(row) for row in self.dm_curve],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            b=int(d["b"]), delta=float(d["delta"]), shots=d["shots"], theta=float(d["theta"]),
            words=list(d["words"]), vectors=np.array(d["vectors"], dtype=float),
            raw_counts=d.get("raw_counts"), target=np.array(d["target"], dtype=float),
            mean=np.array(d["mean_vector"], dtype=float), fewest_h=int(d["fewest_h_index"]),
            d_mean_vector=float(d["d_mean_vector"]), d_fewest_h=float(d["d_fewest_h"]),
            errbar=float(d["errbar"]), d_sequences=np.array(d["d_sequences"], dtype=float),
            projection=np.array(d["projection"], dtype=float).reshape(-1, 2),
            dm_curve=[DmRow(**row) for row in d.get("dm_curve", [])],
        )


@dataclass
class RunReport:
    config: dict
    cells: list
    version: str = __version__

    def to_dict(self):
        return {
            "version": self.version,
            "config": self.config,
            "seed": self.config.get("seed"),
            "cells": [c.to_dict() for c in sorted(self.cells, key=lambda c: (c.b, c.delta))],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(config=d["config"], cells=[CellResult.from_dict(c) for c in d["cells"]],
                   version=d.get("version", __version__))


def evaluate_cell(ens, delta, shots=EXACT, seed=0, stream=(), m_range=(), q_cap=1000):
    """Run every member of ``ens`` and compute the per-cell SKARC statistics."""
    noise = NoiseModel(float(delta))
    shots = check_shots(shots)
    estimates = [run_circuit(w, noise, shots, seed, tuple(stream) + (i,))
                 for i, w in enumerate(ens.words)]
    vectors = np.array([e.vector for e in estimates])
    target = target_vector(ens.theta)
    mean = vectors.mean(axis=0)
    few = select_fewest_h(ens)
    d_seq = np.linalg.norm(vectors - target, axis=1) / 2.0
    curve = subensemble_distance_curve(vectors, target, m_range, q_cap, seed) if m_range else []
    return CellResult(
        b=ens.b, delta=float(delta), shots=shots, theta=ens.theta, words=list(ens.words),
        vectors=vectors,
        raw_counts=None if shots == EXACT else [list(map(list, e.raw_counts)) for e in estimates],
        target=target, mean=mean, fewest_h=few,
        d_mean_vector=trace_distance(mean, target), d_fewest_h=float(d_seq[few]),
        errbar=propagated_errbar(vectors, target), d_sequences=d_seq,
        projection=project_to_disk(vectors, target), dm_curve=curve,
    )


def precision_sweep(config, threads=None, ensembles=None):
    """Evaluate every (b, delta) cell of ``config``; one ensemble per b is shared across deltas."""
    cells = []
    ensembles = dict(ensembles or {})
    for bi, b in enumerate(config.b_list):
        ens = ensembles.get(b)
        if ens is None:
            ens = generate_ensemble(config.theta, b, config.r, config.seed,
                                    max_h=config.max_h, max_depth=config.max_depth,
                                    threads=threads)
            ensembles[b] = ens
        for di, delta in enumerate(config.delta_list):
            cells.append(evaluate_cell(ens, delta, config.shots, config.seed,
                                       (SWEEP_TAG, bi, di), config.m_range, config.q_cap))
    return RunReport(config=config.to_dict(), cells=cells)


@dataclass(frozen=True)
class ContourRow:
    b: int
    shots: int
    randomized: bool
    d_mean: float
    d_std: float
    d_exact: float
    reference_shots: int


def sampling_contour(b_grid, shots_grid, randomized, config, n_seeds=5, threads=None,
                     ensembles=None):
    """Trace distance over a (bits, shots) grid, averaged over ``n_seeds`` tomography seeds.

    ``randomized`` uses the full-ensemble mean, otherwise the nominal member 0 only.
    ``reference_shots`` is the matching sample count ``4**b``.
    """
    if not b_grid or not shots_grid:
        raise DomainError("contour grids must be non-empty")
    if n_seeds < 1:
        raise DomainError("n_seeds must be >= 1")
    ensembles = dict(ensembles or {})
    rows = []
    for bi, b in enumerate(b_grid):
        ens = ensembles.get(b)
        if ens is None:
            ens = generate_ensemble(config.theta, b, config.r if randomized else 1, config.seed,
                                    max_h=config.max_h, max_depth=config.max_depth,
                                    threads=threads)
            ensembles[b] = ens
        if not randomized:
            ens = Ensemble(theta=ens.theta, b=ens.b, seed=ens.seed, words=ens.words[:1],
                           distances=ens.distances[:1], max_h=ens.max_h,
                           max_depth=ens.max_depth)
        exact = evaluate_cell(ens, 0.0, EXACT).d_mean_vector
        for ni, n in enumerate(shots_grid):
            ds = [evaluate_cell(ens, 0.0, int(n), config.seed + s,
                                (CONTOUR_TAG, bi, ni, s)).d_mean_vector
                  for s in range(n_seeds)]
            rows.append(ContourRow(int(b), int(n), bool(randomized), float(np.mean(ds)),
                                   float(np.std(ds)), exact, 4 ** int(b)))
    return rows


def sample_assignments(r, g, count, seed):
    """``count`` i.i.d. uniform assignments of ensemble indices to ``g`` rotation slots."""
    if r < 1 or g < 1:
        raise DomainError("r and g must be >= 1")
    if count < 0:
        raise DomainError("count must be non-negative")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    return [tuple(int(i) for i in row) for row in rng.integers(0, r, size=(count, g))]
