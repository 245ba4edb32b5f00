"""Statevector execution of gate words under coherent H over-rotation, plus tomography.

Each H is realised as ``X(d) @ sqrtY(d)`` with ``X(d) = R_x(pi(1+d))`` and
``sqrtY(d) = R_y(pi/2 (1+d))``; S and T are virtual Z rotations and stay exact.
The circuit is ``|0> -> H -> word -> measure X, Y, Z``; the preparation H is
noisy, the measurement basis changes are ideal.

Random streams: basis ``B`` (0=X, 1=Y, 2=Z) of a circuit samples from
``SeedSequence(seed, spawn_key=stream + (B,))``, so every (circuit, basis)
pair has its own stream regardless of execution order.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gateword import GATE_TABLE, encode, validate
from . import kernels
from .su2 import KET0, X_AXIS, Y_AXIS, apply, bloch_of_state, gate_matrix, rotation

EXACT = "exact"
BASES = ("X", "Y", "Z")


@dataclass(frozen=True)
class NoiseModel:
    delta: float = 0.0

    def __post_init__(self):
        if not (self.delta >= 0.0) or not math.isfinite(self.delta):
            raise DomainError(f"over-rotation delta must be finite and >= 0, got {self.delta!r}")

    @property
    def noiseless(self):
        return self.delta == 0.0


@dataclass(frozen=True)
class BlochEstimate:
    vector: np.ndarray
    shots_per_basis: object
    raw_counts: tuple = None


def check_shots(shots):
    if shots == EXACT:
        return EXACT
    if isinstance(shots, (bool, np.bool_)) or not isinstance(shots, (int, np.integer)):
        raise DomainError(f"shots must be a positive integer or {EXACT!r}, got {shots!r}")
    if shots <= 0:
        raise DomainError(f"shots must be positive, got {shots}")
    return int(shots)


def noisy_gate(g, noise):
    if g not in ("H", "S", "T"):
        raise DomainError(f"unknown gate symbol {g!r}")
    if g != "H":
        return gate_matrix(g)
    f = 1.0 + noise.delta
    return rotation(X_AXIS, math.pi * f) @ rotation(Y_AXIS, 0.5 * math.pi * f)


def gate_table(noise):
    # the noiseless table is the exact gate set so delta=0 matches the ideal pipeline bit for bit
    if noise.noiseless:
        return GATE_TABLE
    return np.array([noisy_gate(g, noise) for g in "HST"])


def final_state(word, noise):
    table = gate_table(noise)
    prep = apply(table[0], KET0)
    return apply(kernels.word_product(encode(validate(word)), table), prep)


def basis_rng(seed, stream, basis):
    return np.random.default_rng(
        np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream) + (int(basis),))
    )


def _p_plus(component):
    return min(1.0, max(0.0, 0.5 * (1.0 + float(component))))


def measure_basis(psi, basis, shots, seed, stream=()):
    """Number of +1 outcomes from ``shots`` projective measurements in ``basis``."""
    if basis not in BASES:
        raise DomainError(f"basis must be one of {BASES}, got {basis!r}")
    if shots == 0:
        raise DomainError("shots must be positive")
    shots = check_shots(shots)
    if shots == EXACT:
        raise DomainError("measure_basis needs a finite shot count")
    b = BASES.index(basis)
    p = _p_plus(bloch_of_state(psi)[b])
    return int(basis_rng(seed, stream, b).binomial(shots, p)), shots


def run_circuit(word, noise, shots=EXACT, seed=0, stream=()):
    """Prepare |+> with a (noisy) H, apply ``word``, and estimate the Bloch vector."""
    shots = check_shots(shots)
    vec = bloch_of_state(final_state(word, noise))
    if shots == EXACT:
        return BlochEstimate(vector=vec, shots_per_basis=EXACT)
    raw, comps = [], []
    for b in range(3):
        n_plus = int(basis_rng(seed, stream, b).binomial(shots, _p_plus(vec[b])))
        raw.append((n_plus, shots))
        comps.append((2 * n_plus - shots) / shots)
    return BlochEstimate(vector=np.array(comps), shots_per_basis=shots, raw_counts=tuple(raw))
