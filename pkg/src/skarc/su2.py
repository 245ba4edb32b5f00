"""Exact single-qubit operator algebra and Bloch-sphere geometry.

Operators are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``.
States are length-2 complex arrays and Bloch vectors length-3 real arrays.

Quaternions ``(w, x, y, z)`` represent the phase-free part of an operator via
``U ~ w*I - i*(x*X + y*Y + z*Z)``, so the Hamilton product matches matrix
multiplication. The sign is canonical: the first component with magnitude above
``1e-9`` is positive.
"""

import math

import numpy as np

from .errors import DomainError

UNITARY_TOL = 1e-12
GEOM_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])

_SQRT1_2 = 1.0 / math.sqrt(2.0)

GATES = {
    "H": np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, complex(_SQRT1_2, _SQRT1_2)]], dtype=complex),
}

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([_SQRT1_2, _SQRT1_2], dtype=complex)


def is_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u)
    if u.shape != (2, 2):
        return False
    return bool(np.allclose(u.conj().T @ u, I2, rtol=0.0, atol=tol)) and abs(
        abs(np.linalg.det(u)) - 1.0
    ) <= tol


def rotation(axis, angle):
    """Return ``cos(angle/2) I - i sin(angle/2) (axis . sigma)``.

    With this convention ``rotation(z, t) == diag(exp(-i t/2), exp(i t/2))``.
    """
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > GEOM_TOL:
        raise DomainError(f"rotation axis must be a unit 3-vector, got {axis!r}")
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    nx, ny, nz = n
    return np.array(
        [[complex(c, -s * nz), complex(-s * ny, -s * nx)],
         [complex(s * ny, -s * nx), complex(c, s * nz)]],
        dtype=complex,
    )


def rz(angle):
    return rotation(Z_AXIS, angle)


def gate_matrix(g):
    """Exact matrix of a gate symbol in {H, S, T}."""
    try:
        return GATES[g].copy()
    except (KeyError, TypeError):
        raise DomainError(f"unknown gate symbol {g!r}") from None


def op_distance(u, v):
    """Phase-invariant operator distance ``sqrt(1 - |tr(U^dag V)|/2)``.

    Evaluated as ``min(|p - q|, |p + q|) / sqrt(2)`` on the SU(2) quaternions,
    which is the same quantity without the cancellation near zero.
    """
    return quat_distance(_su2_quat(u), _su2_quat(v))


def apply(u, psi):
    return np.asarray(u, dtype=complex) @ np.asarray(psi, dtype=complex)


def bloch_of_state(psi):
    """Bloch vector ``(<X>, <Y>, <Z>)`` of a pure state."""
    a, b = complex(psi[0]), complex(psi[1])
    ab = a.conjugate() * b
    return np.array([2.0 * ab.real, 2.0 * ab.imag, abs(a) ** 2 - abs(b) ** 2])


def trace_distance(r, s):
    """Trace distance between two qubit states given as Bloch vectors."""
    return float(np.linalg.norm(np.asarray(r, dtype=float) - np.asarray(s, dtype=float)) / 2.0)


def canonical_sign(q):
    q = np.asarray(q, dtype=float)
    for c in q:
        if abs(c) > GEOM_TOL:
            return q if c > 0 else -q
    return q


def _su2_quat(u):
    u = np.asarray(u, dtype=complex)
    su = u / np.sqrt(np.linalg.det(u))
    q = np.array([su[0, 0].real, -su[0, 1].imag, -su[0, 1].real, -su[0, 0].imag])
    return q / np.linalg.norm(q)


def to_quaternion(u):
    """Phase-stripped unit quaternion of a 2x2 unitary, canonical sign."""
    return canonical_sign(_su2_quat(u))


def quat_to_matrix(q):
    w, x, y, z = (float(c) for c in q)
    return np.array(
        [[complex(w, -z), complex(-y, -x)], [complex(y, -x), complex(w, z)]], dtype=complex
    )


def quat_mul(p, q):
    """Hamilton product; ``quat_mul(p, q)`` corresponds to the matrix product ``P @ Q``."""
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return np.array([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ])


def quat_conj(q):
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_distance(p, q):
    """op_distance expressed on unit quaternions (sign of either argument is irrelevant)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(min(np.linalg.norm(p - q), np.linalg.norm(p + q))) / math.sqrt(2.0)


def axis_angle(q):
    """Rotation axis and angle in ``[0, pi]`` of a quaternion (sign ignored)."""
    q = np.asarray(q, dtype=float)
    if q[0] < 0:
        q = -q
    v = q[1:]
    s = np.linalg.norm(v)
    angle = 2.0 * math.atan2(s, min(1.0, q[0]))
    if s < 1e-15:
        return Z_AXIS.copy(), 0.0
    return v / s, angle


def quat_from_axis_angle(axis, angle):
    n = np.asarray(axis, dtype=float)
    return np.concatenate(([math.cos(angle / 2.0)], math.sin(angle / 2.0) * n))


def rotate_vector(q, v):
    """Rotate a 3-vector by the SO(3) action of ``q`` (Bloch-sphere action of the operator)."""
    qv = np.concatenate(([0.0], np.asarray(v, dtype=float)))
    return quat_mul(quat_mul(q, qv), quat_conj(q))[1:]
