"""Solovay-Kitaev synthesis of Z rotations over {H, S, T}.

The base approximation is a linear scan of an enumerated net of canonical
words; refinement is the Dawson-Nielsen recursion built on a balanced group
commutator.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, ResourceLimitError, SynthesisError
from .gateword import WordCounts, canonicalize, counts, invert, sort_key, word_matrix
from .su2 import (
    GATES,
    I2,
    X_AXIS,
    Y_AXIS,
    axis_angle,
    canonical_sign,
    is_unitary,
    op_distance,
    quat_conj,
    quat_from_axis_angle,
    quat_mul,
    quat_to_matrix,
    rz,
    to_quaternion,
)

MAX_NET_H = 7
DEFAULT_MAX_H = 5
DEFAULT_MAX_DEPTH = 8
JITTER_BAND = 1.25
# gc_decompose is only trusted below this residual angle
RESIDUAL_ANGLE_CAP = math.pi / 2


@dataclass(frozen=True)
class BaseNet:
    """Deduplicated canonical words with their quaternions, sorted by preference."""

    quats: np.ndarray
    words: tuple
    max_h: int

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class SynthResult:
    word: str
    achieved_distance: float
    depth_used: int
    counts: WordCounts


def _batch_mul(ps, q):
    """Hamilton products ``p_i * q`` for a stack of quaternions ``ps``."""
    pw, px, py, pz = ps.T
    qw, qx, qy, qz = q
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=1)


def _tpow(a):
    return "S" * (a >> 1) + "T" * (a & 1)


def enumerate_raw_words(max_h):
    """All alternating words ``T^a0 H T^a1 ... H T^an`` with at most ``max_h`` H's.

    Returns ``(words, quats)``; interior powers run over 1..7, the outer two over 0..7.
    """
    t_q = [to_quaternion(np.linalg.matrix_power(GATES["T"], a)) for a in range(8)]
    h_q = to_quaternion(GATES["H"])
    words = [_tpow(a) for a in range(8)]
    quats = [np.array(t_q)]
    prefix_words = [_tpow(a) + "H" for a in range(8)]
    prefix_q = np.array([quat_mul(t_q[a], h_q) for a in range(8)])
    for h in range(1, max_h + 1):
        for a in range(8):
            words.extend(p + _tpow(a) for p in prefix_words)
            quats.append(_batch_mul(prefix_q, t_q[a]))
        if h == max_h:
            break
        new_words, new_q = [], []
        for a in range(1, 8):
            step = quat_mul(t_q[a], h_q)
            new_words.extend(p + _tpow(a) + "H" for p in prefix_words)
            new_q.append(_batch_mul(prefix_q, step))
        prefix_words, prefix_q = new_words, np.concatenate(new_q)
    return words, np.concatenate(quats)


@functools.lru_cache(maxsize=8)
def build_base_net(max_h=DEFAULT_MAX_H):
    """Enumerate and deduplicate the canonical net with at most ``max_h`` H symbols."""
    if not isinstance(max_h, (int, np.integer)) or max_h < 0:
        raise DomainError(f"max_h must be a non-negative integer, got {max_h!r}")
    if max_h > MAX_NET_H:
        raise ResourceLimitError(f"max_h={max_h} exceeds the limit of {MAX_NET_H}")
    words, quats = enumerate_raw_words(int(max_h))
    signs = np.where(quats[:, 0] < -1e-9, -1.0, 1.0)
    # rows with w ~ 0 need the full canonical-sign rule
    for i in np.flatnonzero(np.abs(quats[:, 0]) <= 1e-9):
        signs[i] = 1.0 if np.array_equal(canonical_sign(quats[i]), quats[i]) else -1.0
    cells = np.round(quats * signs[:, None] * 1e9).astype(np.int64)
    _, first = np.unique(cells, axis=0, return_index=True)

    # the canonical string is exact, so it also merges any cell split by rounding
    canon = {}
    for i in sorted(first):
        canon.setdefault(kernels.normal_form(words[i]), i)
    entries = sorted(canon, key=sort_key)
    net_q = np.array([to_quaternion(word_matrix(w)) for w in entries])
    return BaseNet(quats=net_q, words=tuple(entries), max_h=int(max_h))


def _nearest_index(q, net, rng=None):
    if rng is None:
        best, _ = kernels.nearest(net.quats, q, 0.0)
        return best
    _, candidates = kernels.nearest(net.quats, q, JITTER_BAND)
    return int(candidates[rng.integers(len(candidates))])


def nearest(u, net, jitter_rng=None):
    """Closest net word to ``u``; with ``jitter_rng``, a uniform pick among near-best entries."""
    if len(net) == 0:
        raise DomainError("base net is empty")
    return net.words[_nearest_index(to_quaternion(u), net, jitter_rng)]


def _solve_phi(theta):
    """Bisection for ``sin(theta/2) = 2 s^2 sqrt(1 - s^4)``, ``s = sin(phi/2)``."""
    target = math.sin(theta / 2.0)
    lo, hi = 0.0, 2.0 * math.asin(2.0 ** -0.25)
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        s2 = math.sin(mid / 2.0) ** 2
        if 2.0 * s2 * math.sqrt(max(0.0, 1.0 - s2 * s2)) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _align(a, n):
    """Quaternion of a rotation taking unit vector ``a`` onto unit vector ``n``."""
    cross = np.cross(a, n)
    s, c = np.linalg.norm(cross), float(np.dot(a, n))
    if s < 1e-12:
        if c > 0:
            return np.array([1.0, 0.0, 0.0, 0.0])
        perp = np.cross(a, X_AXIS if abs(a[0]) < 0.9 else Y_AXIS)
        return quat_from_axis_angle(perp / np.linalg.norm(perp), math.pi)
    return quat_from_axis_angle(cross / s, math.atan2(s, c))


def _gc_quats(q):
    axis, theta = axis_angle(q)
    if theta < 1e-15:
        ident = np.array([1.0, 0.0, 0.0, 0.0])
        return ident, ident
    phi = _solve_phi(theta)
    v0 = quat_from_axis_angle(X_AXIS, phi)
    w0 = quat_from_axis_angle(Y_AXIS, phi)
    comm = quat_mul(quat_mul(v0, w0), quat_mul(quat_conj(v0), quat_conj(w0)))
    comm_axis, _ = axis_angle(comm)
    s = _align(comm_axis, axis)
    sc = quat_conj(s)
    return quat_mul(quat_mul(s, v0), sc), quat_mul(quat_mul(s, w0), sc)


def gc_decompose(u):
    """Balanced group commutator: ``V W V^dag W^dag == U`` up to phase."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol=1e-9):
        raise DomainError("gc_decompose needs a unitary operator")
    if not np.all(np.isfinite(u)):
        raise DomainError("gc_decompose got non-finite entries")
    qv, qw = _gc_quats(to_quaternion(u))
    return quat_to_matrix(qv), quat_to_matrix(qw)


def _base(q, net, rng):
    i = _nearest_index(q, net, rng)
    return net.words[i], net.quats[i]


def _sk(q, depth, net, rng):
    word, approx = _base(q, net, rng)
    for level in range(1, depth + 1):
        word, approx = _refine(q, word, approx, level, net, rng)
    return word, approx


def _refine(q, word, approx, level, net, rng):
    """One Solovay-Kitaev level on top of the level-1 approximation ``(word, approx)``."""
    delta = quat_mul(q, quat_conj(approx))
    _, angle = axis_angle(delta)
    if angle >= RESIDUAL_ANGLE_CAP:
        return _base(q, net, rng)
    qv, qw = _gc_quats(delta)
    wv, av = _sk(qv, level - 1, net, rng)
    ww, aw = _sk(qw, level - 1, net, rng)
    new_word = canonicalize(wv + ww + invert(wv) + invert(ww) + word)
    comm = quat_mul(quat_mul(av, aw), quat_mul(quat_conj(av), quat_conj(aw)))
    return new_word, quat_mul(comm, approx)


def sk(u, depth, net, jitter_rng=None):
    """Solovay-Kitaev word for ``u`` at recursion ``depth``."""
    if depth < 0:
        raise DomainError(f"depth must be non-negative, got {depth}")
    word, _ = _sk(to_quaternion(u), int(depth), net, jitter_rng)
    return word


def synthesize_rz(theta, b, max_h=DEFAULT_MAX_H, max_depth=DEFAULT_MAX_DEPTH,
                  jitter_rng=None, net=None):
    """Word within ``2**-b`` (op_distance) of ``rz(theta)``, at the smallest sufficient depth.

    Raises ``SynthesisError`` carrying the best distance if ``max_depth`` is not enough.
    """
    if b < 0:
        raise DomainError(f"bits of precision must be >= 0, got {b}")
    if net is None:
        net = build_base_net(max_h)
    eps = 2.0 ** -b
    target = rz(theta)
    q = to_quaternion(target)
    word, approx = _base(q, net, jitter_rng)
    best = None
    for depth in range(max_depth + 1):
        if depth > 0:
            word, approx = _refine(q, word, approx, depth, net, jitter_rng)
        dist = op_distance(word_matrix(word), target)
        if best is None or dist < best[0]:
            best = (dist, word)
        if dist <= eps:
            return SynthResult(word=word, achieved_distance=dist, depth_used=depth,
                               counts=counts(word))
    raise SynthesisError(
        f"could not reach precision 2^-{b} for theta={theta!r} within depth {max_depth}"
        f" (best distance {best[0]:.3g})",
        best_distance=best[0], best_word=best[1],
    )
