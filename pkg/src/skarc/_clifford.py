"""Single-qubit Clifford group tables (modulo global phase).

Used by the {H,S,T} normal form: a word is rewritten to
``(T | e)(HT | SHT)* C`` with ``C`` one of the 24 Cliffords, by pushing the
trailing Clifford through every incoming ``T``.
"""

import itertools

import numpy as np

from .su2 import GATES, canonical_sign, quat_conj, quat_mul, rotate_vector, to_quaternion

N_CLIFFORD = 24

# syllable codes
SYL_T, SYL_HT, SYL_SHT = 0, 1, 2
SYLLABLE_TEXT = ("T", "HT", "SHT")

# coset representative codes: C = A * D with D fixing the z axis (up to sign)
AXIS_I, AXIS_H, AXIS_SH = 0, 1, 2


def _key(q):
    return tuple(int(round(c * 1e6)) + 0 for c in canonical_sign(q))


def _word_quat(word):
    q = np.array([1.0, 0.0, 0.0, 0.0])
    for g in word:
        q = quat_mul(q, to_quaternion(GATES[g]))
    return q


def _build():
    # enumerate {H,S} words in (length, lexicographic) order; first hit is the spelling
    spelling, quats, index = [], [], {}
    length = 0
    while len(spelling) < N_CLIFFORD:
        for letters in itertools.product("HS", repeat=length):
            word = "".join(letters)
            q = canonical_sign(_word_quat(word))
            k = _key(q)
            if k not in index:
                index[k] = len(spelling)
                spelling.append(word)
                quats.append(q)
        length += 1
        if length > 12:
            raise RuntimeError("Clifford enumeration did not close")

    def lookup(q):
        return index[_key(q)]

    mul = [[lookup(quat_mul(quats[i], quats[j])) for j in range(N_CLIFFORD)]
           for i in range(N_CLIFFORD)]
    inv = [lookup(quat_conj(quats[i])) for i in range(N_CLIFFORD)]

    c_h = lookup(_word_quat("H"))
    c_s = lookup(_word_quat("S"))
    c_sh = mul[c_s][c_h]
    reps = {AXIS_I: 0, AXIS_H: c_h, AXIS_SH: c_sh}

    t_q = to_quaternion(GATES["T"])
    axis, tpush = [], []
    for c in range(N_CLIFFORD):
        image = rotate_vector(quats[c], [0.0, 0.0, 1.0])
        k = int(np.argmax(np.abs(image)))
        a = {2: AXIS_I, 0: AXIS_H, 1: AXIS_SH}[k]
        d = mul[inv[reps[a]]][c]
        # T^dag D T is again a Clifford because D normalizes the z axis
        dq = quat_mul(quat_mul(quat_conj(t_q), quats[d]), t_q)
        axis.append(a)
        tpush.append(lookup(dq))

    return {
        "spelling": tuple(spelling),
        "quats": np.array(quats),
        "mul": tuple(tuple(row) for row in mul),
        "inv": tuple(inv),
        "axis": tuple(axis),
        "tpush": tuple(tpush),
        "identity": 0,
        "h": c_h,
        "s": c_s,
        "hs": mul[c_h][c_s],
        "shs": mul[c_sh][c_s],
    }


TABLES = _build()
