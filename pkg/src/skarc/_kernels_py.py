"""Pure-Python implementations of the hot kernels.

These are the reference semantics; ``_ckernels.pyx`` mirrors them function by
function and ``kernels`` picks one at import time.
"""

import numpy as np

from ._clifford import SYL_HT, SYL_SHT, SYL_T, SYLLABLE_TEXT, TABLES, AXIS_I, AXIS_H

_MUL = TABLES["mul"]
_AXIS = TABLES["axis"]
_TPUSH = TABLES["tpush"]
_SPELL = TABLES["spelling"]
_C_H, _C_S, _C_HS, _C_SHS = TABLES["h"], TABLES["s"], TABLES["hs"], TABLES["shs"]
TIE_TOL = 1e-12
_MERGE = {SYL_T: _C_S, SYL_HT: _C_HS, SYL_SHT: _C_SHS}


def collapse(word):
    """Syntactic reduction to ``T^a0 H T^a1 H ... H T^an`` (interior a in 1..7, no HH)."""
    exps = [0]
    for g in word:
        if g == "H":
            if len(exps) > 1 and exps[-1] == 0:
                exps.pop()
            else:
                exps.append(0)
        elif g == "S":
            exps[-1] = (exps[-1] + 2) & 7
        elif g == "T":
            exps[-1] = (exps[-1] + 1) & 7
        else:
            raise ValueError(f"invalid gate symbol {g!r}")
    return "H".join("S" * (a >> 1) + "T" * (a & 1) for a in exps)


def normal_form(word):
    """Canonical string of the operator spelled by ``word`` (unique up to global phase)."""
    syllables = []
    c = 0
    for g in word:
        if g == "H":
            c = _MUL[c][_C_H]
        elif g == "S":
            c = _MUL[c][_C_S]
        elif g == "T":
            a, d = _AXIS[c], _TPUSH[c]
            if a == AXIS_I:
                if syllables:
                    c = _MUL[_MERGE[syllables.pop()]][d]
                else:
                    syllables.append(SYL_T)
                    c = d
            else:
                syllables.append(SYL_HT if a == AXIS_H else SYL_SHT)
                c = d
        else:
            raise ValueError(f"invalid gate symbol {g!r}")
    return collapse("".join(SYLLABLE_TEXT[s] for s in syllables) + _SPELL[c])


def word_product(codes, table):
    """Ordered product ``table[codes[0]] @ table[codes[1]] @ ...`` of 2x2 matrices."""
    mats = [tuple(complex(v) for v in m.ravel()) for m in np.asarray(table)]
    a, b, c, d = 1 + 0j, 0j, 0j, 1 + 0j
    for k in codes:
        e, f, g, h = mats[k]
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    return np.array([[a, b], [c, d]], dtype=complex)


def nearest(quats, q, band):
    """Index of the best match and, if ``band > 0``, all indices within ``band`` x the best distance.

    Distance is ``min(|q_i - q|, |q_i + q|)``, monotone in op_distance. Distances within
    ``TIE_TOL`` of the minimum count as ties and go to the lowest index.
    """
    q = np.asarray(q, dtype=float)
    # sequential component sums so rounding matches the compiled kernel
    dm = (quats[:, 0] - q[0]) ** 2
    dp = (quats[:, 0] + q[0]) ** 2
    for k in (1, 2, 3):
        dm += (quats[:, k] - q[k]) ** 2
        dp += (quats[:, k] + q[k]) ** 2
    dist = np.sqrt(np.minimum(dm, dp))
    best = int(np.flatnonzero(dist <= dist.min() + TIE_TOL)[0])
    if band <= 0.0:
        return best, None
    limit = dist[best] * band + 1e-15
    return best, np.flatnonzero(dist <= limit)
