# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures, same results."""

from libc.math cimport sqrt
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

from ._clifford import SYLLABLE_TEXT, TABLES

cnp.import_array()

cdef int MUL[24][24]
cdef int AXIS[24]
cdef int TPUSH[24]
cdef int C_H = TABLES["h"]
cdef int C_S = TABLES["s"]
cdef int MERGE[3]
cdef double TIE_TOL = 1e-12

cdef object SPELL = tuple(s.encode("ascii") for s in TABLES["spelling"])
cdef object SYL = tuple(s.encode("ascii") for s in SYLLABLE_TEXT)


def _init():
    cdef int i, j
    for i in range(24):
        AXIS[i] = TABLES["axis"][i]
        TPUSH[i] = TABLES["tpush"][i]
        for j in range(24):
            MUL[i][j] = TABLES["mul"][i][j]
    MERGE[0] = TABLES["s"]
    MERGE[1] = TABLES["hs"]
    MERGE[2] = TABLES["shs"]


_init()


cdef bytes _collapse(const unsigned char[:] w):
    cdef Py_ssize_t n = w.shape[0], i, k, top = 0, out_len = 0
    cdef int *exps = <int *> malloc((n + 1) * sizeof(int))
    cdef unsigned char *buf
    cdef unsigned char g
    cdef int a
    if exps == NULL:
        raise MemoryError()
    try:
        exps[0] = 0
        for i in range(n):
            g = w[i]
            if g == 72:  # H
                if top > 0 and exps[top] == 0:
                    top -= 1
                else:
                    top += 1
                    exps[top] = 0
            elif g == 83:  # S
                exps[top] = (exps[top] + 2) & 7
            elif g == 84:  # T
                exps[top] = (exps[top] + 1) & 7
            else:
                raise ValueError(f"invalid gate symbol {chr(g)!r}")
        for k in range(top + 1):
            out_len += (exps[k] >> 1) + (exps[k] & 1)
        out_len += top
        buf = <unsigned char *> malloc(out_len + 1)
        if buf == NULL:
            raise MemoryError()
        try:
            i = 0
            for k in range(top + 1):
                if k > 0:
                    buf[i] = 72
                    i += 1
                for a in range(exps[k] >> 1):
                    buf[i] = 83
                    i += 1
                if exps[k] & 1:
                    buf[i] = 84
                    i += 1
            return buf[:out_len]
        finally:
            free(buf)
    finally:
        free(exps)


def collapse(str word):
    return _collapse(word.encode("ascii")).decode("ascii")


def normal_form(str word):
    cdef bytes raw = word.encode("ascii")
    cdef const unsigned char[:] w = raw
    cdef Py_ssize_t n = w.shape[0], i, nsyl = 0
    cdef int *syl = <int *> malloc((n + 1) * sizeof(int))
    cdef int c = 0, a, d
    cdef unsigned char g
    if syl == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            g = w[i]
            if g == 72:
                c = MUL[c][C_H]
            elif g == 83:
                c = MUL[c][C_S]
            elif g == 84:
                a = AXIS[c]
                d = TPUSH[c]
                if a == 0:
                    if nsyl > 0:
                        nsyl -= 1
                        c = MUL[MERGE[syl[nsyl]]][d]
                    else:
                        syl[0] = 0
                        nsyl = 1
                        c = d
                else:
                    syl[nsyl] = a
                    nsyl += 1
                    c = d
            else:
                raise ValueError(f"invalid gate symbol {chr(g)!r}")
        parts = [SYL[syl[i]] for i in range(nsyl)]
    finally:
        free(syl)
    parts.append(SPELL[c])
    return _collapse(b"".join(parts)).decode("ascii")


def word_product(codes, table):
    cdef const unsigned char[:] cs = np.ascontiguousarray(codes, dtype=np.uint8)
    cdef double complex[:, :, :] t = np.ascontiguousarray(table, dtype=np.complex128)
    cdef double complex a = 1, b = 0, c = 0, d = 1, e, f, g, h, na, nb, nc
    cdef Py_ssize_t i, k
    for i in range(cs.shape[0]):
        k = cs[i]
        e = t[k, 0, 0]
        f = t[k, 0, 1]
        g = t[k, 1, 0]
        h = t[k, 1, 1]
        na = a * e + b * g
        nb = a * f + b * h
        nc = c * e + d * g
        d = c * f + d * h
        a = na
        b = nb
        c = nc
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def nearest(quats, q, double band):
    cdef const double[:, :] Q = np.ascontiguousarray(quats, dtype=np.float64)
    cdef const double[:] v = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t n = Q.shape[0], i, k, best = 0
    cdef double dm, dp, t, bestd = 1e300, limit
    cdef double[:] dist = np.empty(n, dtype=np.float64)
    for i in range(n):
        dm = 0.0
        dp = 0.0
        for k in range(4):
            t = Q[i, k] - v[k]
            dm += t * t
            t = Q[i, k] + v[k]
            dp += t * t
        t = sqrt(dm if dm < dp else dp)
        dist[i] = t
        if t < bestd:
            bestd = t
    for i in range(n):
        if dist[i] <= bestd + TIE_TOL:
            best = i
            break
    if band <= 0.0:
        return int(best), None
    limit = bestd * band + 1e-15
    out = [i for i in range(n) if dist[i] <= limit]
    return int(best), np.array(out, dtype=np.intp)
