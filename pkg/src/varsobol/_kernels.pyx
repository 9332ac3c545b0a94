# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a numpy twin in ``_fallback.py`` with the same
signature; ``kernels.py`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, exp, M_PI

cnp.import_array()

cdef double _E_MINUS_1 = 1.718281828459045


cdef inline double _bank(int fid, double x) noexcept nogil:
    if fid == 0:
        return x
    elif fid == 1:
        return x * x
    elif fid == 2:
        return x * x * x
    elif fid == 3:
        return (exp(x) - 1.0) / _E_MINUS_1
    elif fid == 4:
        return sin(2.0 * M_PI * x)
    elif fid == 5:
        return 1.0 if x > 0.5 else 0.0
    elif fid == 6:
        return 4.0 * x * (1.0 - x)
    elif fid == 7:
        return 1.0 / (10.0 * (x + 0.1))
    elif fid == 8:
        return cos(M_PI * x)
    return 0.0


def bank_eval(const double[:, :] x, const int[:] ids):
    cdef Py_ssize_t n = x.shape[0], k = x.shape[1], r, c
    out = np.empty((n, k), dtype=np.float64)
    cdef double[:, :] F = out
    with nogil:
        for r in range(n):
            for c in range(k):
                F[r, c] = _bank(ids[c], x[r, c])
    return out


cdef inline double _combine_row(
    const double[:] f,
    const double[:] alpha,
    const int[:, :] pairs,
    const double[:] beta,
    const int[:, :] triples,
    const double[:] gamma,
) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(alpha.shape[0]):
        acc += alpha[i] * f[i]
    for i in range(pairs.shape[0]):
        acc += beta[i] * f[pairs[i, 0]] * f[pairs[i, 1]]
    for i in range(triples.shape[0]):
        acc += gamma[i] * f[triples[i, 0]] * f[triples[i, 1]] * f[triples[i, 2]]
    return acc


def combine(
    const double[:, :] F,
    const double[:] alpha,
    const int[:, :] pairs,
    const double[:] beta,
    const int[:, :] triples,
    const double[:] gamma,
):
    cdef Py_ssize_t n = F.shape[0], r
    out = np.empty(n, dtype=np.float64)
    cdef double[:] y = out
    with nogil:
        for r in range(n):
            y[r] = _combine_row(F[r], alpha, pairs, beta, triples, gamma)
    return out


def combine_ab(
    const double[:, :] FA,
    const double[:, :] FB,
    const double[:] alpha,
    const int[:, :] pairs,
    const double[:] beta,
    const int[:, :] triples,
    const double[:] gamma,
):
    cdef Py_ssize_t n = FA.shape[0], k = FA.shape[1], r, i, c
    yA_arr = np.empty(n, dtype=np.float64)
    yAB_arr = np.empty((k, n), dtype=np.float64)
    row_arr = np.empty(k, dtype=np.float64)
    cdef double[:] yA = yA_arr
    cdef double[:, :] yAB = yAB_arr
    cdef double[:] row = row_arr
    cdef double saved
    with nogil:
        for r in range(n):
            for c in range(k):
                row[c] = FA[r, c]
            yA[r] = _combine_row(row, alpha, pairs, beta, triples, gamma)
            for i in range(k):
                saved = row[i]
                row[i] = FB[r, i]
                yAB[i, r] = _combine_row(row, alpha, pairs, beta, triples, gamma)
                row[i] = saved
    return yA_arr, yAB_arr


def combine_star(
    const double[:, :] Fc,
    const double[:, :, :] Fg,
    const int[:, :] cpos,
    const double[:] alpha,
    const int[:, :] pairs,
    const double[:] beta,
    const int[:, :] triples,
    const double[:] gamma,
):
    cdef Py_ssize_t S = Fc.shape[0], k = Fc.shape[1], m = Fg.shape[2]
    cdef Py_ssize_t per_star = k * (m - 1) + 1
    cdef Py_ssize_t v, i, j, c, idx
    out = np.empty(S * per_star, dtype=np.float64)
    row_arr = np.empty(k, dtype=np.float64)
    cdef double[:] y = out
    cdef double[:] row = row_arr
    cdef double saved
    with nogil:
        for v in range(S):
            for c in range(k):
                row[c] = Fc[v, c]
            idx = v * per_star
            y[idx] = _combine_row(row, alpha, pairs, beta, triples, gamma)
            idx += 1
            for i in range(k):
                saved = row[i]
                for j in range(m):
                    if j == cpos[v, i]:
                        continue
                    row[i] = Fg[v, i, j]
                    y[idx] = _combine_row(row, alpha, pairs, beta, triples, gamma)
                    idx += 1
                row[i] = saved
    return out


def section_stats(const double[:] y, const long[:, :] sections, int max_lag):
    """Per-section, per-lag pair statistics.

    Returns (gamma, cov, mean_head, mean_tail, var_head, var_tail), each of
    shape (n_sections, max_lag). Variances and covariances use population
    normalisation.
    """
    cdef Py_ssize_t Q = sections.shape[0], m = sections.shape[1]
    cdef Py_ssize_t q, l, j, npair
    cdef double a, b, ma, mb, sa, sb, sab, sd, y0
    shape = (Q, max_lag)
    g_arr = np.zeros(shape)
    c_arr = np.zeros(shape)
    mh_arr = np.zeros(shape)
    mt_arr = np.zeros(shape)
    vh_arr = np.zeros(shape)
    vt_arr = np.zeros(shape)
    cdef double[:, :] G = g_arr, C = c_arr, MH = mh_arr, MT = mt_arr, VH = vh_arr, VT = vt_arr
    with nogil:
        for q in range(Q):
            # Work relative to the first value so constant sections give exact zeros.
            y0 = y[sections[q, 0]]
            for l in range(1, max_lag + 1):
                npair = m - l
                if npair <= 0:
                    continue
                ma = 0.0
                mb = 0.0
                for j in range(npair):
                    ma += y[sections[q, j]] - y0
                    mb += y[sections[q, j + l]] - y0
                ma /= npair
                mb /= npair
                sa = 0.0
                sb = 0.0
                sab = 0.0
                sd = 0.0
                for j in range(npair):
                    a = y[sections[q, j]] - y0
                    b = y[sections[q, j + l]] - y0
                    sa += (a - ma) * (a - ma)
                    sb += (b - mb) * (b - mb)
                    sab += (a - ma) * (b - mb)
                    sd += (a - b) * (a - b)
                G[q, l - 1] = 0.5 * sd / npair
                C[q, l - 1] = sab / npair
                MH[q, l - 1] = ma + y0
                MT[q, l - 1] = mb + y0
                VH[q, l - 1] = sa / npair
                VT[q, l - 1] = sb / npair
    return g_arr, c_arr, mh_arr, mt_arr, vh_arr, vt_arr
