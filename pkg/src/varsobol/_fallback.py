"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np

_E_MINUS_1 = np.e - 1.0

# Chunk size (in design points) for assembling star designs.
_STAR_CHUNK = 1 << 16


def _bank_column(fid, x):
    if fid == 0:
        return x.copy()
    if fid == 1:
        return x * x
    if fid == 2:
        return x * x * x
    if fid == 3:
        return (np.exp(x) - 1.0) / _E_MINUS_1
    if fid == 4:
        return np.sin(2.0 * np.pi * x)
    if fid == 5:
        return np.where(x > 0.5, 1.0, 0.0)
    if fid == 6:
        return 4.0 * x * (1.0 - x)
    if fid == 7:
        return 1.0 / (10.0 * (x + 0.1))
    if fid == 8:
        return np.cos(np.pi * x)
    return np.zeros_like(x)


def bank_eval(x, ids):
    x = np.asarray(x, dtype=np.float64)
    F = np.empty_like(x)
    for fid in np.unique(ids):
        cols = np.flatnonzero(ids == fid)
        F[:, cols] = _bank_column(int(fid), x[:, cols])
    return F


def combine(F, alpha, pairs, beta, triples, gamma):
    # Accumulate term by term so each row's result depends only on that row.
    y = np.zeros(F.shape[0])
    for i in range(alpha.shape[0]):
        y += alpha[i] * F[:, i]
    for (u, v), b in zip(pairs, beta):
        y += b * F[:, u] * F[:, v]
    for (u, v, w), g in zip(triples, gamma):
        y += g * F[:, u] * F[:, v] * F[:, w]
    return y


def combine_ab(FA, FB, alpha, pairs, beta, triples, gamma):
    n, k = FA.shape
    yA = combine(FA, alpha, pairs, beta, triples, gamma)
    yAB = np.empty((k, n))
    work = np.array(FA, dtype=np.float64, copy=True)
    for i in range(k):
        work[:, i] = FB[:, i]
        yAB[i] = combine(work, alpha, pairs, beta, triples, gamma)
        work[:, i] = FA[:, i]
    return yA, yAB


def _star_rows(Fc, Fg, cpos, v):
    k, m = Fg.shape[1], Fg.shape[2]
    rows = np.repeat(Fc[v][None, :], k * (m - 1) + 1, axis=0)
    r = 1
    for i in range(k):
        keep = np.delete(np.arange(m), cpos[v, i])
        rows[r:r + m - 1, i] = Fg[v, i, keep]
        r += m - 1
    return rows


def combine_star(Fc, Fg, cpos, alpha, pairs, beta, triples, gamma):
    S, k = Fc.shape
    m = Fg.shape[2]
    per_star = k * (m - 1) + 1
    step = max(1, _STAR_CHUNK // per_star)
    out = np.empty(S * per_star)
    for start in range(0, S, step):
        stop = min(S, start + step)
        block = np.concatenate([_star_rows(Fc, Fg, cpos, v) for v in range(start, stop)])
        out[start * per_star:stop * per_star] = combine(block, alpha, pairs, beta, triples, gamma)
    return out


def section_stats(y, sections, max_lag):
    Ys = np.asarray(y)[sections]
    # Work relative to the first value so constant sections give exact zeros.
    y0 = Ys[:, :1].copy()
    Ys = Ys - y0
    Q, m = Ys.shape
    shape = (Q, max_lag)
    out = [np.zeros(shape) for _ in range(6)]
    G, C, MH, MT, VH, VT = out
    for lag in range(1, max_lag + 1):
        if m - lag <= 0:
            continue
        a = Ys[:, :-lag]
        b = Ys[:, lag:]
        ma = a.mean(axis=1)
        mb = b.mean(axis=1)
        da = a - ma[:, None]
        db = b - mb[:, None]
        G[:, lag - 1] = 0.5 * np.mean((a - b) ** 2, axis=1)
        C[:, lag - 1] = np.mean(da * db, axis=1)
        MH[:, lag - 1] = ma + y0[:, 0]
        MT[:, lag - 1] = mb + y0[:, 0]
        VH[:, lag - 1] = np.mean(da * da, axis=1)
        VT[:, lag - 1] = np.mean(db * db, axis=1)
    return G, C, MH, MT, VH, VT
