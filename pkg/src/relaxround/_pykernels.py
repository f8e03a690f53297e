"""Numpy implementations of the inner loops, used when the extension is absent."""

import numpy as np


def _loads(x, indptr, indices):
    # segment sums; empty segments never occur (deg >= 1)
    return np.add.reduceat(x[indices], indptr[:-1]) if indices.size else np.zeros(len(indptr) - 1)


def smooth_eval(x, indptr, indices, weights, npieces, pslope, picpt, mu, grad=None):
    y = _loads(x, indptr, indices)
    r = len(y)
    # flatten (node, piece) pairs
    starts = np.zeros(r + 1, dtype=np.int64)
    np.cumsum(npieces, out=starts[1:])
    node = np.repeat(np.arange(r), npieces)
    piece = np.arange(starts[-1]) - starts[node]
    e = -(pslope[piece] * y[node] + picpt[piece]) / mu
    emax = np.maximum.reduceat(e, starts[:-1])
    z = np.exp(e - emax[node])
    s = np.add.reduceat(z, starts[:-1])
    ezs = np.add.reduceat(z * pslope[piece], starts[:-1])
    vals = -mu * (emax + np.log(s))
    ey = ezs / s
    single = npieces == 1
    if single.any():
        vals[single] = pslope[0] * y[single] + picpt[0]
        ey[single] = pslope[0]
    if grad is not None:
        deg = np.diff(indptr)
        grad[:] = np.bincount(indices, weights=np.repeat(weights * ey, deg), minlength=len(grad))
    return float(np.dot(weights, vals))


def fractional_eval(x, indptr, indices, weights, phi_tab):
    y = np.maximum(_loads(x, indptr, indices), 0.0)
    lo = np.minimum(np.floor(y).astype(np.int64), len(phi_tab) - 2)
    fr = y - lo
    return float(np.dot(weights, (1.0 - fr) * phi_tab[lo] + fr * phi_tab[lo + 1]))


def marginal_gain(left_indptr, left_indices, weights, counts, slopes, i):
    js = left_indices[left_indptr[i] : left_indptr[i + 1]]
    g = 0.0
    for w, s in zip(weights[js].tolist(), slopes[counts[js] + 1].tolist()):
        g += w * s
    return g


def all_gains(left_indptr, left_indices, weights, counts, slopes):
    n = len(left_indptr) - 1
    return np.array(
        [marginal_gain(left_indptr, left_indices, weights, counts, slopes, i) for i in range(n)],
        dtype=np.float64,
    )


def add_element(left_indptr, left_indices, counts, i):
    counts[left_indices[left_indptr[i] : left_indptr[i + 1]]] += 1
