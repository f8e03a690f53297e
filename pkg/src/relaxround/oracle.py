"""Slow, independent reference computations used to check the fast paths."""

from __future__ import annotations

import itertools
import math

import numpy as np

MAX_SUBSETS = 10**7
MAX_ENUM_N = 20


class OracleBudgetError(ValueError):
    pass


def _incidence(inst):
    a = np.zeros((inst.n, inst.r))
    for j in range(inst.r):
        for i in inst.right_indices[inst.right_indptr[j] : inst.right_indptr[j + 1]]:
            a[i, j] = 1.0
    return a


def brute_force_opt(inst, reward, k):
    """Exact ``max C(S)`` over ``|S| = k``; ties go to the lexicographically smallest set."""
    n = inst.n
    k = min(int(k), n)
    total = math.comb(n, k)
    if total > MAX_SUBSETS:
        raise OracleBudgetError(f"C({n}, {k}) = {total} subsets exceeds {MAX_SUBSETS}")
    A = _incidence(inst)
    phi = np.array([reward.phi(i) for i in range(int(A.sum(axis=0).max()) + 1)])
    w = np.asarray(inst.weights)
    best_v, best_S = -math.inf, ()
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, 4096))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), k)
        counts = A[idx].sum(axis=1).astype(np.int64) if k else np.zeros((len(chunk), inst.r), np.int64)
        vals = phi[counts] @ w
        t = int(np.argmax(vals))
        if vals[t] > best_v + 1e-12:
            best_v, best_S = float(vals[t]), tuple(chunk[t])
    return best_v, list(best_S)


def naive_greedy(inst, reward, k):
    """Plain greedy with full re-evaluation; gains within 1e-12 tie to the smaller index."""
    A = _incidence(inst)
    w = np.asarray(inst.weights)

    def value(sel):
        counts = A[sel].sum(axis=0).astype(np.int64) if sel else np.zeros(inst.r, np.int64)
        return float(sum(wj * reward.phi(int(cj)) for wj, cj in zip(w, counts)))

    S = []
    cur = 0.0
    for _ in range(min(int(k), inst.n)):
        best_i, best_g = None, -math.inf
        for i in range(inst.n):
            if i in S:
                continue
            g = value(S + [i]) - cur
            if g > best_g + 1e-12:
                best_i, best_g = i, g
        S.append(best_i)
        cur = value(S)
    return S


def reference_project(x, k):
    """Projection onto the hypersimplex by scanning every breakpoint.

    ``F(lam) = sum clip(x - lam, 0, 1)`` is evaluated at all breakpoints, the
    bracketing pair is located, and the root is solved from the active set
    on that interval: ``lam = (#ones + sum(free x) - k) / #free``.
    """
    x = np.asarray(x, dtype=np.float64)
    if k == 0 or k == x.size:
        return np.full(x.size, float(k > 0))
    pts = np.unique(np.concatenate([x - 1.0, x]))
    F = np.clip(x[None, :] - pts[:, None], 0.0, 1.0).sum(axis=1)
    exact = np.flatnonzero(F == k)
    if exact.size:
        lam = pts[exact[0]]
        return np.clip(x - lam, 0.0, 1.0)
    a = int(np.flatnonzero(F >= k)[-1])
    lo, hi = pts[a], pts[a + 1]
    mid = 0.5 * (lo + hi)
    ones = x - mid >= 1.0
    free = (x - mid > 0.0) & ~ones
    lam = (ones.sum() + x[free].sum() - k) / free.sum()
    return np.clip(x - lam, 0.0, 1.0)


def fd_gradient(inst, reward, x, mu, h=1e-6):
    """Central differences of the smoothed objective."""
    from .objective import SmoothingContext

    ctx = SmoothingContext(inst, reward, mu)
    x = np.asarray(x, dtype=np.float64)
    g = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (ctx.value(xp) - ctx.value(xm)) / (2.0 * h)
    return g


def _mp_pieces(reward, deg):
    """Distinct linear pieces ``(slope, intercept)`` of ``phi`` on ``[0, deg]``.

    A run of equal slopes (to 1e-12 relative) describes a single line, so
    only its first member is kept; this is the family the smoothing takes the soft minimum over.
    """
    phi = [reward.phi(i) for i in range(deg + 1)]
    pieces, last = [], None
    for i in range(1, deg + 1):
        s = phi[i] - phi[i - 1]
        if last is None or abs(s - last) > 1e-12 * max(abs(last), 1.0):
            pieces.append((s, phi[i - 1] - s * (i - 1)))
            last = s
    return pieces


def fd_gradient_mp(inst, reward, x, mu, h=1e-15, dps=40):
    """Central differences of the smoothed objective in ``dps``-digit arithmetic.

    Double-precision differences cannot resolve gradients much below
    ``1e-10``; here the soft minimum ``-mu log sum exp(-piece / mu)`` is
    re-evaluated with mpmath, and only the right nodes touching coordinate
    ``i`` are differenced since the others cancel exactly.
    """
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = dps
    mu_mp, h_mp = ctx.mpf(mu), ctx.mpf(h)

    def soft_min(y, pieces):
        vals = [ctx.mpf(s) * y + ctx.mpf(b) for s, b in pieces]
        lo = min(vals)
        return lo - mu_mp * ctx.log(ctx.fsum(ctx.exp(-(v - lo) / mu_mp) for v in vals))

    xs = [ctx.mpf(float(v)) for v in np.asarray(x, dtype=np.float64)]
    nbrs = [[int(i) for i in inst.right_indices[inst.right_indptr[j] : inst.right_indptr[j + 1]]]
            for j in range(inst.r)]
    loads = [ctx.fsum(xs[i] for i in nb) for nb in nbrs]
    pieces = [_mp_pieces(reward, len(nb)) for nb in nbrs]
    touching = [[] for _ in range(inst.n)]
    for j, nb in enumerate(nbrs):
        for i in nb:
            touching[i].append(j)
    g = np.zeros(inst.n)
    for i in range(inst.n):
        d = ctx.mpf(0)
        for j in touching[i]:
            # the derivative can be as small as exp(-spread / mu); carry enough digits
            vals = [s * float(loads[j]) + b for s, b in pieces[j]]
            extra = int((max(vals) - min(vals)) / (mu * math.log(10.0))) + 1
            with ctx.workdps(dps + extra):
                diff = soft_min(loads[j] + h_mp, pieces[j]) - soft_min(loads[j] - h_mp, pieces[j])
                d += ctx.mpf(float(inst.weights[j])) * diff
        g[i] = float(d / (2 * h_mp))
    return g


def exhaustive_multilinear(inst, reward, x):
    """``sum_S C(S) prod_{i in S} x_i prod_{i not in S} (1 - x_i)`` over all ``2^n`` sets."""
    n = inst.n
    if n > MAX_ENUM_N:
        raise OracleBudgetError(f"n = {n} is too large for full enumeration")
    x = np.asarray(x, dtype=np.float64)
    masks = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    probs = np.where(masks == 1, x[None, :], 1.0 - x[None, :]).prod(axis=1)
    counts = (masks @ _incidence(inst)).astype(np.int64)
    phi = np.array([reward.phi(i) for i in range(int(counts.max()) + 1)])
    return float(probs @ (phi[counts] @ np.asarray(inst.weights)))


def lp_lower_bound(inst, k):
    """``0.43 * sqrt(k d_R) / n``, a floor on the relaxation optimum."""
    d_R = float(np.dot(inst.weights, np.diff(inst.right_indptr)))
    return 0.43 * math.sqrt(k * d_R) / inst.n
