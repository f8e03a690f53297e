"""Carathéodory decomposition of hypersimplex points and randomized swap rounding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import coverage_discrete

FEASIBILITY_TOL = 1e-8
# coordinates this close to 0 or to the remaining mass count as settled
SNAP_TOL = 1e-14
# stop peeling once the unassigned mass is this many SNAP_TOLs per active coordinate
TAIL_FACTOR = 4


class RoundingError(ValueError):
    pass


@dataclass
class Decomposition:
    """``x = sum_t weights[t] * 1_{bases[t]}``; every base has ``k`` sorted indices."""

    weights: list
    bases: list
    n: int
    k: int

    def __len__(self):
        return len(self.weights)

    def reconstruct(self):
        x = np.zeros(self.n)
        for a, v in zip(self.weights, self.bases):
            x[list(v)] += a
        return x


def _check_point(x, k=None):
    x = np.asarray(x, dtype=np.float64)
    total = x.sum()
    if k is None:
        k = int(round(total))
    if (x < -FEASIBILITY_TOL).any() or (x > 1 + FEASIBILITY_TOL).any():
        raise RoundingError("point leaves the unit box")
    if abs(total - k) > FEASIBILITY_TOL * max(1.0, x.size):
        raise RoundingError(f"coordinates sum to {total!r}, not an integer budget")
    return np.clip(x, 0.0, 1.0), k


def caratheodory_decompose(x, k=None):
    """Peel off the vertex on the ``k`` largest coordinates with the largest
    feasible weight, repeatedly, until the residual is itself a vertex.

    The residual is tracked as absolute mass ``z = w * x_t`` (``w`` the mass
    still unassigned) so that no rescaling by ``1 / (1 - beta)`` amplifies
    rounding error. Coordinates at ``0`` or ``w`` are settled and leave the
    active set; every step settles at least one, giving at most ``n`` terms.
    Ties in the top-``k`` choice go to the lower index.
    """
    x, k = _check_point(x, k)
    n = x.size
    ones = np.flatnonzero(x >= 1.0 - SNAP_TOL)
    active = np.flatnonzero((x > SNAP_TOL) & (x < 1.0 - SNAP_TOL))
    z = x[active].copy()
    slots = k - ones.size
    w = 1.0
    weights, bases = [], []
    fixed_ones = list(ones.tolist())

    while True:
        if active.size == 0 or slots <= 0 or slots >= active.size:
            if slots >= active.size:
                fixed_ones.extend(active.tolist())
            weights.append(w)
            bases.append(tuple(sorted(fixed_ones)))
            break
        # stable sort on -z keeps lower indices first among ties
        order = np.argsort(-z, kind="stable")
        top, rest = order[:slots], order[slots:]
        if w <= TAIL_FACTOR * active.size * SNAP_TOL:
            # leftover mass is at roundoff level; hand it to one last vertex
            weights.append(w)
            bases.append(tuple(sorted(fixed_ones + active[top].tolist())))
            break
        in_min = z[top].min()
        out_min = (w - z[rest]).min()
        alpha = min(in_min, out_min)
        if alpha >= w - SNAP_TOL:
            weights.append(w)
            bases.append(tuple(sorted(fixed_ones + active[top].tolist())))
            break
        weights.append(alpha)
        bases.append(tuple(sorted(fixed_ones + active[top].tolist())))
        z[top] -= alpha
        w -= alpha
        zero = z <= SNAP_TOL
        full = (w - z) <= SNAP_TOL
        # the binding coordinate settles even if roundoff left it a hair away
        if in_min <= out_min:
            zero[top[np.argmin(z[top])]] = True
        else:
            full[rest[np.argmax(z[rest])]] = True
        newly_full = np.flatnonzero(full & ~zero)
        if newly_full.size > slots:
            # only possible through roundoff: keep the largest
            newly_full = newly_full[np.argsort(-z[newly_full], kind="stable")[:slots]]
            full[:] = False
            full[newly_full] = True
        fixed_ones.extend(active[newly_full].tolist())
        slots -= newly_full.size
        keep = ~(zero | full)
        active, z = active[keep], z[keep]
    return Decomposition(weights=weights, bases=bases, n=n, k=k)


def merge_bases(a1, v1, a2, v2, rng):
    """Randomized swaps until the two bases agree.

    Elements of ``v1 - v2`` and ``v2 - v1`` are paired positionally in
    ascending order. For each pair, with probability ``a1 / (a1 + a2)`` the
    element from ``v1`` survives, otherwise the one from ``v2``.
    """
    s1, s2 = set(v1), set(v2)
    if len(s1) != len(v1) or len(s2) != len(v2) or len(s1) != len(s2):
        raise RoundingError("bases must be duplicate-free and of equal size")
    if not (a1 > 0 and a2 > 0):
        raise RoundingError("merge weights must be positive")
    only1 = sorted(s1 - s2)
    only2 = sorted(s2 - s1)
    if not only1:
        return a1 + a2, tuple(sorted(s1))
    p = a1 / (a1 + a2)
    keep_first = rng.random(len(only1)) < p
    merged = s1 & s2
    merged.update(i if kf else j for i, j, kf in zip(only1, only2, keep_first))
    return a1 + a2, tuple(sorted(merged))


def _swap_round_decomposed(dec, rng):
    a, v = dec.weights[0], dec.bases[0]
    for a2, v2 in zip(dec.weights[1:], dec.bases[1:]):
        a, v = merge_bases(a, v, a2, v2, rng)
    return list(v)


def swap_round(x, rng, k=None):
    """Round ``x`` in the hypersimplex to a ``k``-subset; ``P(i in S) = x_i``."""
    return _swap_round_decomposed(caratheodory_decompose(x, k), rng)


def round_best_of(inst, reward, x, trials, rng, k=None):
    """Best of ``trials`` independent swap roundings by discrete value.

    The decomposition is deterministic, so it is computed once; trials draw
    from ``rng`` in sequence. Returns ``(set, value, values)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dec = caratheodory_decompose(x, k)
    best_S, best_v = None, -np.inf
    values = []
    for _ in range(trials):
        S = _swap_round_decomposed(dec, rng)
        v = coverage_discrete(inst, reward, S)
        values.append(v)
        if v > best_v:
            best_S, best_v = S, v
    return best_S, best_v, values
