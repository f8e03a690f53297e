"""Lazy greedy selection for the discrete coverage objective."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .objective import FractionalPoint


@dataclass
class GreedyResult:
    selected: list
    gains: list = field(default_factory=list)
    requested_k: int = 0

    @property
    def value(self):
        return float(sum(self.gains))

    @property
    def trace(self):
        """Objective value after each pick."""
        return np.cumsum(self.gains).tolist()

    @property
    def truncated(self):
        """True when ``k`` exceeded ``n`` and only ``n`` elements were picked."""
        return len(self.selected) < self.requested_k


def greedy_select(inst, reward, k):
    """Pick ``min(k, n)`` left nodes by largest marginal gain.

    Stale gains sit in a heap keyed by ``(-gain, index)``; a popped element
    is accepted once its fresh gain still beats the next stale bound. Gains
    only shrink as the selection grows, so this reproduces plain greedy,
    including its smallest-index tie rule. Zero-gain elements are still
    picked so that exactly ``min(k, n)`` nodes come back.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    steps = min(int(k), inst.n)
    lp, li, w = inst.left_indptr, inst.left_indices, inst.weights
    slopes = np.ascontiguousarray(reward.slopes(int(inst.degrees.max()) + 1))
    counts = np.zeros(inst.r, dtype=np.int64)
    result = GreedyResult(selected=[], gains=[], requested_k=int(k))
    if steps == 0:
        return result
    heap = [(-g, i) for i, g in enumerate(kernels.all_gains(lp, li, w, counts, slopes).tolist())]
    heapq.heapify(heap)
    while len(result.selected) < steps:
        _, i = heapq.heappop(heap)
        g = kernels.marginal_gain(lp, li, w, counts, slopes, i)
        if heap and (-g, i) > heap[0]:
            heapq.heappush(heap, (-g, i))
            continue
        kernels.add_element(lp, li, counts, i)
        result.selected.append(i)
        result.gains.append(g)
    return result


def greedy_indicator(S, n, k):
    """0/1 vector of ``S`` padded with the lowest unselected indices up to ``k`` ones."""
    if len(S) > k or k > n:
        raise ValueError(f"need |S| <= k <= n, got |S|={len(S)}, k={k}, n={n}")
    x = np.zeros(n, dtype=np.float64)
    x[list(S)] = 1.0
    short = k - int(x.sum())
    if short > 0:
        free = np.flatnonzero(x == 0.0)[:short]
        x[free] = 1.0
    return FractionalPoint(x, int(k))
