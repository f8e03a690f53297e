"""Coverage objectives: discrete, LP relaxation, LSE-smoothed, multilinear.

For right node ``j`` with load ``y_j = sum_{i in N(j)} x_i`` the relaxation
value is the piecewise-linear extension ``phi(y_j)``, which equals the minimum
of the linear pieces ``s(i) * y_j + b_i`` for ``i = 1..deg(j)``. The smoothed
objective replaces that minimum by ``-mu * log(sum(exp(-piece / mu)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

BOX_TOL = 1e-9
# slopes this close (relative) describe the same line
SLOPE_MERGE_TOL = 1e-12


class ObjectiveError(ValueError):
    pass


@dataclass
class FractionalPoint:
    """A point of the hypersimplex ``{x in [0,1]^n : sum(x) = k}``."""

    x: np.ndarray
    k: int

    def check(self, tol=1e-8):
        x = self.x
        if x.ndim != 1:
            raise ObjectiveError("fractional point must be a vector")
        if (x < -tol).any() or (x > 1 + tol).any():
            raise ObjectiveError("fractional point leaves the unit box")
        if abs(x.sum() - self.k) > tol:
            raise ObjectiveError(f"coordinates sum to {x.sum()!r}, expected {self.k}")
        return self


def effective_degree(inst):
    """``d_R = sum_j w_j deg(j)``."""
    return float(np.dot(inst.weights, inst.degrees))


def _as_box_vector(inst, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (inst.n,):
        raise ObjectiveError(f"expected a vector of length {inst.n}, got shape {x.shape}")
    if (x < -BOX_TOL).any() or (x > 1 + BOX_TOL).any():
        raise ObjectiveError("x must lie in [0, 1]^n")
    return x


def coverage_discrete(inst, reward, S):
    """``C(S) = sum_j w_j phi(|S & N(j)|)``."""
    S = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64)
    if S.size and (S.min() < 0 or S.max() >= inst.n):
        raise ObjectiveError(f"selected index out of range [0, {inst.n})")
    member = np.zeros(inst.n, dtype=np.float64)
    member[S] = 1.0
    counts = np.add.reduceat(member[inst.right_indices], inst.right_indptr[:-1])
    return float(np.dot(inst.weights, reward.phi(counts.astype(np.int64))))


class RelaxationContext:
    """Cached ``phi`` table for repeated evaluation of ``C(x)``."""

    def __init__(self, inst, reward):
        self.inst = inst
        self.reward = reward
        self.phi_tab = np.ascontiguousarray(reward.table(int(inst.degrees.max()) + 1))

    def value(self, x):
        inst = self.inst
        return kernels.fractional_eval(
            x, inst.right_indptr, inst.right_indices, inst.weights, self.phi_tab
        )


def coverage_fractional(inst, reward, x):
    """LP-relaxation objective ``C(x)``; agrees with :func:`coverage_discrete` on 0/1 points."""
    x = _as_box_vector(inst, x)
    return RelaxationContext(inst, reward).value(np.clip(x, 0.0, 1.0))


class SmoothingContext:
    """Linear pieces of ``phi`` shared by all right nodes, plus ``mu`` and ``d_R``.

    Consecutive pieces with equal slope (up to ``SLOPE_MERGE_TOL``) are
    identical, so they are merged;
    node ``j`` uses the first ``npieces[j]`` merged pieces (those starting at
    or below ``deg(j)``). For ``min(., c)`` that is at most two pieces.
    """

    def __init__(self, inst, reward, mu):
        if not mu > 0:
            raise ObjectiveError(f"smoothing parameter must be positive, got {mu!r}")
        self.inst = inst
        self.reward = reward
        self.mu = float(mu)
        deg = inst.degrees
        D = int(deg.max())
        slopes = reward.slopes(D)
        phi = reward.table(D)
        idx = np.arange(1, D + 1)
        new_group = np.ones(D, dtype=bool)
        new_group[1:] = np.abs(slopes[2:] - slopes[1:-1]) > SLOPE_MERGE_TOL * np.maximum(slopes[1:-1], 1.0)
        starts = idx[new_group]
        self.piece_start = starts
        self.slopes = np.ascontiguousarray(slopes[starts])
        self.intercepts = np.ascontiguousarray(phi[starts - 1] - slopes[starts] * (starts - 1))
        self.npieces = np.ascontiguousarray(
            np.searchsorted(starts, deg, side="right").astype(np.int64)
        )
        self.d_R = effective_degree(inst)

    def value(self, x):
        inst = self.inst
        return kernels.smooth_eval(
            x, inst.right_indptr, inst.right_indices, inst.weights,
            self.npieces, self.slopes, self.intercepts, self.mu, None,
        )

    def value_and_gradient(self, x, out=None):
        inst = self.inst
        grad = np.empty(inst.n) if out is None else out
        v = kernels.smooth_eval(
            x, inst.right_indptr, inst.right_indices, inst.weights,
            self.npieces, self.slopes, self.intercepts, self.mu, grad,
        )
        return v, grad

    def gap_bound(self):
        """``mu * log(d_R)``: the uniform gap between ``C`` and its smoothing."""
        return self.mu * math.log(self.d_R)


def smooth_value(inst, reward, x, mu):
    x = _as_box_vector(inst, x)
    return SmoothingContext(inst, reward, mu).value(x)


def smooth_gradient(inst, reward, x, mu):
    x = _as_box_vector(inst, x)
    return SmoothingContext(inst, reward, mu).value_and_gradient(x)[1]


def poisson_binomial_pmf(probs):
    """Distribution of a sum of independent Bernoulli(``probs``) by convolution."""
    pmf = np.zeros(len(probs) + 1)
    pmf[0] = 1.0
    for t, p in enumerate(probs, start=1):
        pmf[1 : t + 1] = pmf[1 : t + 1] * (1.0 - p) + pmf[:t] * p
        pmf[0] *= 1.0 - p
    return pmf


def multilinear_extension(inst, reward, x):
    """``F(x) = E[C(S_x)]`` with independent inclusions; cost ``O(sum deg(j)^2)``."""
    x = np.clip(_as_box_vector(inst, x), 0.0, 1.0)
    phi = reward.table(int(inst.degrees.max()))
    total = 0.0
    for j in range(inst.r):
        pmf = poisson_binomial_pmf(x[inst.neighbors(j)])
        total += inst.weights[j] * float(np.dot(pmf, phi[: len(pmf)]))
    return total
