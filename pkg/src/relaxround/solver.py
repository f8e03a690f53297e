"""Accelerated projected gradient ascent on the smoothed coverage objective."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .greedy import greedy_indicator, greedy_select
from .objective import (
    FractionalPoint,
    RelaxationContext,
    SmoothingContext,
    effective_degree,
)

INV_E = math.exp(-1.0)
DEFAULT_TOL = 1e-6
EARLY_STOP_WINDOW = 10


class DegenerateSmoothing(Exception):
    """``log d_R`` or the greedy value is zero, so the schedule is undefined.

    Both cases make the problem trivial for greedy (all degrees one means the
    objective is modular; zero greedy value means every set has value zero).
    """


class SolverError(RuntimeError):
    pass


@dataclass
class Schedule:
    mu: float
    eta: float
    T: int
    tol: float = DEFAULT_TOL
    eta_mode: str = "theoretical"

    def __post_init__(self):
        if not (self.mu > 0 and self.eta > 0 and self.T >= 1 and self.tol >= 0):
            raise ValueError(f"invalid schedule {self}")


def make_schedule(epsilon, greedy_value, d_R, k, tol=DEFAULT_TOL):
    """Smoothing ``mu``, step ``eta = 1/L`` and iteration budget ``T``."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if d_R <= 1.0 + 1e-9:
        raise DegenerateSmoothing(f"effective degree {d_R!r} gives log d_R = 0")
    if not greedy_value > 0:
        raise DegenerateSmoothing("greedy value is zero")
    log_d = math.log(d_R)
    mu = epsilon * greedy_value / (2.0 * log_d)
    eta = 4.0 * mu / d_R
    T = math.ceil(
        2.0 / (epsilon * greedy_value)
        * math.sqrt(k * d_R * log_d / ((1.0 - INV_E) * (1.0 + INV_E)))
    )
    return Schedule(mu=mu, eta=eta, T=max(int(T), 1), tol=tol)


def clamped_shifted_sum(x, lam):
    """``sum_i min(max(x_i - lam, 0), 1)``; continuous and nonincreasing in ``lam``."""
    return float(np.clip(np.asarray(x, dtype=np.float64) - lam, 0.0, 1.0).sum())


def hypersimplex_project(x, k):
    """Euclidean projection onto ``{y in [0,1]^n : sum(y) = k}``.

    Solves ``sum_i clip(x_i - lam, 0, 1) = k`` for ``lam``: the left side is
    piecewise linear with breakpoints ``x_i - 1`` and ``x_i``, so a binary
    search over the sorted breakpoints brackets the root and linear
    interpolation finds it.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    # F(min(x) - 1) can round to just under n, so the ends are handled directly
    if k == 0 or k == n:
        return np.full(n, float(k > 0))
    points = np.unique(np.concatenate([x - 1.0, x]))

    def F(lam):
        return np.clip(x - lam, 0.0, 1.0).sum()

    # invariant: F(points[lo]) >= k > F(points[hi])
    lo, hi = 0, points.size - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if F(points[mid]) >= k:
            lo = mid
        else:
            hi = mid
    l1, l2 = points[lo], points[hi]
    f1, f2 = F(l1), F(l2)
    lam = l1 + (l2 - l1) * (f1 - k) / (f1 - f2)
    return np.clip(x - lam, 0.0, 1.0)


@dataclass
class SolveReport:
    epsilon: float
    k: int
    mu: float | None = None
    eta: float | None = None
    T: int | None = None
    tol: float = DEFAULT_TOL
    eta_mode: str = "theoretical"
    iterations: int = 0
    stopped_early: bool = False
    degenerate: bool = False
    greedy_value: float = 0.0
    greedy_set: list = field(default_factory=list)
    best_iteration: int = 0
    best_value: float = 0.0
    best_smooth_value: float | None = None
    final_value: float = 0.0
    final_smooth_value: float | None = None
    smooth_trace: list = field(default_factory=list)
    true_trace: list = field(default_factory=list)
    seconds: dict = field(default_factory=dict)

    def to_dict(self, include_trace=True):
        d = asdict(self)
        if not include_trace:
            d.pop("smooth_trace")
            d.pop("true_trace")
        return d

    def trace_csv(self):
        lines = ["iter,smooth_value,true_value"]
        for t, (s, c) in enumerate(zip(self.smooth_trace, self.true_trace)):
            lines.append(f"{t},{s!r},{c!r}")
        return "\n".join(lines) + "\n"


def accelerated_solve(
    inst,
    reward,
    k,
    epsilon,
    *,
    eta=None,
    eta_scale=None,
    tol=DEFAULT_TOL,
    max_iter=None,
    early_stop=True,
    greedy=None,
):
    """Greedy start, then FISTA on the smoothed objective over the hypersimplex.

    Returns ``(point, report)`` where ``point`` is the iterate with the largest
    true relaxation value seen (the greedy start included), so the result is
    never worse than greedy. ``eta`` overrides the step size absolutely,
    ``eta_scale`` multiplies the theoretical ``4 mu / d_R``.
    """
    if eta is not None and eta_scale is not None:
        raise ValueError("eta and eta_scale are mutually exclusive")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    n = inst.n
    k = int(k)
    if not 0 <= k:
        raise ValueError(f"k must be nonnegative, got {k}")
    report = SolveReport(epsilon=float(epsilon), k=k, tol=float(tol))
    t0 = time.perf_counter()
    if greedy is None:
        greedy = greedy_select(inst, reward, k)
    report.seconds["greedy"] = time.perf_counter() - t0
    k = min(k, n)
    x0 = greedy_indicator(greedy.selected, n, k).x
    relax = RelaxationContext(inst, reward)
    g_val = relax.value(x0)
    report.greedy_value = g_val
    report.greedy_set = sorted(greedy.selected)
    report.best_value = report.final_value = g_val

    t1 = time.perf_counter()
    try:
        if k == 0 or k == n:
            raise DegenerateSmoothing("hypersimplex is a single point")
        sched = make_schedule(epsilon, g_val, effective_degree(inst), k, tol=tol)
    except DegenerateSmoothing:
        report.degenerate = True
        report.seconds["solve"] = time.perf_counter() - t1
        return FractionalPoint(x0, k), report

    if eta is not None:
        if not eta > 0:
            raise ValueError("eta must be positive")
        sched.eta, sched.eta_mode = float(eta), "absolute"
    elif eta_scale is not None:
        if not eta_scale > 0:
            raise ValueError("eta_scale must be positive")
        sched.eta, sched.eta_mode = sched.eta * float(eta_scale), "scaled"
    report.mu, report.eta, report.T, report.eta_mode = sched.mu, sched.eta, sched.T, sched.eta_mode

    smooth = SmoothingContext(inst, reward, sched.mu)
    budget = sched.T if max_iter is None else min(sched.T, int(max_iter))
    x = x0.copy()
    y = x0.copy()
    beta = 1.0
    grad = np.empty(n)
    s_val = smooth.value(x)
    report.smooth_trace.append(s_val)
    report.true_trace.append(g_val)
    best_x, best_val, best_s = x0, g_val, s_val

    it = 0
    for it in range(1, budget + 1):
        smooth.value_and_gradient(y, out=grad)
        if not np.isfinite(grad).all():
            raise SolverError(f"non-finite gradient at iteration {it}")
        x_new = hypersimplex_project(y + sched.eta * grad, k)
        beta_new = (1.0 + math.sqrt(1.0 + 4.0 * beta * beta)) / 2.0
        y = x_new + ((beta - 1.0) / beta_new) * (x_new - x)
        x, beta = x_new, beta_new

        s_val = smooth.value(x)
        c_val = relax.value(x)
        report.smooth_trace.append(s_val)
        report.true_trace.append(c_val)
        if c_val > best_val:
            best_x, best_val, best_s = x, c_val, s_val
            report.best_iteration = it
        if early_stop and it >= EARLY_STOP_WINDOW:
            past = report.smooth_trace[it - EARLY_STOP_WINDOW]
            gain = (s_val - past) / (EARLY_STOP_WINDOW * max(abs(past), 1e-300))
            if gain < sched.tol:
                report.stopped_early = it < budget
                break
    report.iterations = it
    report.best_value = best_val
    report.best_smooth_value = best_s
    report.final_value = report.true_trace[-1]
    report.final_smooth_value = report.smooth_trace[-1]
    report.seconds["solve"] = time.perf_counter() - t1
    return FractionalPoint(best_x, k), report
