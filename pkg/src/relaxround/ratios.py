"""Poisson concavity ratios ``alpha(x) = E[phi(Pois(x))] / phi(x)`` and their infimum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

ISOELASTIC_TERMS = 200


def _truncation(rate):
    return math.ceil(rate + 12.0 * math.sqrt(rate) + 30.0)


def poisson_expectation(reward, rate):
    """``E[phi(X)]`` for ``X ~ Pois(rate)`` by a truncated series."""
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate!r}")
    N = _truncation(rate)
    i = np.arange(N + 1)
    pmf = stats.poisson.pmf(i, rate)
    return float(np.dot(pmf, reward.table(N)))


def expected_min_closed_form(rate, c):
    """``E[min(X, c)] = rate * P(X <= c-2) + c * P(X >= c)``."""
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate!r}")
    if c < 0:
        raise ValueError("c must be nonnegative")
    if c == 0:
        return 0.0
    low = stats.poisson.cdf(c - 2, rate) if c >= 2 else 0.0
    return float(rate * low + c * stats.poisson.sf(c - 1, rate))


def expected_min_derivative(rate, c):
    """``d/d rate E[min(X, c)] = P(X <= c - 1)``."""
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate!r}")
    if c < 1:
        raise ValueError("c must be at least 1")
    return float(stats.poisson.cdf(c - 1, rate))


def alpha_at(reward, x):
    if x < 1:
        raise ValueError("alpha(x) is defined for integers x >= 1")
    phi_x = reward.phi(int(x))
    if phi_x <= 0:
        raise ValueError(f"phi({x}) = 0")
    return poisson_expectation(reward, x) / phi_x


def poisson_mode_mass(c):
    """``c^c e^{-c} / c!`` in log space (safe for large ``c``)."""
    return math.exp(c * math.log(c) - c - special.gammaln(c + 1))


def isoelastic_alpha_series(gamma, terms=ISOELASTIC_TERMS):
    """``(1/e) * sum_{n>=1} n^(1-gamma) / n!``."""
    n = np.arange(1, terms + 1, dtype=np.float64)
    logs = (1.0 - gamma) * np.log(n) - special.gammaln(n + 1) - 1.0
    return float(np.exp(logs).sum())


def isoelastic_alpha_integral(gamma):
    """``(1 / (e Gamma(gamma))) * int_0^1 e^x (-log x)^(gamma-1) dx`` by quadrature.

    With ``x = exp(-u)`` the integrand is ``exp(e^-u - u) u^(gamma-1)`` on
    ``(0, inf)``; a further ``u = t^(1/gamma)`` removes the ``u^(gamma-1)``
    singularity and leaves ``(1/gamma) exp(e^-u - u)``.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")

    def f(t):
        u = t ** (1.0 / gamma)
        return math.exp(math.exp(-u) - u)

    # the integrand is negligible once u > 50
    t_max = 50.0**gamma
    val, _ = integrate.quad(f, 0.0, t_max, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val / (gamma * math.e * special.gamma(gamma))


@dataclass
class RatioResult:
    value: float
    argmin: int | None = None
    at_boundary: bool = False
    exact: bool = True


def default_search_limit(reward):
    scale = reward.c or (len(reward.values) if reward.values else 0) or 1
    return 10 * max(int(scale), 10)


def alpha_search(reward, search_limit=None):
    """``alpha_phi`` with the location of the infimum.

    Closed forms for ``min``, ``plin`` and ``pow``; for ``log`` the scan stops
    once ``1 - 1/(x log(1+x))``, a lower bound on ``alpha(x)``, exceeds the
    running minimum. ``table`` rewards are scanned over ``1..search_limit``
    and flag a minimum found at the boundary.
    """
    k = reward.kind
    if k == "min":
        c = reward.c
        return RatioResult(1.0 - poisson_mode_mass(c), argmin=c)
    if k == "plin":
        c = reward.c
        if reward.beta == 1.0:
            return RatioResult(1.0, argmin=None)
        return RatioResult(1.0 - (1.0 - reward.beta) * poisson_mode_mass(c), argmin=c)
    if k == "pow":
        return RatioResult(isoelastic_alpha_series(reward.gamma), argmin=1)
    limit = default_search_limit(reward) if search_limit is None else int(search_limit)
    best, arg = math.inf, None
    for x in range(1, limit + 1):
        if k == "log" and x >= 2 and 1.0 - 1.0 / (x * math.log1p(x)) > best:
            return RatioResult(best, argmin=arg)
        a = alpha_at(reward, x)
        if a < best:
            best, arg = a, x
    return RatioResult(best, argmin=arg, at_boundary=(arg == limit), exact=False)


def alpha(reward, search_limit=None):
    """Poisson concavity ratio ``inf_{x >= 1} alpha(x)``."""
    return alpha_search(reward, search_limit).value


def alpha_curve(reward, limit):
    """``[(x, alpha(x)) for x in 1..limit]``."""
    return [(x, alpha_at(reward, x)) for x in range(1, int(limit) + 1)]


def greedy_hardness_bound(ell):
    """Upper bound ``1 - 1/e + 3.3/ell`` on greedy's ratio for the hard family."""
    return 1.0 - math.exp(-1.0) + 3.3 / ell

