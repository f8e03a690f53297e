"""Normalized concave nondecreasing rewards on the nonnegative integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class RewardError(ValueError):
    pass


@dataclass(frozen=True)
class Reward:
    """A reward ``phi`` with ``phi(0) = 0`` and ``phi(1) = 1``.

    ``kind`` is one of ``"min"`` (``min(i, c)``), ``"log"``
    (``log(1 + i) / log 2``), ``"pow"`` (``i ** (1 - gamma)``), ``"plin"``
    (``beta * i + (1 - beta) * min(i, c)``) or ``"table"`` (explicit values,
    constant past the end of the table).
    """

    kind: str
    c: int | None = None
    gamma: float | None = None
    beta: float | None = None
    values: tuple | None = None

    def __post_init__(self):
        k = self.kind
        if k == "min":
            if self.c is None or int(self.c) != self.c or self.c < 1:
                raise RewardError(f"min reward needs a positive integer c, got {self.c!r}")
        elif k == "pow":
            if self.gamma is None or not 0.0 < self.gamma < 1.0:
                raise RewardError(f"pow reward needs gamma in (0, 1), got {self.gamma!r}")
        elif k == "plin":
            if self.c is None or int(self.c) != self.c or self.c < 1:
                raise RewardError(f"plin reward needs a positive integer c, got {self.c!r}")
            if self.beta is None or not 0.0 <= self.beta <= 1.0:
                raise RewardError(f"plin reward needs beta in [0, 1], got {self.beta!r}")
        elif k == "table":
            _check_table(self.values)
        elif k != "log":
            raise RewardError(f"unknown reward kind {k!r}")

    # closed-form evaluation ------------------------------------------------

    def phi(self, i):
        """``phi(i)`` for a nonnegative integer (or integer array) ``i``."""
        i = np.asarray(i)
        if (i < 0).any():
            raise RewardError("phi is defined on nonnegative integers")
        out = self._phi(i.astype(np.float64))
        return float(out) if out.ndim == 0 else out

    def _phi(self, x):
        k = self.kind
        if k == "min":
            return np.minimum(x, float(self.c))
        if k == "log":
            return np.log1p(x) / math.log(2.0)
        if k == "pow":
            return np.power(x, 1.0 - self.gamma)
        if k == "plin":
            return self.beta * x + (1.0 - self.beta) * np.minimum(x, float(self.c))
        vals = np.asarray(self.values, dtype=np.float64)
        return vals[np.minimum(x.astype(np.int64), len(vals) - 1)]

    def slope(self, i):
        """``phi(i) - phi(i - 1)`` for ``i >= 1``."""
        if np.any(np.asarray(i) < 1):
            raise RewardError("slope is defined for i >= 1")
        return self.phi(i) - self.phi(np.asarray(i) - 1)

    def extended_phi(self, x):
        """Piecewise-linear interpolation of ``phi`` at real ``x >= 0``."""
        x = np.asarray(x, dtype=np.float64)
        if (x < 0).any():
            raise RewardError("extended phi is defined on x >= 0")
        lo = np.floor(x)
        frac = x - lo
        lo_i = lo.astype(np.int64)
        out = (1.0 - frac) * self._phi(lo_i.astype(np.float64)) + frac * self._phi(
            (lo_i + 1).astype(np.float64)
        )
        return float(out) if out.ndim == 0 else out

    def table(self, upto):
        """``phi(0..upto)`` as a float array."""
        return self._phi(np.arange(upto + 1, dtype=np.float64))

    def slopes(self, upto):
        """Slopes ``s(1..upto)`` at index ``1..upto`` (index 0 holds 0).

        Rounding in ``phi`` can make adjacent differences wobble by one ulp;
        the returned table is forced nonnegative and nonincreasing.
        """
        s = np.zeros(upto + 1)
        if self.kind in ("min", "plin"):
            # exact, so that runs of equal slopes really are equal
            i = np.arange(1, upto + 1)
            tail = 0.0 if self.kind == "min" else self.beta
            s[1:] = np.where(i <= self.c, 1.0, tail)
            return s
        vals = self.table(upto)
        if upto >= 1:
            d = np.diff(vals)
            s[1:] = np.maximum(np.minimum.accumulate(d), 0.0)
        return s

    @cached_property
    def saturation(self):
        """Index past which every slope is zero, or ``None`` if it never saturates."""
        if self.kind == "min":
            return int(self.c)
        if self.kind == "plin" and self.beta == 0.0:
            return int(self.c)
        if self.kind == "table":
            vals = self.values
            last = len(vals) - 1
            while last > 0 and vals[last] == vals[last - 1]:
                last -= 1
            return last
        return None

    def spec(self):
        """Inverse of :func:`parse_reward`."""
        k = self.kind
        if k == "min":
            return f"min:c={self.c}"
        if k == "log":
            return "log"
        if k == "pow":
            return f"pow:gamma={self.gamma!r}"
        if k == "plin":
            return f"plin:c={self.c},beta={self.beta!r}"
        return "table:" + ",".join(repr(float(v)) for v in self.values)

    def __str__(self):
        return self.spec()


def _check_table(values, require_normalized=True):
    if values is None or len(values) < 2:
        raise RewardError("table reward needs at least two values")
    v = np.asarray(values, dtype=np.float64)
    if not np.isfinite(v).all():
        raise RewardError("table values must be finite")
    d = np.diff(v)
    tol = 1e-12 * max(1.0, float(np.abs(v).max()))
    if (d < -tol).any():
        raise RewardError("table reward must be nondecreasing")
    if (np.diff(d) > tol).any():
        raise RewardError("table reward must be concave")
    if require_normalized and (abs(v[0]) > 1e-12 or abs(v[1] - 1.0) > 1e-12):
        raise RewardError("table reward must satisfy phi(0)=0, phi(1)=1; use normalize()")


def multi_coverage(c):
    return Reward("min", c=int(c))


def log_reward():
    return Reward("log")


def isoelastic(gamma):
    return Reward("pow", gamma=float(gamma))


def piecewise_linear(c, beta):
    return Reward("plin", c=int(c), beta=float(beta))


def table_reward(values):
    """A normalized table reward; raw values are rescaled first."""
    return normalize(values)


def normalize(reward):
    """Affinely rescale so that ``phi(0) = 0`` and ``phi(1) = 1``.

    Accepts a :class:`Reward` (closed forms are already normalized) or a raw
    sequence of table values.
    """
    if isinstance(reward, Reward):
        if reward.kind != "table":
            return reward
        values = reward.values
    else:
        values = reward
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise RewardError("table reward needs at least two values")
    span = v[1] - v[0]
    if span <= 0:
        raise RewardError("degenerate reward: phi(1) == phi(0)")
    if v[0] == 0.0 and span == 1.0:
        out = v
    else:
        out = (v - v[0]) / span
    _check_table(out, require_normalized=False)
    return Reward("table", values=tuple(float(t) for t in out))


def parse_reward(text):
    """Parse ``min:c=2``, ``log``, ``pow:gamma=0.5``, ``plin:c=1,beta=0.3``
    or ``table:0,1,1.5``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    try:
        if head == "table":
            return normalize([float(t) for t in rest.split(",") if t.strip()])
        params = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, val = part.partition("=")
            if not eq:
                raise RewardError(f"expected key=value in reward spec, got {part!r}")
            params[key.strip()] = val.strip()
        if head == "min":
            out = multi_coverage(int(params.pop("c")))
        elif head == "log":
            out = log_reward()
        elif head == "pow":
            out = isoelastic(float(params.pop("gamma")))
        elif head == "plin":
            out = piecewise_linear(int(params.pop("c")), float(params.pop("beta")))
        else:
            raise RewardError(f"unknown reward spec {text!r}")
        if params:
            raise RewardError(f"unexpected parameter(s) {', '.join(params)} in {text!r}")
        return out
    except KeyError as exc:
        raise RewardError(f"reward spec {text!r} is missing parameter {exc.args[0]}") from None
    except ValueError as exc:
        if isinstance(exc, RewardError):
            raise
        raise RewardError(f"bad number in reward spec {text!r}") from None
