"""Multi-coverage instances on which greedy stalls near ``1 - 1/e``.

Right nodes form ``q = c + 1`` blocks of ``l = c - 1`` rows. The optimum uses
``k = q * c`` "column" left nodes: the ``c`` columns of block ``b`` each cover
every row of that block, so every right node ends up covered exactly ``c``
times and ``OPT = l * q * c`` (unit weights).

Bait left nodes come in phases. Phase ``i`` takes row ``i - 1`` of every
block as a ring of ``q`` representatives and lays ``floor(q c / L)`` arcs of
length ``L = l + 2 - i`` around it, the first ``q c mod L`` of them one
longer, so each representative is covered exactly ``c`` times. While phase
``i`` runs, columns are worth ``l + 1 - i`` and arcs at least ``l + 2 - i``,
so greedy spends its budget on bait.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .greedy import greedy_select
from .instance import CoverageInstance
from .objective import coverage_discrete
from .ratios import greedy_hardness_bound
from .reward import multi_coverage


class ConstructionError(ValueError):
    pass


@dataclass
class HardInstance:
    instance: CoverageInstance
    c: int
    ell: int
    q: int
    k: int
    opt_value: float
    opt_columns: list
    phases: list = field(default_factory=list)
    rows_exhausted: bool = False

    @property
    def reward(self):
        return multi_coverage(self.c)

    @property
    def weight_scale(self):
        """Factor turning normalized objective values into unit-weight values."""
        return self.ell * self.q

    @property
    def bait_count(self):
        return sum(p["arcs"] for p in self.phases)

    def sidecar(self):
        return {
            "c": self.c,
            "l": self.ell,
            "q": self.q,
            "k": self.k,
            "opt_value": self.opt_value,
            "weight_scale": self.weight_scale,
            "phases": self.phases,
            "rows_exhausted": self.rows_exhausted,
        }


def generate_hard_instance(c):
    if int(c) != c or c < 2:
        raise ConstructionError(f"c must be an integer >= 2, got {c!r}")
    c = int(c)
    ell, q = c - 1, c + 1
    k = q * c
    if k < (ell + 1) ** 2 or ell + 2 > q:
        raise ConstructionError(f"parameter checks failed for c={c}")

    right_adj_left = []  # per left node: right nodes it covers
    for b in range(q):
        rows = [b * ell + rho for rho in range(ell)]
        for _ in range(c):
            right_adj_left.append(rows)
    opt_columns = list(range(k))

    phases = []
    bait = 0
    phase = 0
    while bait < k:
        phase += 1
        if phase > ell:
            break
        row = phase - 1
        base = ell + 2 - phase
        count, extra = divmod(q * c, base)
        reps = [b * ell + row for b in range(q)]
        pos = 0
        cover = [0] * q
        for a in range(count):
            length = base + 1 if a < extra else base
            if length > q:
                raise ConstructionError(f"arc of length {length} wraps a ring of {q}")
            ring = [(pos + t) % q for t in range(length)]
            for b in ring:
                cover[b] += 1
            right_adj_left.append(sorted(reps[b] for b in ring))
            pos += length
        if any(v != c for v in cover):
            raise ConstructionError(f"phase {phase} covers representatives {cover}, expected {c}")
        phases.append(
            {"phase": phase, "row": row, "base_length": base, "arcs": count, "extended": extra}
        )
        bait += count

    n = len(right_adj_left)
    r = ell * q
    edges = [(i, j) for i, js in enumerate(right_adj_left) for j in js]
    inst = CoverageInstance.from_edges(n, r, edges)
    hard = HardInstance(
        instance=inst,
        c=c,
        ell=ell,
        q=q,
        k=k,
        opt_value=float(ell * q * c),
        opt_columns=opt_columns,
        phases=phases,
        rows_exhausted=bait < k,
    )
    return hard


@dataclass
class GapReport:
    greedy_value: float
    ratio: float
    bound: float

    @property
    def within_bound(self):
        return self.ratio <= self.bound


def greedy_gap_report(hard):
    """Greedy value (unit weights), its ratio to ``OPT`` and the bound ``1 - 1/e + 3.3/l``."""
    res = greedy_select(hard.instance, hard.reward, hard.k)
    value = coverage_discrete(hard.instance, hard.reward, res.selected) * hard.weight_scale
    return GapReport(value, value / hard.opt_value, greedy_hardness_bound(hard.ell))
