"""Lift a bound-consistency propagator to domain consistency.

Every domain is cut into its maximal gap-free runs. Choosing one run per
variable leaves an all-interval problem, on which a BC propagator that
does not fail guarantees a solution. So value v of X_i is supported iff
some choice of runs for the other variables, with X_i fixed to v, passes
BC.

A BC propagator here is a callable ``bounds -> bounds | None`` over a list
of ``(lo, hi)`` pairs aligned with the scope. It must return the bounds
fixpoint and, on interval domains, only succeed when a solution exists.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import Domain, FilterOutcome, ParameterTooLarge, ProblemState, Status, UsageError, restrict

__all__ = [
    "DEFAULT_RUN_CAP",
    "Bounds",
    "BCPropagator",
    "runs",
    "intervals_count",
    "interval_parameter",
    "LiftStats",
    "lift_to_dc",
    "sum_bc",
]

DEFAULT_RUN_CAP = 4096

Bounds = list[tuple[int, int]]
BCPropagator = Callable[[Bounds], "Bounds | None"]


def runs(dom: Domain) -> list[tuple[int, int]]:
    """Maximal gap-free runs of a sorted domain, in order."""
    if not dom:
        raise UsageError("runs of an empty domain")
    out = []
    start = prev = dom[0]
    for v in dom[1:]:
        if v != prev + 1:
            out.append((start, prev))
            start = v
        prev = v
    out.append((start, prev))
    return out


def intervals_count(dom) -> int:
    """Number of v in the domain with v + 1 not in it."""
    s = set(dom)
    if not s:
        raise UsageError("intervals_count of an empty domain")
    return sum(1 for v in s if v + 1 not in s)


def interval_parameter(doms: Sequence[Domain]) -> tuple[int, int]:
    """``(p, q)``: the largest run count and the number of domains with holes."""
    counts = [intervals_count(d) for d in doms]
    return max(counts, default=1), sum(1 for c in counts if c > 1)


@dataclass
class LiftStats:
    bc_calls: int = 0
    probes: int = 0


def lift_to_dc(
    bc: BCPropagator,
    scope: Sequence[int],
    state: ProblemState,
    cap: int = DEFAULT_RUN_CAP,
    stats: LiftStats | None = None,
    name: str = "lift",
) -> FilterOutcome:
    stats = stats if stats is not None else LiftStats()
    doms = [state.domains[v] for v in scope]
    choices = [runs(d) for d in doms]
    counts = [len(c) for c in choices]
    total = math.prod(counts)
    worst = max((total // c for c in counts), default=1)
    if worst > cap:
        raise ParameterTooLarge("run product", worst, cap)

    certified: list[set[int]] = [set() for _ in scope]
    for i, dom in enumerate(doms):
        others = choices[:i] + [[None]] + choices[i + 1:]
        for v in dom:
            if v in certified[i]:
                continue
            stats.probes += 1
            for pick in itertools.product(*others):
                bounds = list(pick)
                bounds[i] = (v, v)
                stats.bc_calls += 1
                result = bc(bounds)
                if result is None:
                    continue
                # BC on intervals: both ends of every narrowed bound have a support
                for j, (lo, hi) in enumerate(result):
                    certified[j].add(lo)
                    certified[j].add(hi)
                break
            else:
                continue
            if v not in certified[i]:  # pragma: no cover - BC contract
                raise AssertionError(f"{name}: BC result dropped the probed value {v}")
    for j, var in enumerate(scope):
        if not certified[j]:
            return FilterOutcome(Status.WIPEOUT, state, culprit=f"{state.names[var]} has no support")
    return restrict(state, dict(zip(scope, certified)))


def sum_bc(bounds: Bounds) -> Bounds | None:
    """Bounds fixpoint for X_1 + ... + X_n = T, with T the last entry."""
    if not bounds:
        raise UsageError("sum_bc needs at least the target bounds")
    xs = [list(b) for b in bounds[:-1]]
    t_lo, t_hi = bounds[-1]
    while True:
        s_lo = sum(lo for lo, _ in xs)
        s_hi = sum(hi for _, hi in xs)
        n_lo, n_hi = max(t_lo, s_lo), min(t_hi, s_hi)
        if n_lo > n_hi:
            return None
        changed = (n_lo, n_hi) != (t_lo, t_hi)
        t_lo, t_hi = n_lo, n_hi
        for b in xs:
            lo, hi = b
            new_lo = max(lo, t_lo - (s_hi - hi))
            new_hi = min(hi, t_hi - (s_lo - lo))
            if new_lo > new_hi:
                return None
            if (new_lo, new_hi) != (lo, hi):
                b[0], b[1] = new_lo, new_hi
                changed = True
        if not changed:
            return [tuple(b) for b in xs] + [(t_lo, t_hi)]
