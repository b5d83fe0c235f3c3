"""Timing harness for the parameterised propagators.

Instances are built with the parameter pinned exactly (not just bounded) so
that rows of a table differ only in the quantity being swept.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass

from .core import ConstraintDescriptor, ProblemState
from .propagators import Settings, filter_constraint, parameter_k

__all__ = ["BENCH_KINDS", "BenchRow", "bench_instance", "time_filter", "run_bench"]


def _cover(rng, i, universe, d):
    """A d-subset of ``universe`` that contains ``universe[i % len]``, so the union covers everything."""
    first = universe[i % len(universe)]
    rest = [v for v in universe if v != first]
    return [first, *rng.sample(rest, min(d, len(universe)) - 1)]


def _nvalue(rng, n, d, k):
    st = ProblemState()
    universe = list(range(k))
    xs = [st.add_var(f"X{i + 1}", _cover(rng, i, universe, d)) for i in range(n)]
    st.post(ConstraintDescriptor.nvalue(xs, st.add_var("N", range(1, k + 1))))
    return st


def _uses(rng, n, d, k):
    st = ProblemState()
    universe = list(range(k))
    m = max(1, n // 2)
    ys = [st.add_var(f"Y{j + 1}", _cover(rng, j, universe, d)) for j in range(m)]
    xs = [st.add_var(f"X{i + 1}", rng.sample(universe, min(d, k))) for i in range(n - m)]
    st.post(ConstraintDescriptor.uses(xs, ys))
    return st


def _cardpath(rng, n, d, k):
    # k is the arity p here; d is the domain size
    st = ProblemState()
    universe = list(range(d))
    xs = [st.add_var(f"X{i + 1}", universe) for i in range(n)]
    nv = st.add_var("N", range(0, n + 1, 2))
    st.post(ConstraintDescriptor.cardpath(xs, nv, k, "less-than"))
    return st


def _valsymbreak(rng, n, d, k):
    st = ProblemState()
    universe = list(range(max(d, 2)))
    xs = [st.add_var(f"X{i + 1}", rng.sample(universe, min(d, len(universe)))) for i in range(n)]
    sigmas = []
    for _ in range(k):
        image = universe[:]
        rng.shuffle(image)
        sigmas.append(dict(zip(universe, image)))
    st.post(ConstraintDescriptor.valsymbreak(xs, sigmas))
    return st


def _disjoint(rng, n, d, k):
    st = ProblemState()
    shared = list(range(k))
    xs = [st.add_var(f"X{i + 1}", [100 + i % 3, *rng.sample(shared, min(d - 1, k))]) for i in range(n // 2)]
    ys = [st.add_var(f"Y{j + 1}", [200 + j % 3, *rng.sample(shared, min(d - 1, k))]) for j in range(n - n // 2)]
    st.post(ConstraintDescriptor.disjoint(xs, ys))
    return st


def _among_set(rng, n, d, k):
    st = ProblemState()
    pool = list(range(k + d))
    xs = [st.add_var(f"X{i + 1}", rng.sample(pool, d)) for i in range(n)]
    s = st.add_setvar("S", pool, lb=pool[k:k + 1], ub=pool[:k + 1])
    st.post(ConstraintDescriptor.among_set(xs, s, st.add_var("N", range(0, n + 1))))
    return st


def _roots(rng, n, d, k):
    st = ProblemState()
    pool = list(range(k + d))
    xs = [st.add_var(f"X{i + 1}", rng.sample(pool, d)) for i in range(n)]
    s = st.add_setvar("S", range(1, n + 1))
    t = st.add_setvar("T", pool, lb=(), ub=pool[:k])
    st.post(ConstraintDescriptor.roots(xs, s, t))
    return st


def _sum_eq(rng, n, d, k):
    # k variables get one hole each; the rest are intervals of width d
    st = ProblemState()
    xs = []
    for i in range(n):
        lo = rng.randint(0, 9 - d)
        dom = [v for v in range(lo, lo + d + 1) if i >= k or v != lo + 1 + (i % max(1, d - 1))]
        xs.append(st.add_var(f"X{i + 1}", dom))
    st.post(ConstraintDescriptor.sum_eq(xs, st.add_var("T", range(3 * n, 6 * n + 1))))
    return st


BENCH_KINDS = {
    "nvalue": _nvalue,
    "uses": _uses,
    "cardpath": _cardpath,
    "valsymbreak": _valsymbreak,
    "disjoint": _disjoint,
    "among_set": _among_set,
    "roots": _roots,
    "sum_eq": _sum_eq,
}


@dataclass
class BenchRow:
    kind: str
    n: int
    k: int
    d: int
    param: int | None
    status: str
    seconds: float

    def as_dict(self) -> dict:
        return asdict(self)


def bench_instance(kind: str, n: int, d: int, k: int, seed: int = 0) -> ProblemState:
    return BENCH_KINDS[kind](random.Random(f"{seed}:{kind}:{n}:{d}:{k}"), n, d, k)


def time_filter(st: ProblemState, repeats: int = 3, settings: Settings | None = None):
    """Best-of-``repeats`` wall time of one filtering call, plus its outcome."""
    c = st.constraints[0]
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = filter_constraint(c, st, settings)
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_bench(kind: str, ns, ks, d: int, seed: int = 0, repeats: int = 3, settings: Settings | None = None) -> list[BenchRow]:
    if kind not in BENCH_KINDS:
        raise KeyError(kind)
    rows = []
    for n in ns:
        for k in ks:
            st = bench_instance(kind, n, d, k, seed)
            seconds, out = time_filter(st, repeats, settings)
            rows.append(BenchRow(kind, n, k, d, parameter_k(st.constraints[0], st), out.status.value, seconds))
    return rows
