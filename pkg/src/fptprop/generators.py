"""Seeded random instances, one family per constraint kind.

``n``, ``d`` and ``k`` are upper bounds: scope size, domain size and the
kind's fixed parameter. Every draw goes through the given ``random.Random``
so a seed reproduces an instance exactly.
"""
from __future__ import annotations

import itertools
import random

from .core import ConstraintDescriptor, ProblemState

__all__ = ["FAMILIES", "random_instance", "random_domain", "holey_domain", "hitting_set_instance"]


def random_domain(rng: random.Random, pool, d: int) -> list[int]:
    pool = list(pool)
    return sorted(rng.sample(pool, rng.randint(1, min(d, len(pool)))))


def holey_domain(rng: random.Random, lo: int = 0, hi: int = 9, max_holes: int = 2) -> list[int]:
    """A domain inside [lo, hi] with at most ``max_holes`` gaps."""
    n_runs = rng.randint(1, max_holes + 1)
    cuts = sorted(rng.sample(range(lo, hi + 2), 2 * n_runs))
    dom = []
    for a, b in zip(cuts[::2], cuts[1::2]):
        dom.extend(range(a, b))
    return dom


def _nvalue(rng, n, d, k):
    st = ProblemState()
    universe = rng.sample(range(10), rng.randint(1, k))
    nx = rng.randint(1, n)
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, universe, d)) for i in range(nx)]
    nv = st.add_var("N", random_domain(rng, range(0, nx + 2), d))
    st.post(ConstraintDescriptor.nvalue(xs, nv))
    return st


def _uses(rng, n, d, k):
    st = ProblemState()
    total = rng.randint(2, max(2, n))
    m = rng.randint(1, total - 1)
    # X draws from the whole universe, Y from part of it, so some X values have no cover
    universe = rng.sample(range(10), rng.randint(1, k))
    y_pool = rng.sample(universe, rng.randint(1, len(universe)))
    ys = [st.add_var(f"Y{j + 1}", random_domain(rng, y_pool, d)) for j in range(m)]
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, universe, d)) for i in range(total - m)]
    st.post(ConstraintDescriptor.uses(xs, ys))
    return st


def _cardpath(rng, n, d, k):
    st = ProblemState()
    p = rng.randint(1, 3)
    nx = rng.randint(p, max(p, n))
    universe = list(range(1, rng.randint(1, k) + 1))
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, universe, d)) for i in range(nx)]
    nv = st.add_var("N", random_domain(rng, range(0, nx - p + 2), d))
    if rng.random() < 0.5:
        allowed = rng.choice(["equal", "not-equal", "less-than"])
    else:
        allowed = [t for t in itertools.product(universe, repeat=p) if rng.random() < 0.5]
    st.post(ConstraintDescriptor.cardpath(xs, nv, p, allowed))
    return st


def _valsymbreak(rng, n, d, k):
    st = ProblemState()
    universe = list(range(1, rng.randint(1, min(k, 5)) + 1))
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, universe, d)) for i in range(rng.randint(1, n))]
    sigmas = []
    for _ in range(rng.randint(1, min(k, 4))):
        image = universe[:]
        rng.shuffle(image)
        sigmas.append(dict(zip(universe, image)))
    st.post(ConstraintDescriptor.valsymbreak(xs, sigmas))
    return st


def _disjoint(rng, n, d, k):
    st = ProblemState()
    shared = list(range(rng.randint(0, k)))
    x_pool = shared + [10 + i for i in range(rng.randint(0, 3))]
    y_pool = shared + [20 + i for i in range(rng.randint(0, 3))]
    x_pool = x_pool or [10]
    y_pool = y_pool or [20]
    total = rng.randint(2, max(2, n))
    nx = rng.randint(1, total - 1)
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, x_pool, d)) for i in range(nx)]
    ys = [st.add_var(f"Y{j + 1}", random_domain(rng, y_pool, d)) for j in range(total - nx)]
    st.post(ConstraintDescriptor.disjoint(xs, ys))
    return st


def _random_set(rng, st, name, universe, k):
    """A set variable over ``universe`` with at most ``k`` undecided elements."""
    universe = list(universe)
    undecided = set(rng.sample(universe, min(len(universe), rng.randint(0, k))))
    lb = [v for v in universe if v not in undecided and rng.random() < 0.5]
    ub = sorted(undecided | set(lb))
    return st.add_setvar(name, universe, lb, ub)


def _among_set(rng, n, d, k):
    st = ProblemState()
    pool = list(range(1, 7))
    nx = rng.randint(1, n)
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, pool, d)) for i in range(nx)]
    s = _random_set(rng, st, "S", rng.sample(pool, rng.randint(1, 5)), k)
    nv = st.add_var("N", random_domain(rng, range(0, nx + 1), d))
    st.post(ConstraintDescriptor.among_set(xs, s, nv))
    return st


def _roots(rng, n, d, k):
    st = ProblemState()
    pool = list(range(1, 7))
    nx = rng.randint(1, n)
    xs = [st.add_var(f"X{i + 1}", random_domain(rng, pool, d)) for i in range(nx)]
    positions = range(1, nx + 1)
    s = _random_set(rng, st, "S", rng.sample(positions, rng.randint(1, nx)), nx)
    t = _random_set(rng, st, "T", rng.sample(pool, rng.randint(1, 5)), k)
    st.post(ConstraintDescriptor.roots(xs, s, t))
    return st


def _sum_eq(rng, n, d, k):
    st = ProblemState()
    nx = rng.randint(1, max(1, n - 1))
    xs = [st.add_var(f"X{i + 1}", holey_domain(rng)) for i in range(nx)]
    t = st.add_var("T", holey_domain(rng, 0, 9 * nx))
    st.post(ConstraintDescriptor.sum_eq(xs, t))
    return st


FAMILIES = {
    "nvalue": _nvalue,
    "uses": _uses,
    "cardpath": _cardpath,
    "valsymbreak": _valsymbreak,
    "disjoint": _disjoint,
    "among_set": _among_set,
    "roots": _roots,
    "sum_eq": _sum_eq,
}


def random_instance(kind: str, rng: random.Random, n: int, d: int, k: int) -> ProblemState:
    """One random single-constraint instance of ``kind``."""
    return FAMILIES[kind](rng, n, d, k)


def hitting_set_instance(sets, k: int) -> ProblemState:
    """NValue instance whose solutions with N <= k are hitting sets of size <= k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    st = ProblemState()
    xs = []
    for i, s in enumerate(sets):
        if not s:
            raise ValueError(f"set #{i + 1} is empty and cannot be hit")
        xs.append(st.add_var(f"X{i + 1}", s))
    nv = st.add_var("N", range(0, k + 1))
    st.post(ConstraintDescriptor.nvalue(xs, nv))
    return st
