"""Brute-force reference: semantic checkers and exhaustive domain consistency.

Nothing here shares code with the propagators. Set variables are handled
as their 0/1 bits, exactly like any other variable.
"""
from __future__ import annotations

import itertools
import math
from typing import Callable, Mapping, Sequence

from .core import ConstraintDescriptor, FilterOutcome, FPTError, ProblemState, Status, UsageError, restrict

__all__ = [
    "DEFAULT_ORACLE_CAP",
    "OracleCapExceeded",
    "Checker",
    "brute_force_dc",
    "enumerate_solutions",
    "nvalue_check",
    "uses_check",
    "cardpath_check",
    "valsymbreak_check",
    "disjoint_check",
    "among_check",
    "roots_check",
    "sum_check",
    "extensional_check",
    "checker_for",
    "builtin_predicate",
]

DEFAULT_ORACLE_CAP = 10**7

Checker = Callable[[Sequence[int]], bool]


class OracleCapExceeded(FPTError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"oracle would enumerate {size} assignments (cap {cap}); use a smaller instance")
        self.size = size
        self.cap = cap


def _domains(state: ProblemState, scope: Sequence[int], cap: int) -> list[tuple[int, ...]]:
    doms = [state.domains[v] for v in scope]
    size = math.prod(len(d) for d in doms)
    if size > cap:
        raise OracleCapExceeded(size, cap)
    return doms


def brute_force_dc(check: Checker, state: ProblemState, scope: Sequence[int], cap: int = DEFAULT_ORACLE_CAP) -> FilterOutcome:
    """Keep exactly the values that appear in some satisfying assignment of ``scope``."""
    doms = _domains(state, scope, cap)
    supported: list[set[int]] = [set() for _ in scope]
    found = False
    for assignment in itertools.product(*doms):
        if check(assignment):
            found = True
            for seen, v in zip(supported, assignment):
                seen.add(v)
    if not found:
        return FilterOutcome(Status.WIPEOUT, state, culprit="no solution")
    return restrict(state, dict(zip(scope, supported)))


def enumerate_solutions(check: Checker, state: ProblemState, scope: Sequence[int], cap: int = DEFAULT_ORACLE_CAP) -> list[tuple[int, ...]]:
    """All satisfying assignments, lexicographic in (variable order, value order)."""
    doms = _domains(state, scope, cap)
    return [a for a in itertools.product(*doms) if check(a)]


# checkers ------------------------------------------------------------------


def _complete(assignment, arity):
    if len(assignment) != arity or any(v is None for v in assignment):
        raise UsageError(f"checker needs a complete assignment of {arity} values, got {assignment!r}")


def nvalue_check(xs: Sequence[int], n: int) -> bool:
    return len(set(xs)) == n


def uses_check(xs: Sequence[int], ys: Sequence[int]) -> bool:
    return set(xs) <= set(ys)


def builtin_predicate(name: str) -> Callable[[Sequence[int]], bool]:
    if name == "equal":
        return lambda t: all(a == t[0] for a in t)
    if name == "not-equal":
        return lambda t: len(set(t)) == len(t)
    if name == "less-than":
        return lambda t: all(a < b for a, b in zip(t, t[1:]))
    raise UsageError(f"unknown cardpath builtin {name!r}; expected equal, not-equal or less-than")


def cardpath_check(p: int, allowed, xs: Sequence[int], n: int) -> bool:
    """``allowed`` is a builtin name, a set of tuples or a predicate."""
    if isinstance(allowed, str):
        allowed = builtin_predicate(allowed)
    elif not callable(allowed):
        table = allowed
        allowed = lambda t: tuple(t) in table  # noqa: E731
    count = sum(1 for i in range(len(xs) - p + 1) if allowed(tuple(xs[i:i + p])))
    return count == n


def valsymbreak_check(xs: Sequence[int], sigmas: Sequence[Mapping[int, int]]) -> bool:
    for sigma in sigmas:
        try:
            image = tuple(sigma[x] for x in xs)
        except KeyError as exc:
            raise UsageError(f"symmetry undefined on value {exc.args[0]}") from None
        if tuple(xs) > image:
            return False
    return True


def disjoint_check(xs: Sequence[int], ys: Sequence[int]) -> bool:
    return all(x != y for x in xs for y in ys)


def among_check(xs: Sequence[int], s: set[int], n: int) -> bool:
    return n == sum(1 for x in xs if x in s)


def roots_check(xs: Sequence[int], s: set[int], t: set[int]) -> bool:
    """``s`` holds 1-based positions."""
    return set(s) == {i for i, x in enumerate(xs, start=1) if x in t}


def sum_check(xs: Sequence[int], target: int) -> bool:
    return sum(xs) == target


def extensional_check(assignment: Sequence[int], tuples) -> bool:
    return tuple(assignment) in tuples


def checker_for(c: ConstraintDescriptor) -> Checker:
    """A checker over ``c.scope`` (set bits included) implementing ``c``'s semantics."""
    r = c.roles
    arity = len(c.scope)
    pos = {v: i for i, v in enumerate(c.scope)}

    def pick(assignment, ids):
        return [assignment[pos[v]] for v in ids]

    def members(assignment, sv):
        return {u for u, b in zip(sv.universe, sv.bits) if assignment[pos[b]] == 1}

    kind = c.kind
    if kind == "nvalue":
        fn = lambda a: nvalue_check(pick(a, r["x"]), a[pos[r["n"]]])  # noqa: E731
    elif kind == "uses":
        fn = lambda a: uses_check(pick(a, r["x"]), pick(a, r["y"]))  # noqa: E731
    elif kind == "cardpath":
        p, allowed = c.params["p"], c.params["allowed"]
        fn = lambda a: cardpath_check(p, allowed, pick(a, r["x"]), a[pos[r["n"]]])  # noqa: E731
    elif kind == "valsymbreak":
        sigmas = c.params["sigmas"]
        fn = lambda a: valsymbreak_check(pick(a, r["x"]), sigmas)  # noqa: E731
    elif kind == "disjoint":
        fn = lambda a: disjoint_check(pick(a, r["x"]), pick(a, r["y"]))  # noqa: E731
    elif kind == "among_set":
        fn = lambda a: among_check(pick(a, r["x"]), members(a, r["s"]), a[pos[r["n"]]])  # noqa: E731
    elif kind == "roots":
        fn = lambda a: roots_check(pick(a, r["x"]), members(a, r["s"]), members(a, r["t"]))  # noqa: E731
    elif kind == "sum_eq":
        fn = lambda a: sum_check(pick(a, r["x"]), a[pos[r["target"]]])  # noqa: E731
    elif kind == "extensional":
        tuples = c.params["tuples"]
        fn = lambda a: extensional_check(a, tuples)  # noqa: E731
    else:  # pragma: no cover - descriptor validates kinds
        raise UsageError(f"no checker for {kind!r}")

    def check(assignment):
        _complete(assignment, arity)
        return fn(assignment)

    return check
