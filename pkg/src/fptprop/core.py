"""Domains, variables, set variables, constraint descriptors and the fixpoint engine.

Domains are sorted tuples of ints. A :class:`ProblemState` is treated as a
value: propagators never mutate the state they receive, they return a
:class:`FilterOutcome` carrying a fresh state.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "MIN_VALUE",
    "MAX_VALUE",
    "Domain",
    "FPTError",
    "UsageError",
    "ParameterTooLarge",
    "ContractViolation",
    "SetVariable",
    "ConstraintDescriptor",
    "ProblemState",
    "Status",
    "FilterOutcome",
    "Propagator",
    "make_domain",
    "remove_value",
    "restrict",
    "fixpoint",
    "is_fixed",
    "assigned_value",
    "KINDS",
]

LOG = logging.getLogger(__name__)

# Values are signed 64-bit integers.
MIN_VALUE = -(2**63)
MAX_VALUE = 2**63 - 1

Domain = tuple  # sorted, duplicate-free tuple[int, ...]

KINDS = (
    "nvalue",
    "uses",
    "cardpath",
    "valsymbreak",
    "disjoint",
    "among_set",
    "roots",
    "sum_eq",
    "extensional",
)


class FPTError(Exception):
    """Base class for library errors."""


class UsageError(FPTError, ValueError):
    """Bad call: unknown variable, malformed parameters, unfixed variable..."""


class ParameterTooLarge(FPTError):
    """A fixed parameter (backdoor size, bitmask width, run product) exceeds its cap."""

    def __init__(self, name: str, value: int, cap: int):
        super().__init__(f"parameter {name}={value} exceeds cap {cap}")
        self.name = name
        self.value = value
        self.cap = cap


class ContractViolation(FPTError, AssertionError):
    """A propagator broke the contracting contract (it added values)."""


def make_domain(values: Iterable[int]) -> Domain:
    dom = tuple(sorted(set(int(v) for v in values)))
    for v in dom:
        if not MIN_VALUE <= v <= MAX_VALUE:
            raise UsageError(f"value {v} outside the 64-bit integer range")
    return dom


@dataclass(frozen=True)
class SetVariable:
    """A set variable stored as one 0/1 variable per universe element."""

    name: str
    universe: tuple[int, ...]
    bits: tuple[int, ...]

    def bit(self, value: int) -> int | None:
        try:
            return self.bits[self.universe.index(value)]
        except ValueError:
            return None

    def lb(self, state: ProblemState) -> frozenset[int]:
        return frozenset(v for v, b in zip(self.universe, self.bits) if state.domains[b] == (1,))

    def ub(self, state: ProblemState) -> frozenset[int]:
        return frozenset(v for v, b in zip(self.universe, self.bits) if 1 in state.domains[b])

    def undecided(self, state: ProblemState) -> list[int]:
        """Universe values whose bit is still {0, 1}."""
        return [v for v, b in zip(self.universe, self.bits) if len(state.domains[b]) > 1]


@dataclass(frozen=True)
class ConstraintDescriptor:
    """A posted constraint.

    ``roles`` names the pieces of the scope (``x``, ``y``, ``n``, set-variable
    indices, ...); ``scope`` is the flat list of every variable id touched,
    set-variable bits included. Build descriptors through the factory
    classmethods so the two stay in sync.
    """

    kind: str
    scope: tuple[int, ...]
    roles: Mapping[str, object] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown constraint kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if len(set(self.scope)) != len(self.scope):
            raise UsageError(f"{self.label}: a variable appears twice in the scope")

    @property
    def label(self) -> str:
        return self.name or self.kind

    # factories -------------------------------------------------------------

    @classmethod
    def nvalue(cls, xs: Sequence[int], n: int, name: str = "") -> ConstraintDescriptor:
        return cls("nvalue", (*xs, n), {"x": tuple(xs), "n": n}, {}, name)

    @classmethod
    def uses(cls, xs: Sequence[int], ys: Sequence[int], name: str = "") -> ConstraintDescriptor:
        return cls("uses", (*ys, *xs), {"x": tuple(xs), "y": tuple(ys)}, {}, name)

    @classmethod
    def cardpath(cls, xs: Sequence[int], n: int, p: int, allowed, name: str = "") -> ConstraintDescriptor:
        """``allowed`` is a builtin name or an iterable of allowed p-tuples."""
        if not isinstance(allowed, str):
            allowed = frozenset(tuple(int(v) for v in t) for t in allowed)
            if any(len(t) != p for t in allowed):
                raise UsageError(f"cardpath tuple table rows must have arity p={p}")
        if p < 1 or len(xs) < p:
            raise UsageError(f"cardpath needs 1 <= p <= n, got p={p}, n={len(xs)}")
        return cls("cardpath", (*xs, n), {"x": tuple(xs), "n": n}, {"p": p, "allowed": allowed}, name)

    @classmethod
    def valsymbreak(cls, xs: Sequence[int], sigmas: Sequence[Mapping[int, int]], name: str = "") -> ConstraintDescriptor:
        sig = tuple(dict(s) for s in sigmas)
        for s in sig:
            if sorted(s.keys()) != sorted(s.values()):
                raise UsageError(f"symmetry {s} is not a bijection on its values")
        return cls("valsymbreak", tuple(xs), {"x": tuple(xs)}, {"sigmas": sig}, name)

    @classmethod
    def disjoint(cls, xs: Sequence[int], ys: Sequence[int], name: str = "") -> ConstraintDescriptor:
        return cls("disjoint", (*xs, *ys), {"x": tuple(xs), "y": tuple(ys)}, {}, name)

    @classmethod
    def among_set(cls, xs: Sequence[int], s: SetVariable, n: int, name: str = "") -> ConstraintDescriptor:
        return cls("among_set", (*xs, *s.bits, n), {"x": tuple(xs), "s": s, "n": n}, {}, name)

    @classmethod
    def roots(cls, xs: Sequence[int], s: SetVariable, t: SetVariable, name: str = "") -> ConstraintDescriptor:
        """``s`` ranges over 1-based positions of ``xs``, ``t`` over values."""
        return cls("roots", (*xs, *s.bits, *t.bits), {"x": tuple(xs), "s": s, "t": t}, {}, name)

    @classmethod
    def sum_eq(cls, xs: Sequence[int], target: int, name: str = "") -> ConstraintDescriptor:
        return cls("sum_eq", (*xs, target), {"x": tuple(xs), "target": target}, {}, name)

    @classmethod
    def extensional(cls, scope: Sequence[int], tuples: Iterable[Sequence[int]], name: str = "") -> ConstraintDescriptor:
        table = frozenset(tuple(int(v) for v in t) for t in tuples)
        if any(len(t) != len(scope) for t in table):
            raise UsageError("extensional tuple arity does not match the scope")
        return cls("extensional", tuple(scope), {"x": tuple(scope)}, {"tuples": table}, name)


@dataclass
class ProblemState:
    domains: list[Domain] = field(default_factory=list)
    names: list[str] = field(default_factory=list)
    setvars: list[SetVariable] = field(default_factory=list)
    constraints: list[ConstraintDescriptor] = field(default_factory=list)

    def add_var(self, name: str, values: Iterable[int]) -> int:
        dom = make_domain(values)
        if not dom:
            raise UsageError(f"variable {name!r} has an empty domain")
        self.domains.append(dom)
        self.names.append(name)
        return len(self.domains) - 1

    def add_setvar(self, name: str, universe: Iterable[int], lb: Iterable[int] = (), ub: Iterable[int] | None = None) -> SetVariable:
        uni = make_domain(universe)
        lb = set(lb)
        ub = set(uni) if ub is None else set(ub)
        if not lb <= ub <= set(uni):
            raise UsageError(f"set variable {name!r}: need lb <= ub <= universe")
        bits = []
        for v in uni:
            dom = (1,) if v in lb else (0, 1) if v in ub else (0,)
            bits.append(self.add_var(f"{name}[{v}]", dom))
        sv = SetVariable(name, uni, tuple(bits))
        self.setvars.append(sv)
        return sv

    def post(self, c: ConstraintDescriptor) -> ConstraintDescriptor:
        for v in c.scope:
            self.check_var(v)
        self.constraints.append(c)
        return c

    def check_var(self, var: int) -> None:
        if not (isinstance(var, int) and 0 <= var < len(self.domains)):
            raise UsageError(f"unknown variable id {var!r}")

    def var_id(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UsageError(f"unknown variable {name!r}") from None

    def copy(self) -> ProblemState:
        return ProblemState(list(self.domains), list(self.names), list(self.setvars), list(self.constraints))

    def with_domains(self, updates: Mapping[int, Domain]) -> ProblemState:
        new = self.copy()
        for var, dom in updates.items():
            new.domains[var] = dom
        return new

    def __len__(self):
        return len(self.domains)


class Status(str, Enum):
    PRUNED = "pruned"
    UNCHANGED = "unchanged"
    WIPEOUT = "wipeout"


@dataclass
class FilterOutcome:
    """Result of a filtering step.

    On wipeout ``state`` is the input state (no empty domain is ever stored)
    and ``culprit`` names the variable or constraint that failed.
    """

    status: Status
    state: ProblemState
    removed: dict[int, list[int]] = field(default_factory=dict)
    culprit: str | None = None

    @property
    def wipeout(self) -> bool:
        return self.status is Status.WIPEOUT


def restrict(state: ProblemState, updates: Mapping[int, Iterable[int]], culprit: str | None = None) -> FilterOutcome:
    """Replace the domains in ``updates`` by their intersection with the current ones.

    Values outside the current domain are ignored, so this is contracting by
    construction.
    """
    removed: dict[int, list[int]] = {}
    new_doms: dict[int, Domain] = {}
    for var, keep in updates.items():
        old = state.domains[var]
        keep = set(keep)
        dom = tuple(v for v in old if v in keep)
        if not dom:
            return FilterOutcome(Status.WIPEOUT, state, {var: list(old)}, culprit or state.names[var])
        if len(dom) != len(old):
            new_doms[var] = dom
            removed[var] = [v for v in old if v not in keep]
    if not removed:
        return FilterOutcome(Status.UNCHANGED, state)
    return FilterOutcome(Status.PRUNED, state.with_domains(new_doms), removed)


def remove_value(state: ProblemState, var: int, v: int) -> FilterOutcome:
    state.check_var(var)
    dom = state.domains[var]
    if v not in dom:
        return FilterOutcome(Status.UNCHANGED, state)
    return restrict(state, {var: [w for w in dom if w != v]})


def is_fixed(state: ProblemState, var: int) -> bool:
    state.check_var(var)
    return len(state.domains[var]) == 1


def assigned_value(state: ProblemState, var: int) -> int:
    if not is_fixed(state, var):
        raise UsageError(f"variable {state.names[var]!r} is not fixed: {state.domains[var]}")
    return state.domains[var][0]


@dataclass
class Propagator:
    """A named filtering procedure over a scope.

    ``fn`` must be contracting and sound. The engine checks the first property.
    """

    name: str
    scope: tuple[int, ...]
    fn: Callable[[ProblemState], FilterOutcome]
    calls: int = 0

    def __call__(self, state: ProblemState) -> FilterOutcome:
        self.calls += 1
        return self.fn(state)


def fixpoint(state: ProblemState, propagators: Sequence[Propagator]) -> FilterOutcome:
    """Run ``propagators`` round-robin until no domain changes.

    A propagator is re-queued whenever a variable in its scope changes
    (including changes it made itself, so non-idempotent filters are fine).
    """
    current = state
    watchers: dict[int, list[int]] = {}
    for idx, p in enumerate(propagators):
        for var in p.scope:
            watchers.setdefault(var, []).append(idx)
    queue = deque(range(len(propagators)))
    queued = set(queue)
    while queue:
        idx = queue.popleft()
        queued.discard(idx)
        prop = propagators[idx]
        out = prop(current)
        if out.status is Status.WIPEOUT:
            LOG.debug("wipeout in %s", prop.name)
            culprit = f"{prop.name}: {out.culprit}" if out.culprit else prop.name
            return FilterOutcome(Status.WIPEOUT, state, out.removed, culprit)
        if out.status is Status.UNCHANGED:
            continue
        for var in range(len(current.domains)):
            old, new = current.domains[var], out.state.domains[var]
            if old is new or old == new:
                continue
            if not set(new) <= set(old):
                raise ContractViolation(f"{prop.name} added values to {current.names[var]}: {old} -> {new}")
            for w in watchers.get(var, ()):
                if w not in queued:
                    queue.append(w)
                    queued.add(w)
        current = out.state
    removed = {}
    for var, (old, new) in enumerate(zip(state.domains, current.domains)):
        if old != new:
            removed[var] = [v for v in old if v not in new]
    if not removed:
        return FilterOutcome(Status.UNCHANGED, state)
    return FilterOutcome(Status.PRUNED, current, removed)
