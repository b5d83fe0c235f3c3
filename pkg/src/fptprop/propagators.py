"""Turn constraint descriptors into propagators for the fixpoint engine."""
from __future__ import annotations

from dataclasses import dataclass, field

from .automata import DEFAULT_MAX_BITS, cardpath_automaton, nvalue_automaton, uses_automaton, valsymbreak_automaton
from .backdoor import DEFAULT_K_MAX, among_set_dc, disjoint_dc, roots_dc
from .core import ConstraintDescriptor, FilterOutcome, ProblemState, Propagator, Status, UsageError, restrict
from .interval_lift import DEFAULT_RUN_CAP, LiftStats, interval_parameter, lift_to_dc, sum_bc
from .regular import filter_automaton

__all__ = ["Settings", "filter_constraint", "propagator_for", "propagators_for", "parameter_k", "table_filter"]


@dataclass
class Settings:
    k_max: int = DEFAULT_K_MAX
    max_bits: int = DEFAULT_MAX_BITS
    run_cap: int = DEFAULT_RUN_CAP
    lift_stats: LiftStats = field(default_factory=LiftStats)


def _values(state: ProblemState, ids) -> set[int]:
    out: set[int] = set()
    for v in ids:
        out.update(state.domains[v])
    return out


def table_filter(scope, tuples, state: ProblemState) -> FilterOutcome:
    """Plain table filtering: keep values occurring in a tuple that fits every domain."""
    doms = [set(state.domains[v]) for v in scope]
    keep = [set() for _ in scope]
    found = False
    for t in tuples:
        if all(a in d for a, d in zip(t, doms)):
            found = True
            for k, a in zip(keep, t):
                k.add(a)
    if not found:
        return FilterOutcome(Status.WIPEOUT, state, culprit="no allowed tuple fits")
    return restrict(state, dict(zip(scope, keep)))


def filter_constraint(c: ConstraintDescriptor, state: ProblemState, settings: Settings | None = None) -> FilterOutcome:
    """Enforce domain consistency on one constraint with its parameterised algorithm."""
    s = settings or Settings()
    r = c.roles
    kind = c.kind
    if kind == "nvalue":
        xs = r["x"]
        a = nvalue_automaton(_values(state, xs), len(xs), s.max_bits)
        return filter_automaton(a, state, c.scope)
    if kind == "uses":
        xs, ys = r["x"], r["y"]
        a = uses_automaton(_values(state, ys), len(ys), len(xs), s.max_bits)
        return filter_automaton(a, state, c.scope)
    if kind == "cardpath":
        xs = r["x"]
        d = max(len(state.domains[v]) for v in xs)
        a = cardpath_automaton(c.params["p"], c.params["allowed"], len(xs), d)
        return filter_automaton(a, state, c.scope)
    if kind == "valsymbreak":
        xs = r["x"]
        a = valsymbreak_automaton(c.params["sigmas"], len(xs), _values(state, xs), s.max_bits)
        return filter_automaton(a, state, c.scope)
    if kind == "disjoint":
        return disjoint_dc(r["x"], r["y"], state, s.k_max)
    if kind == "among_set":
        return among_set_dc(r["x"], r["s"], r["n"], state, s.k_max)
    if kind == "roots":
        return roots_dc(r["x"], r["s"], r["t"], state, s.k_max)
    if kind == "sum_eq":
        return lift_to_dc(sum_bc, c.scope, state, s.run_cap, s.lift_stats, name=c.label)
    if kind == "extensional":
        return table_filter(c.scope, c.params["tuples"], state)
    raise UsageError(f"no propagator for {kind!r}")  # pragma: no cover


def propagator_for(c: ConstraintDescriptor, settings: Settings | None = None) -> Propagator:
    s = settings or Settings()
    return Propagator(c.label, c.scope, lambda st: filter_constraint(c, st, s))


def propagators_for(constraints, settings: Settings | None = None) -> list[Propagator]:
    s = settings or Settings()
    return [propagator_for(c, s) for c in constraints]


def parameter_k(c: ConstraintDescriptor, state: ProblemState) -> int | None:
    """The fixed parameter the algorithm for ``c`` is exponential in."""
    r = c.roles
    kind = c.kind
    if kind == "nvalue":
        return len(_values(state, r["x"]))
    if kind == "uses":
        return len(_values(state, r["y"]))
    if kind == "cardpath":
        return c.params["p"] + max(len(state.domains[v]) for v in r["x"])
    if kind == "valsymbreak":
        return len(c.params["sigmas"])
    if kind == "disjoint":
        return len(_values(state, r["x"]) & _values(state, r["y"]))
    if kind == "among_set":
        return len(r["s"].undecided(state))
    if kind == "roots":
        return len(r["t"].undecided(state))
    if kind == "sum_eq":
        p, q = interval_parameter([state.domains[v] for v in c.scope])
        return p + q
    return None
