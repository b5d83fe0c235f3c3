"""Domain-consistency filtering for constraints given as layered automata.

The automaton is unfolded over the scope one layer per variable. Only
states reachable from the initial state are ever built, which matters: the
builders in :mod:`fptprop.automata` have up to 2^k states per layer but
typically reach far fewer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .core import FilterOutcome, ProblemState, Status, restrict

__all__ = ["Automaton", "LayeredGraph", "unfold", "filter_automaton", "StateBoundExceeded"]

StateId = Hashable


class StateBoundExceeded(AssertionError):
    pass


@dataclass(frozen=True)
class Automaton:
    """Deterministic layered acceptor.

    ``transition(layer, state, value)`` returns the successor or ``None`` to
    reject. ``state_bound``, when given, is an upper bound on the number of
    states in any layer and is asserted while unfolding.
    """

    n_layers: int
    initial: StateId
    transition: Callable[[int, StateId, int], StateId | None]
    accepting: Callable[[StateId], bool]
    state_bound: int | None = None
    name: str = "automaton"


@dataclass
class LayeredGraph:
    # layers[i]: forward-reachable states before reading scope[i]; n_layers + 1 entries
    layers: list[set] = field(default_factory=list)
    # edges[i]: (source, value, target) triples out of layers[i]
    edges: list[list[tuple]] = field(default_factory=list)
    # alive[i]: states of layers[i] from which an accepting final state is reachable
    alive: list[set] = field(default_factory=list)

    def live_edges(self, layer: int):
        nxt = self.alive[layer + 1]
        return [e for e in self.edges[layer] if e[2] in nxt]

    def supports(self, layer: int) -> set[int]:
        nxt = self.alive[layer + 1]
        return {v for _, v, t in self.edges[layer] if t in nxt}

    @property
    def n_states(self) -> int:
        return sum(len(layer) for layer in self.layers)


def unfold(a: Automaton, state: ProblemState, scope: Sequence[int]) -> LayeredGraph:
    if len(scope) != a.n_layers:
        raise ValueError(f"{a.name}: scope has {len(scope)} variables, automaton {a.n_layers} layers")
    g = LayeredGraph(layers=[{a.initial}])
    step = a.transition
    for i, var in enumerate(scope):
        dom = state.domains[var]
        out = []
        nxt = set()
        for q in g.layers[i]:
            for v in dom:
                t = step(i, q, v)
                if t is not None:
                    out.append((q, v, t))
                    nxt.add(t)
        if a.state_bound is not None and len(nxt) > a.state_bound:
            raise StateBoundExceeded(f"{a.name}: layer {i + 1} has {len(nxt)} states > bound {a.state_bound}")
        g.edges.append(out)
        g.layers.append(nxt)
    alive = [set() for _ in g.layers]
    alive[-1] = {q for q in g.layers[-1] if a.accepting(q)}
    for i in range(len(scope) - 1, -1, -1):
        nxt = alive[i + 1]
        alive[i] = {q for q, _, t in g.edges[i] if t in nxt}
    g.alive = alive
    return g


def filter_automaton(a: Automaton, state: ProblemState, scope: Sequence[int]) -> FilterOutcome:
    """Keep value v of scope[i] iff some accepting path reads v at layer i."""
    g = unfold(a, state, scope)
    if a.initial not in g.alive[0]:
        return FilterOutcome(Status.WIPEOUT, state, culprit="no accepting path")
    return restrict(state, {var: g.supports(i) for i, var in enumerate(scope)}, )
