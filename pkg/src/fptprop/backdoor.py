"""Strong-backdoor enumeration: fix every completion of a small 0/1 backdoor,
filter the residual problem exactly, and take the union of what survives.

Three decompositions ship: Disjoint (backdoor = membership bits of the
values shared by both sides), Among with a set variable and Roots (backdoor =
undecided bits of the set variable that cuts every cycle).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import FilterOutcome, ParameterTooLarge, ProblemState, SetVariable, Status, restrict

__all__ = [
    "DEFAULT_K_MAX",
    "BackdoorDecomposition",
    "enumerate_union",
    "disjoint_dc",
    "among_set_dc",
    "roots_dc",
]

LOG = logging.getLogger(__name__)

DEFAULT_K_MAX = 20

# Residual filter: maps a complete backdoor assignment to per-variable
# surviving values (or None on wipeout) for every variable in the scope.
SubFilter = Callable[[tuple[int, ...], ProblemState], "dict[int, set[int]] | None"]


@dataclass
class BackdoorDecomposition:
    """``bits[j]`` lists the values backdoor bit j may still take.

    ``scope`` is every state variable the sub-filter reports on; bits that
    are themselves state variables belong in it too, and the sub-filter must
    report them fixed to the assigned value.
    """

    bits: Sequence[tuple[int, ...]]
    scope: Sequence[int]
    sub_filter: SubFilter
    name: str = "backdoor"

    @property
    def k(self) -> int:
        return sum(1 for b in self.bits if len(b) > 1)


def enumerate_union(dec: BackdoorDecomposition, state: ProblemState, k_max: int = DEFAULT_K_MAX) -> FilterOutcome:
    if dec.k > k_max:
        raise ParameterTooLarge("k", dec.k, k_max)
    scope = list(dec.scope)
    current = [set(state.domains[v]) for v in scope]
    union: list[set[int]] = [set() for _ in scope]
    total = sum(len(d) for d in current)
    covered = 0
    consistent = 0
    # itertools.product over ascending bit values == binary counting order
    for assignment in itertools.product(*dec.bits):
        survived = dec.sub_filter(assignment, state)
        if survived is None:
            continue
        consistent += 1
        for j, var in enumerate(scope):
            before = len(union[j])
            union[j] |= survived[var] & current[j]
            assert len(union[j]) >= before
            covered += len(union[j]) - before
        if covered == total:
            break
    LOG.debug("%s: %d consistent completions", dec.name, consistent)
    if not consistent:
        return FilterOutcome(Status.WIPEOUT, state, culprit="every backdoor completion fails")
    return restrict(state, dict(zip(scope, union)))


def _union(state: ProblemState, ids) -> set[int]:
    out: set[int] = set()
    for v in ids:
        out.update(state.domains[v])
    return out


def disjoint_dc(xs: Sequence[int], ys: Sequence[int], state: ProblemState, k_max: int = DEFAULT_K_MAX) -> FilterOutcome:
    """Domain consistency for X_i != Y_j for all i, j.

    A set S splits the shared values: X may only use shared values in S,
    Y only shared values outside S. With S fixed the two sides no longer
    interact.
    """
    shared = sorted(_union(state, xs) & _union(state, ys))

    def sub(assignment, st):
        in_s = {v for v, b in zip(shared, assignment) if b}
        out_s = set(shared) - in_s
        survived = {}
        for var in xs:
            keep = {v for v in st.domains[var] if v not in out_s}
            if not keep:
                return None
            survived[var] = keep
        for var in ys:
            keep = {v for v in st.domains[var] if v not in in_s}
            if not keep:
                return None
            survived[var] = keep
        return survived

    dec = BackdoorDecomposition([(0, 1)] * len(shared), [*xs, *ys], sub, "disjoint")
    return enumerate_union(dec, state, k_max)


def _set_backdoor(sv: SetVariable, state: ProblemState):
    """Bit domains for ``sv`` plus a decoder from a bit assignment to the member set."""
    bits = [state.domains[b] for b in sv.bits]

    def members(assignment):
        return {u for u, b in zip(sv.universe, assignment) if b}

    return bits, members


def among_set_dc(xs: Sequence[int], s: SetVariable, n: int, state: ProblemState, k_max: int = DEFAULT_K_MAX) -> FilterOutcome:
    """Domain consistency for N = |{i : X_i in S}|.

    Once S is fixed the decomposition (X_i in S) <-> B_i, sum(B_i) = N is
    acyclic; rather than materialise the B_i we count directly: ``lo``
    variables are forced into S, ``hi`` could be, and every count in
    between is reachable because each X_i picks in/out independently.
    """
    bits, members = _set_backdoor(s, state)

    def sub(assignment, st):
        inside = members(assignment)
        forced_in = []
        can_in = []
        for var in xs:
            dom = st.domains[var]
            forced_in.append(all(v in inside for v in dom))
            can_in.append(any(v in inside for v in dom))
        lo, hi = sum(forced_in), sum(can_in)
        n_dom = [c for c in st.domains[n] if lo <= c <= hi]
        if not n_dom:
            return None
        survived = {b: {a} for b, a in zip(s.bits, assignment)}
        survived[n] = set(n_dom)
        for i, var in enumerate(xs):
            others_lo = lo - forced_in[i]
            others_hi = hi - can_in[i]
            keep = set()
            for v in st.domains[var]:
                extra = 1 if v in inside else 0
                a, b = others_lo + extra, others_hi + extra
                if any(a <= c <= b for c in n_dom):
                    keep.add(v)
            if not keep:
                return None
            survived[var] = keep
        return survived

    dec = BackdoorDecomposition(bits, [*xs, *s.bits, n], sub, "among_set")
    return enumerate_union(dec, state, k_max)


def roots_dc(xs: Sequence[int], s: SetVariable, t: SetVariable, state: ProblemState, k_max: int = DEFAULT_K_MAX) -> FilterOutcome:
    """Domain consistency for S = {i : X_i in T}, positions 1-based.

    With T fixed, (i in S) <-> (X_i in T) splits into independent pieces,
    one per position. A position outside S's universe can never be in S.
    """
    bits, members = _set_backdoor(t, state)
    s_bit = {i: s.bit(i) for i in range(1, len(xs) + 1)}
    stray = [b for u, b in zip(s.universe, s.bits) if not 1 <= u <= len(xs)]

    def sub(assignment, st):
        inside = members(assignment)
        survived = {b: {a} for b, a in zip(t.bits, assignment)}
        for b in stray:
            if 0 not in st.domains[b]:
                return None
            survived[b] = {0}
        for i, var in enumerate(xs, start=1):
            dom = st.domains[var]
            member = set(st.domains[s_bit[i]]) if s_bit[i] is not None else {0}
            if not any(v in inside for v in dom):
                member.discard(1)
            if all(v in inside for v in dom):
                member.discard(0)
            if not member:
                return None
            if member == {1}:
                keep = {v for v in dom if v in inside}
            elif member == {0}:
                keep = {v for v in dom if v not in inside}
            else:
                keep = set(dom)
            survived[var] = keep
            if s_bit[i] is not None:
                survived[s_bit[i]] = member
        return survived

    dec = BackdoorDecomposition(bits, [*xs, *s.bits, *t.bits], sub, "roots")
    return enumerate_union(dec, state, k_max)
