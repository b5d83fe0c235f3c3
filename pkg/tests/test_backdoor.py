import random

import pytest
from hypothesis import given, settings, strategies as st

from fptprop.backdoor import BackdoorDecomposition, among_set_dc, disjoint_dc, enumerate_union, roots_dc
from fptprop.core import ConstraintDescriptor, ParameterTooLarge, Status
from fptprop.generators import random_instance
from fptprop.propagators import filter_constraint

from conftest import doms, same_as_oracle


def test_empty_backdoor_is_one_subfilter_call(state):
    x = state.add_var("X", [1, 2, 3])
    calls = []

    def sub(assignment, st_):
        calls.append(assignment)
        return {x: {2, 3}}

    out = enumerate_union(BackdoorDecomposition([], [x], sub), state)
    assert calls == [()]
    assert out.state.domains[x] == (2, 3)


def test_all_completions_fail(state):
    x = state.add_var("X", [1])
    out = enumerate_union(BackdoorDecomposition([(0, 1)], [x], lambda a, s: None), state)
    assert out.status is Status.WIPEOUT


def test_prefixed_bits_are_not_enumerated(state):
    x = state.add_var("X", [1])
    seen = []

    def sub(a, s):
        seen.append(a)
        return {x: {1}}

    enumerate_union(BackdoorDecomposition([(1,), (0, 1)], [x], sub), state)
    assert seen == [(1, 0)]  # early exit after the first completion covers everything


def test_cap_names_parameter(state):
    x = state.add_var("X", [1])
    dec = BackdoorDecomposition([(0, 1)] * 5, [x], lambda a, s: {x: {1}})
    with pytest.raises(ParameterTooLarge, match="k=5"):
        enumerate_union(dec, state, k_max=4)


# Disjoint ---------------------------------------------------------------------


def test_disjoint_direct_disequality(state):
    x, y = state.add_var("X1", [1]), state.add_var("Y1", [1, 2])
    assert disjoint_dc([x], [y], state).state.domains[y] == (2,)


def test_disjoint_infeasible(state):
    x = state.add_var("X1", [1, 2])
    ys = [state.add_var("Y1", [1]), state.add_var("Y2", [2])]
    assert disjoint_dc([x], ys, state).wipeout


def test_disjoint_unchanged(state):
    xs = [state.add_var("X1", [1, 2]), state.add_var("X2", [1, 2])]
    y = state.add_var("Y1", [1, 2, 3])
    assert disjoint_dc(xs, [y], state).status is Status.UNCHANGED


# Among ------------------------------------------------------------------------


def test_among_zero_members(state):
    x = state.add_var("X1", [1, 2])
    s = state.add_setvar("S", [1], lb=[1])
    n = state.add_var("N", [0])
    assert among_set_dc([x], s, n, state).state.domains[x] == (2,)


def test_among_forces_set_bits(state):
    xs = [state.add_var("X1", [1]), state.add_var("X2", [2])]
    s = state.add_setvar("S", [1, 2])
    n = state.add_var("N", [2])
    out = among_set_dc(xs, s, n, state)
    assert [out.state.domains[b] for b in s.bits] == [(1,), (1,)]
    assert s.lb(out.state) == {1, 2}


def test_among_forced_member_pushes_other_out(state):
    xs = [state.add_var("X1", [1]), state.add_var("X2", [1, 3])]
    s = state.add_setvar("S", [1, 2], lb=[1, 2])
    n = state.add_var("N", [1])
    assert among_set_dc(xs, s, n, state).state.domains[xs[1]] == (3,)


# Roots ------------------------------------------------------------------------


def test_roots_membership_forced(state):
    x = state.add_var("X1", [1])
    s = state.add_setvar("S", [1])
    t = state.add_setvar("T", [1], lb=[1])
    out = roots_dc([x], s, t, state)
    assert out.state.domains[s.bits[0]] == (1,)


def test_roots_exclusion_forced(state):
    x = state.add_var("X1", [1, 2])
    s = state.add_setvar("S", [1], lb=[], ub=[])
    t = state.add_setvar("T", [2], lb=[2])
    assert roots_dc([x], s, t, state).state.domains[x] == (1,)


def test_roots_open_t(state):
    x = state.add_var("X1", [1, 2])
    s = state.add_setvar("S", [1], lb=[1])
    t = state.add_setvar("T", [1, 2])
    assert roots_dc([x], s, t, state).status is Status.UNCHANGED


def test_roots_position_outside_s_universe(state):
    xs = [state.add_var("X1", [1]), state.add_var("X2", [1, 2])]
    s = state.add_setvar("S", [1])  # position 2 can never be in S
    t = state.add_setvar("T", [1], lb=[1])
    c = ConstraintDescriptor.roots(xs, s, t)
    out = roots_dc(xs, s, t, state)
    assert out.state.domains[xs[1]] == (2,)
    assert same_as_oracle(out, state, c)


# properties -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(kind=st.sampled_from(["disjoint", "among_set", "roots"]), seed=st.integers(0, 10**9))
def test_random_backdoor_matches_oracle(kind, seed):
    st_ = random_instance(kind, random.Random(seed), 4, 4, 3)
    out = filter_constraint(st_.constraints[0], st_)
    assert same_as_oracle(out, st_)
    if not out.wipeout:
        assert filter_constraint(st_.constraints[0], out.state).status is Status.UNCHANGED


def test_union_is_order_independent(state):
    xs = [state.add_var("X1", [1, 2, 3]), state.add_var("X2", [2, 3])]
    ys = [state.add_var("Y1", [1, 3]), state.add_var("Y2", [2, 3, 4])]
    shared = [1, 2, 3]

    def sub(a, st_):
        in_s = {v for v, b in zip(shared, a) if b}
        out = {}
        for v in xs:
            out[v] = {w for w in st_.domains[v] if w not in shared or w in in_s}
        for v in ys:
            out[v] = {w for w in st_.domains[v] if w not in in_s}
        return out if all(out.values()) else None

    fwd = enumerate_union(BackdoorDecomposition([(0, 1)] * 3, [*xs, *ys], sub), state)
    rev = enumerate_union(BackdoorDecomposition([(1, 0)] * 3, [*xs, *ys], sub), state)
    assert doms(fwd, [*xs, *ys]) == doms(rev, [*xs, *ys]) == doms(disjoint_dc(xs, ys, state), [*xs, *ys])
