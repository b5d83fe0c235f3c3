import random

import pytest
from hypothesis import given, settings, strategies as st

from fptprop.core import (
    ConstraintDescriptor,
    ContractViolation,
    FilterOutcome,
    ProblemState,
    Propagator,
    Status,
    UsageError,
    assigned_value,
    fixpoint,
    is_fixed,
    remove_value,
)
from fptprop.generators import FAMILIES, random_instance
from fptprop.propagators import filter_constraint, propagator_for, propagators_for


def test_remove_value(state):
    x = state.add_var("X", [1, 2])
    out = remove_value(state, x, 2)
    assert out.status is Status.PRUNED
    assert out.state.domains[x] == (1,)
    assert out.removed == {x: [2]}
    assert state.domains[x] == (1, 2)  # input untouched


def test_remove_last_value_wipes_out(state):
    x = state.add_var("X", [1])
    out = remove_value(state, x, 1)
    assert out.status is Status.WIPEOUT
    assert state.domains[x] == (1,)


def test_remove_absent_value(state):
    x = state.add_var("X", [1, 2])
    out = remove_value(state, x, 5)
    assert out.status is Status.UNCHANGED and out.removed == {}


def test_remove_unknown_variable(state):
    with pytest.raises(UsageError):
        remove_value(state, 3, 1)


def test_is_fixed_and_assigned_value(state):
    a = state.add_var("A", [3])
    b = state.add_var("B", [1, 2])
    s = state.add_setvar("S", [7], lb=[], ub=[])
    assert is_fixed(state, a) and assigned_value(state, a) == 3
    assert not is_fixed(state, b)
    assert is_fixed(state, s.bits[0]) and assigned_value(state, s.bits[0]) == 0
    with pytest.raises(UsageError):
        assigned_value(state, b)


def test_domain_is_sorted_and_deduplicated(state):
    x = state.add_var("X", [3, 1, 3, 2])
    assert state.domains[x] == (1, 2, 3)


def test_value_range_enforced(state):
    with pytest.raises(UsageError):
        state.add_var("X", [2**63])


def test_setvar_views(state):
    s = state.add_setvar("S", [1, 2, 3], lb=[1], ub=[1, 2])
    assert s.lb(state) == {1}
    assert s.ub(state) == {1, 2}
    assert s.undecided(state) == [2]
    with pytest.raises(UsageError):
        state.add_setvar("T", [1, 2], lb=[3])


def test_descriptor_rejects_repeated_variable(state):
    x = state.add_var("X", [1, 2])
    with pytest.raises(UsageError):
        ConstraintDescriptor.nvalue([x, x], x)


def test_post_checks_ids(state):
    with pytest.raises(UsageError):
        state.post(ConstraintDescriptor.nvalue([0, 1], 2))


def test_fixpoint_empty_list(state):
    state.add_var("X", [1, 2])
    assert fixpoint(state, []).status is Status.UNCHANGED


def test_fixpoint_single_propagator_matches_one_call(state):
    xs = [state.add_var(f"X{i}", d) for i, d in enumerate([[1, 2], [2, 3], [1, 3]])]
    n = state.add_var("N", [1, 3])
    c = state.post(ConstraintDescriptor.nvalue(xs, n))
    once = filter_constraint(c, state)
    fp = fixpoint(state, [propagator_for(c)])
    assert fp.state.domains == once.state.domains
    assert fp.state.domains[n] == (3,)


def _uses_plus_sum():
    st_ = ProblemState()
    x = st_.add_var("X", [1, 2, 3])
    y = st_.add_var("Y", [1, 2, 3])
    z = st_.add_var("Z", [0, 1])
    t = st_.add_var("T", [4])
    st_.post(ConstraintDescriptor.uses([x], [y]))
    st_.post(ConstraintDescriptor.sum_eq([y, z], t))
    return st_


def test_fixpoint_order_does_not_matter_on_feeding_constraints():
    st_ = _uses_plus_sum()
    a = fixpoint(st_, propagators_for(st_.constraints))
    b = fixpoint(st_, propagators_for(st_.constraints[::-1]))
    assert a.state.domains == b.state.domains
    # the sum fixes Y to {3, 4} ∩ dom = {3}, then Uses forces X = 3
    assert a.state.domains[:2] == [(3,), (3,)]


def test_fixpoint_reports_contract_violation(state):
    x = state.add_var("X", [1])

    def grow(s):
        return FilterOutcome(Status.PRUNED, s.with_domains({x: (1, 2)}), {})

    with pytest.raises(ContractViolation):
        fixpoint(state, [Propagator("grow", (x,), grow)])


def test_fixpoint_wipeout_names_constraint(state):
    x = state.add_var("X", [1, 2])
    y1, y2 = state.add_var("Y1", [1]), state.add_var("Y2", [2])
    c = state.post(ConstraintDescriptor.disjoint([x], [y1, y2], name="apart"))
    out = fixpoint(state, [propagator_for(c)])
    assert out.wipeout and out.culprit.startswith("apart")


def _paired(kind, seed):
    rng = random.Random(seed)
    st_ = random_instance(kind, rng, 4, 4, 3)
    scope = st_.constraints[0].scope
    a, b = rng.sample(scope, 2) if len(scope) > 1 else (scope[0], scope[0])
    if a == b:
        return st_
    da, db = st_.domains[a], st_.domains[b]
    table = [(u, v) for u in da for v in db if rng.random() < 0.6]
    st_.post(ConstraintDescriptor.extensional([a, b], table))
    return st_


@settings(max_examples=60, deadline=None)
@given(kind=st.sampled_from(sorted(FAMILIES)), seed=st.integers(0, 10**6))
def test_fixpoint_idempotent_and_order_independent(kind, seed):
    st_ = _paired(kind, seed)
    fwd = fixpoint(st_, propagators_for(st_.constraints))
    rev = fixpoint(st_, propagators_for(st_.constraints[::-1]))
    assert fwd.status == rev.status
    if fwd.wipeout:
        return
    assert fwd.state.domains == rev.state.domains
    again = fixpoint(fwd.state, propagators_for(st_.constraints))
    assert again.status is Status.UNCHANGED
    for old, new in zip(st_.domains, fwd.state.domains):
        assert set(new) <= set(old)
