import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fptprop.core import ConstraintDescriptor, ParameterTooLarge, Status, UsageError
from fptprop.generators import random_instance
from fptprop.interval_lift import LiftStats, interval_parameter, intervals_count, lift_to_dc, runs, sum_bc

from conftest import doms, same_as_oracle


@pytest.mark.parametrize("dom,count", [((1, 2, 3), 1), ((1, 3), 2), ((7,), 1), ((0, 1, 4, 5, 9), 3)])
def test_intervals_count(dom, count):
    assert intervals_count(dom) == count
    assert len(runs(dom)) == count


def test_intervals_count_empty():
    with pytest.raises(UsageError):
        intervals_count(())


@given(st.sets(st.integers(-20, 20), min_size=1))
def test_intervals_count_two_formulations(s):
    alt = 1 + sum(1 for v in s if v + 1 not in s and v != max(s))
    assert intervals_count(s) == alt


@given(st.sets(st.integers(-20, 20), min_size=1))
def test_runs_cover_domain(s):
    dom = tuple(sorted(s))
    rs = runs(dom)
    covered = [v for lo, hi in rs for v in range(lo, hi + 1)]
    assert covered == list(dom)
    assert all(a[1] + 1 < b[0] for a, b in zip(rs, rs[1:]))


def test_interval_parameter():
    assert interval_parameter([(1, 2, 3), (1, 3), (1, 3, 5)]) == (3, 2)


# sum_bc -----------------------------------------------------------------------


def test_sum_bc_infeasible():
    assert sum_bc([(1, 2), (1, 2), (5, 5)]) is None


def test_sum_bc_forced_maxima():
    assert sum_bc([(1, 3), (1, 3), (6, 6)]) == [(3, 3), (3, 3), (6, 6)]


def test_sum_bc_narrows():
    out = sum_bc([(0, 9), (0, 1), (4, 5)])
    assert out[0] == (3, 5)
    # cross-check by enumeration
    sols = [(a, b) for a in range(10) for b in range(2) if 4 <= a + b <= 5]
    assert (min(a for a, _ in sols), max(a for a, _ in sols)) == (3, 5)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=2, max_size=4))
def test_sum_bc_complete_on_intervals(raw):
    bounds = [(min(a, b), max(a, b)) for a, b in raw]
    tuples = [t for t in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)) if sum(t[:-1]) == t[-1]]
    out = sum_bc(bounds)
    assert (out is None) == (not tuples)
    if out is not None:
        # every returned bound is supported (bound consistency), nothing supported is cut
        for j, (lo, hi) in enumerate(out):
            vals = {t[j] for t in tuples}
            assert lo in vals and hi in vals
            assert min(vals) == lo and max(vals) == hi


# lift_to_dc --------------------------------------------------------------------


def _sum(st_, domains, target):
    xs = [st_.add_var(f"X{i + 1}", d) for i, d in enumerate(domains)]
    t = st_.add_var("T", target)
    return [*xs, t]


def test_lift_holey(state):
    scope = _sum(state, [[1, 3], [1, 2, 3, 4]], [5])
    out = lift_to_dc(sum_bc, scope, state)
    assert doms(out, scope) == [(1, 3), (2, 4), (5,)]


def test_lift_all_intervals(state):
    scope = _sum(state, [[1, 2], [1, 2]], [3])
    stats = LiftStats()
    out = lift_to_dc(sum_bc, scope, state, stats=stats)
    assert out.status is Status.UNCHANGED
    assert stats.bc_calls <= stats.probes  # one BC call per probe when nothing has holes


def test_lift_only_top_pair(state):
    scope = _sum(state, [[1, 4], [1, 4]], [8])
    assert doms(lift_to_dc(sum_bc, scope, state), scope) == [(4,), (4,), (8,)]


def test_lift_cap(state):
    scope = _sum(state, [[0, 2, 4, 6]] * 3, range(30))
    with pytest.raises(ParameterTooLarge):
        lift_to_dc(sum_bc, scope, state, cap=8)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_lift_matches_oracle_and_cost_envelope(seed):
    st_ = random_instance("sum_eq", random.Random(seed), 4, 5, 2)
    c = st_.constraints[0]
    stats = LiftStats()
    out = lift_to_dc(sum_bc, c.scope, st_, stats=stats)
    assert same_as_oracle(out, st_, c)
    ds = [st_.domains[v] for v in c.scope]
    product = 1
    for d in ds:
        product *= intervals_count(d)
    assert stats.bc_calls <= len(ds) * max(len(d) for d in ds) * product
    p, q = interval_parameter(ds)
    assert product <= p**q
