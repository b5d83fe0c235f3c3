from __future__ import annotations

from pathlib import Path

import pytest

from fptprop.core import ProblemState
from fptprop.oracle import brute_force_dc, checker_for

ROOT = Path(__file__).resolve().parents[1]
INSTANCES = ROOT / "instances"
GOLDEN = Path(__file__).resolve().parent / "golden"


def doms(outcome, scope):
    """Domains of ``scope`` after filtering, or None on wipeout."""
    if outcome.wipeout:
        return None
    return [outcome.state.domains[v] for v in scope]


def oracle(state: ProblemState, c=None):
    c = c or state.constraints[0]
    return brute_force_dc(checker_for(c), state, c.scope)


def same_as_oracle(out, state: ProblemState, c=None) -> bool:
    c = c or state.constraints[0]
    return doms(out, c.scope) == doms(oracle(state, c), c.scope)


def vars_(st: ProblemState, **domains):
    return [st.add_var(name, dom) for name, dom in domains.items()]


@pytest.fixture
def state():
    return ProblemState()
