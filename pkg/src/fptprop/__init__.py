"""Fixed-parameter tractable domain-consistency propagators for global constraints."""
from .core import (
    ConstraintDescriptor,
    FilterOutcome,
    ProblemState,
    Propagator,
    SetVariable,
    Status,
    assigned_value,
    fixpoint,
    is_fixed,
    remove_value,
)
from .propagators import Settings, filter_constraint, propagator_for, propagators_for

__version__ = "0.1.0"
