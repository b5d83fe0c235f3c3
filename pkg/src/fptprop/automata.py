"""Automaton builders for NValue, Uses, CardPath and ValSymBreak.

Subset-valued states are int bitmasks. The width of those masks is the
fixed parameter, so it is capped (``max_bits``) and exceeding the cap is an
error rather than a slow run.
"""
from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .core import ParameterTooLarge, UsageError
from .oracle import builtin_predicate
from .regular import Automaton

__all__ = [
    "DEFAULT_MAX_BITS",
    "FINAL",
    "nvalue_automaton",
    "uses_automaton",
    "cardpath_automaton",
    "cardpath_predicate",
    "valsymbreak_automaton",
]

DEFAULT_MAX_BITS = 32

# Sink reached after reading the counter variable. Never a valid bitmask.
FINAL = "F"


def _bit_index(universe: Iterable[int], what: str, max_bits: int) -> dict[int, int]:
    uni = sorted(set(universe))
    if len(uni) > max_bits:
        raise ParameterTooLarge(what, len(uni), max_bits)
    return {v: 1 << i for i, v in enumerate(uni)}


def nvalue_automaton(universe: Iterable[int], n: int, max_bits: int = DEFAULT_MAX_BITS) -> Automaton:
    """Scans X_1..X_n then N; the state is the set of values used so far."""
    bit = _bit_index(universe, "k", max_bits)

    def step(layer, q, v):
        if layer < n:
            b = bit.get(v)
            return None if b is None else q | b
        return FINAL if q.bit_count() == v else None

    return Automaton(n + 1, 0, step, lambda q: q == FINAL, state_bound=1 << len(bit), name="nvalue")


def uses_automaton(y_universe: Iterable[int], m: int, n: int, max_bits: int = DEFAULT_MAX_BITS) -> Automaton:
    """Scans Y_1..Y_m collecting values, then X_1..X_n which must hit the collection."""
    bit = _bit_index(y_universe, "k", max_bits)

    def step(layer, q, v):
        b = bit.get(v)
        if b is None:
            return None
        if layer < m:
            return q | b
        return q if q & b else None

    return Automaton(m + n, 0, step, lambda q: True, state_bound=1 << len(bit), name="uses")


def cardpath_predicate(allowed) -> Callable[[tuple], bool]:
    if isinstance(allowed, str):
        return builtin_predicate(allowed)
    if callable(allowed):
        return allowed
    table = frozenset(tuple(t) for t in allowed)
    return lambda t: t in table


def cardpath_automaton(p: int, allowed, n: int, d: int | None = None) -> Automaton:
    """Scans X_1..X_n then N.

    A state is ``(window, count)``: the last ``min(layer, p - 1)`` values
    read and how many complete windows satisfied the predicate. ``d`` (max
    domain size) only feeds the per-layer state bound.
    """
    if p < 1 or n < p:
        raise UsageError(f"cardpath needs 1 <= p <= n, got p={p}, n={n}")
    pred = cardpath_predicate(allowed)
    keep = p - 1
    cache: dict[tuple, bool] = {}

    def holds(window):
        ok = cache.get(window)
        if ok is None:
            ok = cache[window] = bool(pred(window))
        return ok

    def step(layer, q, v):
        if layer == n:
            return FINAL if q[1] == v else None
        window, count = q
        if len(window) < keep:
            return (window + (v,), 0)
        full = window + (v,)
        return (full[1:], count + holds(full))

    bound = None
    if d is not None:
        bound = (n + 1) * d**keep + sum(d**w for w in range(keep))
    return Automaton(n + 1, ((), 0), step, lambda q: q == FINAL, state_bound=bound, name="cardpath")


def valsymbreak_automaton(
    sigmas: Sequence[Mapping[int, int]], n: int, universe: Iterable[int], max_bits: int = DEFAULT_MAX_BITS
) -> Automaton:
    """Scans X_1..X_n; the state is the set of symmetries already strictly broken.

    Reading v is rejected iff some unbroken sigma has sigma(v) < v. Otherwise
    every sigma with v < sigma(v) joins the broken set.
    """
    if len(sigmas) > max_bits:
        raise ParameterTooLarge("k", len(sigmas), max_bits)
    uni = sorted(set(universe))
    worse: dict[int, int] = {}
    better: dict[int, int] = {}
    for v in uni:
        w = b = 0
        for j, sigma in enumerate(sigmas):
            if v not in sigma:
                raise UsageError(f"symmetry #{j} is undefined on value {v}")
            image = sigma[v]
            if v > image:
                w |= 1 << j
            elif v < image:
                b |= 1 << j
        worse[v] = w
        better[v] = b

    def step(layer, q, v):
        w = worse.get(v)
        if w is None or w & ~q:
            return None
        return q | better[v]

    return Automaton(n, 0, step, lambda q: True, state_bound=1 << len(sigmas), name="valsymbreak")
