"""Independent reference implementations used only by the tests.

brute_force_min_pulses implements the exhaustive merge search directly:
every per-qubit decomposition choice is merged over every pulse
interleaving (a pulse emitted for one qubit advances every qubit whose next
pulse matches).  None of the production shortcuts (coverage tiers, bounds,
phase splits, canonicalization) are used, so it is a genuinely independent
check of the optimal compiler, feasible for one or two qubits.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from cliffcast.clifford import compose, pulse_clifford_map
from cliffcast.decomp import enumerate_decompositions


@lru_cache(maxsize=None)
def _merge_min(suffixes: tuple) -> int:
    """Fewest events completing all suffixes (tuples of Clifford ids of the
    remaining pulses); emitting a front pulse advances every matching qubit."""
    fronts = {s[0] for s in suffixes if s}
    if not fronts:
        return 0
    best = 99
    for p in fronts:
        advanced = tuple(
            sorted(s[1:] if (s and s[0] == p) else s for s in suffixes)
        )
        best = min(best, 1 + _merge_min(advanced))
    return best


def brute_force_min_pulses(combo) -> int:
    """Exhaustive minimum event count over all decomposition choices and
    interleavings; identity qubits contribute an empty pulse sequence."""
    cmap = pulse_clifford_map()
    per_qubit = []
    for c in combo:
        if c == 1:
            continue
        decs = [
            tuple(cmap[p] for p in d.pulses)
            for d in enumerate_decompositions(c)
            if d.pulses
        ]
        per_qubit.append(decs)
    if not per_qubit:
        return 0
    best = 99
    for choice in itertools.product(*per_qubit):
        longest = max(len(d) for d in choice)
        if longest >= best:
            continue
        best = min(best, _merge_min(tuple(sorted(choice))))
    return best


def iterate_rate_equation(m: int, kappa: float, t21: float, np_mean: float,
                          tp: float) -> float:
    """m-fold iteration of the leakage balance from zero population."""
    p2 = 0.0
    dt = tp * np_mean
    for _ in range(m):
        p2 = p2 + dt * kappa - (dt / t21) * p2
    return p2
