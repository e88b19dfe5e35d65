"""Broadcast compilation of simultaneous single-qubit Cliffords.

A schedule is an ordered list of pulse events.  Each event carries one
basis pulse and a per-qubit routing mask; a pulse is applied to every qubit
whose mask bit is on, so independent Cliffords are realized by firing, for
each qubit, a subsequence of the shared pulse stream.  Distinct pulses can
never share a time slot.

Schemes
-------
sequential
    Each qubit's minimal decomposition in turn, one qubit per event.
five-primitives / five-primitives-symmetric
    A fixed five-slot round; each Clifford fires a subset of the slots.
    The symmetric variant alternates the normal round with its mirrored
    round on odd parities, which cancels most of the net drive seen by
    undriven qubits.
compiled
    The provably minimum number of events over all decomposition choices
    and pulse interleavings.

Optimal search
--------------
The optimum is computed against precomputed coverage tiers.  For every
pulse sequence s of length N (1..4 over the six-rotation basis) the set of
Cliffords realizable as a subsequence product of s is reduced to a bitmask;
per length the masks are pruned to the dominance-maximal ones.  A Clifford
combination then costs the smallest N whose tier contains a superset of its
target set, and 5 otherwise, since a five-primitive round always realizes
any combination, capping the search.  Probing tiers in ascending length
tries short decompositions first and stops at the first hit; the length-4
tier plays the role of a separate final pass for combinations that need a
four-pulse sequence.  Costs are permutation invariant and monotone under
taking sub-combinations (both verified as properties), so the exact census
enumerates only sorted combinations, weighting each by its permutation
multiplicity, and memoizes by target set.

Identity accounting
-------------------
An identity Clifford fires no pulses: its mask stays off during other
qubits' events.  Compiled schedules therefore emit nothing for identity
targets, and the all-identity combination compiles to an empty schedule.
The pulse-count census, however, charges one slot for a round in which
nothing fires at all (the lone I "pulse"), so an all-identity combination
is counted as one slot; this matches the single-qubit average of 1.875
pulses per Clifford with the identity row costing one pulse.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clifford import (
    FIVE_PRIMITIVES,
    FIVE_PRIMITIVES_INVERTED,
    Pulse,
    five_primitive_mask,
    minimal_decomposition,
    pulse_clifford_map,
)
from .decomp import SEARCH_BASIS
from .clifford import _COMPOSE_TABLE  # int8 composition table, ids 1..24

SCHEME_SEQUENTIAL = "sequential"
SCHEME_FIVE = "five-primitives"
SCHEME_FIVE_SYMMETRIC = "five-primitives-symmetric"
SCHEME_COMPILED = "compiled"

SCHEMES = (SCHEME_SEQUENTIAL, SCHEME_FIVE, SCHEME_FIVE_SYMMETRIC, SCHEME_COMPILED)

SLOT_NS = 20.0
PULSE_NS = 16.0
BUFFER_NS = 4.0

FIVE_PRIMITIVES_BOUND = 5


@dataclass(frozen=True)
class PulseEvent:
    slot: int
    pulse: Pulse
    mask: tuple[bool, ...]

    def __post_init__(self):
        if not any(self.mask):
            raise ValueError("pulse event must be routed to at least one qubit")


@dataclass
class Schedule:
    n_qubits: int
    scheme: str
    events: list[PulseEvent]
    n_slots: int

    @property
    def n_pulses(self) -> int:
        return len(self.events)

    def masked_pulses(self, qubit: int) -> list[Pulse]:
        """Pulses routed to the given qubit, in slot order."""
        return [ev.pulse for ev in self.events if ev.mask[qubit]]

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "scheme": self.scheme,
            "n_slots": self.n_slots,
            "slot_ns": {"total": SLOT_NS, "pulse_ns": PULSE_NS, "buffer_ns": BUFFER_NS},
            "events": [
                {
                    "slot": ev.slot,
                    "pulse": ev.pulse.label,
                    "mask": [int(b) for b in ev.mask],
                }
                for ev in self.events
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, d: dict) -> "Schedule":
        events = [
            PulseEvent(
                slot=int(ev["slot"]),
                pulse=Pulse.from_label(ev["pulse"]),
                mask=tuple(bool(b) for b in ev["mask"]),
            )
            for ev in d["events"]
        ]
        return cls(
            n_qubits=int(d["n_qubits"]),
            scheme=str(d["scheme"]),
            events=events,
            n_slots=int(d["n_slots"]),
        )


@dataclass(frozen=True)
class NpStats:
    n: int
    mean_np: float
    stderr: float
    mode: str  # "exact" | "sampled"
    samples: int


def _check_combo(combo) -> tuple[int, ...]:
    combo = tuple(int(c) for c in combo)
    if not combo:
        raise ValueError("combo must contain at least one Clifford id")
    for c in combo:
        if not 1 <= c <= 24:
            raise ValueError(f"Clifford id must be in 1..24, got {c}")
    return combo


def compile_sequential(combo) -> Schedule:
    """One qubit after another, each via its minimal decomposition.

    Identity Cliffords emit no events (nothing is broadcast for them).
    """
    combo = _check_combo(combo)
    n = len(combo)
    events = []
    slot = 0
    for q, c in enumerate(combo):
        if c == 1:
            continue
        for p in minimal_decomposition(c):
            mask = tuple(i == q for i in range(n))
            events.append(PulseEvent(slot=slot, pulse=p, mask=mask))
            slot += 1
    return Schedule(n_qubits=n, scheme=SCHEME_SEQUENTIAL, events=events, n_slots=slot)


def compile_five_primitives(combo, round_parity: int = 0) -> Schedule:
    """One fixed five-slot round; each qubit fires its subset.

    round_parity selects the normal (0) or mirrored (1) primitive list, the
    alternation used by the symmetric scheme.  Slots nobody fires emit no
    event but still occupy the round's fixed five-slot footprint.
    """
    combo = _check_combo(combo)
    if round_parity not in (0, 1):
        raise ValueError("round_parity must be 0 or 1")
    inverted = bool(round_parity)
    primitives = FIVE_PRIMITIVES_INVERTED if inverted else FIVE_PRIMITIVES
    masks = [five_primitive_mask(c, inverted=inverted) for c in combo]
    scheme = SCHEME_FIVE_SYMMETRIC if inverted else SCHEME_FIVE
    events = []
    for slot in range(5):
        mask = tuple(bool(m[slot]) for m in masks)
        if any(mask):
            events.append(PulseEvent(slot=slot, pulse=primitives[slot], mask=mask))
    return Schedule(n_qubits=len(combo), scheme=scheme, events=events, n_slots=5)


# --- coverage tiers for the optimal search -------------------------------


@lru_cache(maxsize=1)
def _coverage_tables():
    """Per length N in 1..4: the list of basis-index sequences together with
    their subsequence-coverage bitmasks, plus the dominance-pruned mask set
    used for fast cost queries.  Bit (c-1) marks non-identity Clifford c."""
    basis_cliffords = [pulse_clifford_map()[p] for p in SEARCH_BASIS]
    compose = _COMPOSE_TABLE
    seqs: dict[int, list[tuple[int, ...]]] = {}
    masks: dict[int, np.ndarray] = {}
    pruned: dict[int, np.ndarray] = {}
    for n in range(1, 5):
        subsets = [[k for k in range(n) if m >> k & 1] for m in range(1, 1 << n)]
        seq_list = []
        mask_list = []
        for seq in itertools.product(range(len(SEARCH_BASIS)), repeat=n):
            bm = 0
            for idxs in subsets:
                c = 1
                for k in idxs:
                    c = int(compose[c, basis_cliffords[seq[k]]])
                if c != 1:
                    bm |= 1 << (c - 1)
            seq_list.append(seq)
            mask_list.append(bm)
        seqs[n] = seq_list
        masks[n] = np.array(mask_list, dtype=np.int64)
        keep: list[int] = []
        for bm in sorted(set(mask_list), key=lambda b: -bin(b).count("1")):
            if not any((bm & k) == bm for k in keep):
                keep.append(bm)
        pruned[n] = np.array(keep, dtype=np.int64)
    return seqs, masks, pruned


def _target_mask(combo) -> int:
    mask = 0
    for c in combo:
        if c != 1:
            mask |= 1 << (c - 1)
    return mask


def _min_pulses_for_mask(mask: int) -> int:
    """Smallest broadcast length realizing every Clifford in the mask."""
    if mask == 0:
        return 0
    _, _, pruned = _coverage_tables()
    for n in range(1, 5):
        tier = pruned[n]
        if bool(np.any((tier & mask) == mask)):
            return n
    return FIVE_PRIMITIVES_BOUND


def min_broadcast_pulses(combo) -> int:
    """Minimum number of emitted pulse events for the combination.

    Identity targets fire nothing and cost nothing here; see mean_np_exact
    for the census accounting of the all-identity round.
    """
    return _min_pulses_for_mask(_target_mask(_check_combo(combo)))


def _first_subsequence(seq_cliffords: list[int], target: int) -> tuple[int, ...]:
    """First index subset (binary counting, bit k = position k) whose ordered
    product is the target Clifford."""
    n = len(seq_cliffords)
    compose = _COMPOSE_TABLE
    for code in range(1, 1 << n):
        c = 1
        for k in range(n):
            if code >> k & 1:
                c = int(compose[c, seq_cliffords[k]])
        if c == target:
            return tuple(k for k in range(n) if code >> k & 1)
    raise RuntimeError("covering sequence lost the target; tier tables corrupt")


def compile_optimal(combo) -> Schedule:
    """Minimum-length broadcast schedule for one Clifford per qubit.

    Ties are broken deterministically: the lexicographically first covering
    pulse sequence wins, and each qubit fires the first matching subsequence
    in binary counting order.  Combinations that cannot be realized in four
    pulses fall back to the five-primitive round, which is then optimal.
    """
    combo = _check_combo(combo)
    n_qubits = len(combo)
    mask = _target_mask(combo)
    if mask == 0:
        return Schedule(n_qubits=n_qubits, scheme=SCHEME_COMPILED, events=[], n_slots=0)
    n_pulses = _min_pulses_for_mask(mask)
    if n_pulses >= FIVE_PRIMITIVES_BOUND:
        sched = compile_five_primitives(combo, round_parity=0)
        return Schedule(
            n_qubits=n_qubits,
            scheme=SCHEME_COMPILED,
            events=sched.events,
            n_slots=sched.n_slots,
        )
    seqs, masks, _ = _coverage_tables()
    seq = None
    for s, bm in zip(seqs[n_pulses], masks[n_pulses]):
        if (bm & mask) == mask:
            seq = s
            break
    if seq is None:
        raise RuntimeError("tier promised coverage but no sequence found")
    basis_cliffords = [pulse_clifford_map()[p] for p in SEARCH_BASIS]
    seq_cliffords = [basis_cliffords[i] for i in seq]
    fire: list[tuple[int, ...]] = []
    for c in combo:
        fire.append(() if c == 1 else _first_subsequence(seq_cliffords, c))
    events = []
    for slot in range(n_pulses):
        ev_mask = tuple(slot in fire[q] for q in range(n_qubits))
        if any(ev_mask):
            events.append(
                PulseEvent(slot=slot, pulse=SEARCH_BASIS[seq[slot]], mask=ev_mask)
            )
    return Schedule(
        n_qubits=n_qubits, scheme=SCHEME_COMPILED, events=events, n_slots=n_pulses
    )


def compile_scheme(combo, scheme: str, round_parity: int = 0) -> Schedule:
    if scheme == SCHEME_SEQUENTIAL:
        return compile_sequential(combo)
    if scheme == SCHEME_FIVE:
        return compile_five_primitives(combo, round_parity=0)
    if scheme == SCHEME_FIVE_SYMMETRIC:
        return compile_five_primitives(combo, round_parity=round_parity % 2)
    if scheme == SCHEME_COMPILED:
        return compile_optimal(combo)
    raise ValueError(f"unknown scheme {scheme!r}")


# --- pulse-count census ---------------------------------------------------


def _census_cost(mask: int, has_identity: bool, memo: dict[int, int]) -> int:
    cost = memo.get(mask)
    if cost is None:
        cost = memo[mask] = _min_pulses_for_mask(mask)
    if has_identity and cost == 0:
        return 1
    return cost


def mean_np_exact(n: int) -> NpStats:
    """Exact mean pulses per n-qubit Clifford combination over all 24^n.

    Enumerates sorted combinations only and weights each by its permutation
    multiplicity (the cost is permutation invariant); the accumulation is
    exact integer arithmetic, so repeated runs agree bit for bit.
    """
    if not 1 <= n <= 5:
        raise ValueError(
            "exact census supported for 1 <= n <= 5 (24^n combinations); "
            "use mean_np_sampled beyond that"
        )
    memo: dict[int, int] = {}
    total = 0
    count = 0
    for combo in itertools.combinations_with_replacement(range(1, 25), n):
        mult = math.factorial(n)
        for _, group in itertools.groupby(combo):
            mult //= math.factorial(sum(1 for _ in group))
        cost = _census_cost(_target_mask(combo), combo[0] == 1, memo)
        total += mult * cost
        count += mult
    assert count == 24**n
    return NpStats(n=n, mean_np=total / count, stderr=0.0, mode="exact", samples=count)


def mean_np_sampled(n: int, samples: int, seed: int) -> NpStats:
    """Monte-Carlo mean pulses per combination from uniform i.i.d. draws.

    Deterministic for a given seed (counter-based Philox generator).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    draws = rng.integers(1, 25, size=(samples, n))
    memo: dict[int, int] = {}
    costs = np.empty(samples, dtype=np.float64)
    for i in range(samples):
        row = draws[i]
        costs[i] = _census_cost(_target_mask(row), bool(np.any(row == 1)), memo)
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / math.sqrt(samples))
    return NpStats(n=n, mean_np=mean, stderr=stderr, mode="sampled", samples=samples)
