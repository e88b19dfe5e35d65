import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffcast.clifford import (
    CANONICAL_UNITARIES,
    Pulse,
    equal_up_to_phase,
    sequence_unitary,
)
from cliffcast.compiler import (
    SCHEME_COMPILED,
    SCHEME_FIVE,
    SCHEME_FIVE_SYMMETRIC,
    SCHEME_SEQUENTIAL,
    Schedule,
    compile_five_primitives,
    compile_optimal,
    compile_scheme,
    compile_sequential,
    mean_np_exact,
    mean_np_sampled,
    min_broadcast_pulses,
)
from oracles import brute_force_min_pulses

I2 = np.eye(2)


def assert_schedule_correct(schedule: Schedule, combo):
    """Every qubit's masked pulse stream must compose to its Clifford."""
    for q, c in enumerate(combo):
        u = sequence_unitary(schedule.masked_pulses(q))
        assert equal_up_to_phase(u, CANONICAL_UNITARIES[c - 1]), (combo, q)


def test_sequential_example():
    sched = compile_sequential((2, 13))
    assert sched.n_pulses == 4
    labels = [(e.pulse.label, e.mask) for e in sched.events]
    assert labels == [
        ("Y90", (True, False)),
        ("X90", (True, False)),
        ("Y90", (False, True)),
        ("X180", (False, True)),
    ]
    assert_schedule_correct(sched, (2, 13))


def test_sequential_identities_emit_nothing():
    sched = compile_sequential((1, 1))
    assert sched.n_pulses == 0
    assert sched.n_slots == 0


def test_five_primitives_identity_round():
    sched = compile_five_primitives((1,))
    assert sched.n_pulses == 0
    assert sched.n_slots == 5


def test_five_primitives_mask_example():
    sched = compile_five_primitives((18,))
    assert sched.n_slots == 5
    fired = [(e.slot, e.pulse.label) for e in sched.events]
    assert fired == [(0, "X90"), (1, "Y90"), (2, "X90")]
    assert_schedule_correct(sched, (18,))


def test_five_primitives_inverted_round():
    sched = compile_five_primitives((18,), round_parity=1)
    assert sched.n_slots == 5
    assert_schedule_correct(sched, (18,))


def test_symmetric_full_double_round_is_identity():
    normal = compile_five_primitives((21,), round_parity=0)
    inverted = compile_five_primitives((21,), round_parity=1)
    # all masks on for Clifford 21 in the normal round; firing both rounds
    # fully must cancel
    pulses = [e.pulse for e in normal.events] + [e.pulse for e in inverted.events]
    u = sequence_unitary(pulses)
    # the two rounds each implement C21; together they give C21 twice
    assert equal_up_to_phase(
        u, CANONICAL_UNITARIES[20] @ CANONICAL_UNITARIES[20]
    )


def test_compiled_pair_example_is_three_events():
    sched = compile_optimal((2, 13))
    assert sched.n_pulses == 3
    assert_schedule_correct(sched, (2, 13))


def test_compiled_identity_combos_are_empty():
    for n in (1, 2, 4):
        sched = compile_optimal((1,) * n)
        assert sched.n_pulses == 0


def test_compiled_equal_targets_share_everything():
    for c in range(2, 25):
        sched = compile_optimal((c, c))
        assert sched.n_pulses == min_broadcast_pulses((c,))
        for ev in sched.events:
            assert ev.mask == (True, True)
        assert_schedule_correct(sched, (c, c))


def test_compiled_correctness_random_combos():
    rng = np.random.default_rng(99)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        combo = tuple(int(c) for c in rng.integers(1, 25, size=n))
        sched = compile_optimal(combo)
        assert_schedule_correct(sched, combo)
        assert sched.n_pulses <= 5


def test_all_schemes_correct_random_combos():
    rng = np.random.default_rng(7)
    schemes = (SCHEME_SEQUENTIAL, SCHEME_FIVE, SCHEME_FIVE_SYMMETRIC, SCHEME_COMPILED)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        combo = tuple(int(c) for c in rng.integers(1, 25, size=n))
        for scheme in schemes:
            parity = int(rng.integers(0, 2))
            sched = compile_scheme(combo, scheme, round_parity=parity)
            assert_schedule_correct(sched, combo)


def test_compiled_matches_brute_force_on_pairs():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        combo = tuple(int(c) for c in rng.integers(1, 25, size=2))
        assert compile_optimal(combo).n_pulses == brute_force_min_pulses(combo), combo


def test_compiled_never_beaten_by_other_schemes():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        combo = tuple(int(c) for c in rng.integers(1, 25, size=n))
        n_opt = compile_optimal(combo).n_pulses
        assert n_opt <= compile_sequential(combo).n_pulses
        assert n_opt <= 5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 24), min_size=2, max_size=5), st.randoms())
def test_subset_monotonicity(combo, rnd):
    """Dropping a qubit can never increase the minimum pulse count."""
    full = min_broadcast_pulses(combo)
    drop = rnd.randrange(len(combo))
    sub = combo[:drop] + combo[drop + 1:]
    assert min_broadcast_pulses(sub) <= full if sub else True


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 24), min_size=1, max_size=5), st.randoms())
def test_permutation_invariance(combo, rnd):
    shuffled = list(combo)
    rnd.shuffle(shuffled)
    assert min_broadcast_pulses(combo) == min_broadcast_pulses(shuffled)


def test_mean_np_exact_small_n():
    assert mean_np_exact(1).mean_np == pytest.approx(1.875, abs=1e-12)
    assert mean_np_exact(2).mean_np == pytest.approx(2.925347, abs=5e-7)
    assert mean_np_exact(3).mean_np == pytest.approx(3.521050, abs=5e-7)


def test_mean_np_exact_rejects_large_n():
    with pytest.raises(ValueError):
        mean_np_exact(6)


def test_mean_np_exact_deterministic():
    a = mean_np_exact(2)
    b = mean_np_exact(2)
    assert a.mean_np == b.mean_np
    assert a.stderr == 0.0
    assert a.mode == "exact"


def test_mean_np_sampled_matches_exact_at_n1():
    stats = mean_np_sampled(1, 20_000, seed=3)
    assert abs(stats.mean_np - 1.875) <= 3 * stats.stderr
    assert stats.mode == "sampled"


def test_mean_np_sampled_deterministic():
    a = mean_np_sampled(4, 5_000, seed=11)
    b = mean_np_sampled(4, 5_000, seed=11)
    assert a.mean_np == b.mean_np and a.stderr == b.stderr


def test_mean_np_sampled_guards():
    with pytest.raises(ValueError):
        mean_np_sampled(2, 10, seed=0)


def test_np_stats_bounds():
    for n in (1, 2, 3):
        st_ = mean_np_exact(n)
        assert 1.0 <= st_.mean_np <= 5.0


def test_schedule_json_roundtrip():
    sched = compile_optimal((2, 13, 5))
    d = json.loads(sched.to_json())
    assert d["n_qubits"] == 3
    assert d["scheme"] == "compiled"
    assert d["slot_ns"] == {"total": 20.0, "pulse_ns": 16.0, "buffer_ns": 4.0}
    for ev in d["events"]:
        assert set(ev) == {"slot", "pulse", "mask"}
        assert len(ev["mask"]) == 3
    back = Schedule.from_json_dict(d)
    assert back.n_qubits == sched.n_qubits
    assert back.events == sched.events
    assert back.n_slots == sched.n_slots


def test_event_requires_nonempty_mask():
    from cliffcast.compiler import PulseEvent

    with pytest.raises(ValueError):
        PulseEvent(slot=0, pulse=Pulse.X90, mask=(False, False))


def test_slot_indices_strictly_increasing():
    rng = np.random.default_rng(21)
    for _ in range(50):
        combo = tuple(int(c) for c in rng.integers(1, 25, size=3))
        for scheme in (SCHEME_SEQUENTIAL, SCHEME_FIVE, SCHEME_COMPILED):
            sched = compile_scheme(combo, scheme)
            slots = [e.slot for e in sched.events]
            assert slots == sorted(set(slots))
            assert all(0 <= s < sched.n_slots for s in slots)
