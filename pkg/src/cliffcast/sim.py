"""Density-matrix simulation of broadcast-driven qubits.

Model: uncoupled two-level qubits, instantaneous unitary pulses, and
amplitude damping (T1 only) for one fixed slot duration after every slot.
Dephasing is deliberately not modeled: long random x/y pulse sequences
dynamically decouple it, and a plain dephasing term does not reproduce the
observed decay curves.  When a pulse event fires, masked qubits receive the
nominal rotation scaled by their over-driving ratio, and every unmasked
qubit receives the same rotation axis scaled by its cross-driving ratio
(stray drive through imperfect isolation).  Slots in which nothing fires
(identity slots, empty five-primitive slots) pass time only.

Randomness: one counter-based Philox generator per seed, spawned from the
root seed via SeedSequence, so seeds are independent and reproducible and
could be evaluated concurrently; averaging accumulates in seed order to
keep results bit-identical run to run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import compiler
from .clifford import Pulse, minimal_decomposition, recovery_clifford
from .compiler import (
    SCHEME_COMPILED,
    SCHEME_FIVE,
    SCHEME_FIVE_SYMMETRIC,
    SCHEME_SEQUENTIAL,
    Schedule,
)

SCHEME_MINIMAL = "minimal"

RB_SCHEMES = (
    SCHEME_MINIMAL,
    SCHEME_SEQUENTIAL,
    SCHEME_FIVE,
    SCHEME_FIVE_SYMMETRIC,
    SCHEME_COMPILED,
)

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)

GROUND = np.array([[1, 0], [0, 0]], dtype=complex)
EXCITED = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class QubitModel:
    """Simulation parameters for one qubit.

    t1_ns may be math.inf for a lossless qubit.  cross_ratio is the rotation
    fraction felt when unmasked; over_ratio scales every masked rotation.
    """

    t1_ns: float = math.inf
    slot_ns: float = compiler.SLOT_NS
    cross_ratio: float = 0.0
    over_ratio: float = 1.0

    def __post_init__(self):
        if not self.t1_ns > 0:
            raise ValueError("t1_ns must be positive (math.inf allowed)")
        if not self.slot_ns > 0:
            raise ValueError("slot_ns must be positive")
        if not 0.0 <= self.cross_ratio < 1.0:
            raise ValueError("cross_ratio must be in [0, 1)")
        if self.over_ratio < 0:
            raise ValueError("over_ratio must be >= 0")


@dataclass
class RBCurve:
    m_values: tuple[int, ...]
    p0: np.ndarray
    p1: np.ndarray
    seeds: int
    p0_stderr: np.ndarray | None = None  # seed-scatter standard error per point


@dataclass
class RBResult:
    scheme: str
    curves: list[RBCurve]
    mean_slots_per_round: float
    n_seeds: int
    rng_seed: int


def _axis_unitary(azimuth: float, angle: float) -> np.ndarray:
    """Rotation by angle about the equatorial axis at the given azimuth
    (0 = x, pi/2 = y)."""
    sigma = math.cos(azimuth) * _SX + math.sin(azimuth) * _SY
    return math.cos(angle / 2) * _I2 - 1j * math.sin(angle / 2) * sigma


_AZIMUTH = {"x": 0.0, "y": math.pi / 2}


def apply_pulse(state: np.ndarray, p: Pulse, angle_scale: float = 1.0,
                phase_rad: float = 0.0) -> np.ndarray:
    """Conjugate the state by the pulse rotation with a scaled angle.

    phase_rad offsets the rotation axis within the equatorial plane (drive
    phase error).  Identity pulses and zero scales leave the state alone.
    """
    if p is Pulse.I or angle_scale == 0.0:
        return state.copy()
    if angle_scale < 0:
        raise ValueError("angle_scale must be >= 0")
    u = _axis_unitary(_AZIMUTH[p.axis] + phase_rad, p.angle * angle_scale)
    return u @ state @ u.conj().T


def relax(state: np.ndarray, dt: float, t1: float) -> np.ndarray:
    """Amplitude damping for duration dt with relaxation time t1.

    Exact Kraus channel: excited population decays by exp(-dt/t1),
    coherences by exp(-dt/2 t1).
    """
    if dt < 0:
        raise ValueError("dt must be >= 0")
    if dt == 0 or math.isinf(t1):
        return state.copy()
    decay = math.exp(-dt / t1)
    eta = math.sqrt(decay)
    out = np.empty_like(state)
    out[0, 0] = state[0, 0] + (1.0 - decay) * state[1, 1]
    out[1, 1] = decay * state[1, 1]
    out[0, 1] = eta * state[0, 1]
    out[1, 0] = eta * state[1, 0]
    return out


# --- slot programs --------------------------------------------------------
# A slot program is a list with one entry per time slot: None for an empty
# slot, else (pulse, mask) with mask a tuple of bools per qubit.


def _schedule_slots(sched: Schedule) -> tuple:
    slots: list = [None] * sched.n_slots
    for ev in sched.events:
        slots[ev.slot] = (ev.pulse, ev.mask)
    return tuple(slots)


def _minimal_round_slots(c: int) -> tuple:
    """Single-qubit minimal-set round: the identity Clifford occupies one
    empty slot (its I pulse), other Cliffords one slot per pulse."""
    if c == 1:
        return (None,)
    return tuple((p, (True,)) for p in minimal_decomposition(c))


@lru_cache(maxsize=200_000)
def _round_slots_cached(combo: tuple, scheme: str, parity: int) -> tuple:
    if scheme == SCHEME_MINIMAL:
        if len(combo) != 1:
            raise ValueError("minimal scheme is single-qubit")
        return _minimal_round_slots(combo[0])
    sched = compiler.compile_scheme(combo, scheme, round_parity=parity)
    return _schedule_slots(sched)


def _round_slots(combo, scheme: str, round_index: int) -> tuple:
    return _round_slots_cached(tuple(combo), scheme, round_index % 2)


def _simulate_slots(slots, models, states):
    for entry in slots:
        if entry is not None:
            pulse, mask = entry
            for q, model in enumerate(models):
                scale = model.over_ratio if mask[q] else model.cross_ratio
                if scale != 0.0:
                    states[q] = apply_pulse(states[q], pulse, scale)
        for q, model in enumerate(models):
            states[q] = relax(states[q], model.slot_ns, model.t1_ns)
    return states


def _spawn_rngs(rng_seed: int, n_seeds: int):
    children = np.random.SeedSequence(rng_seed).spawn(n_seeds)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _seed_stderr(total: np.ndarray, total_sq: np.ndarray, n_seeds: int) -> np.ndarray:
    """Standard error of the seed mean from running sums."""
    if n_seeds < 2:
        return np.zeros_like(total)
    var = (total_sq - total**2 / n_seeds) / (n_seeds - 1)
    return np.sqrt(np.maximum(var, 0.0) / n_seeds)


def run_rb(models, scheme: str, m_values, n_seeds: int, rng_seed: int) -> RBResult:
    """Randomized benchmarking with per-qubit independent Clifford sequences.

    For every seed and sequence length m, each qubit gets m uniform Cliffords
    plus its own recovery Clifford; rounds are compiled with the chosen
    scheme (the symmetric five-primitive scheme alternates parity with the
    round index) and simulated slot by slot.  Returns seed-averaged ground
    and excited populations per qubit.
    """
    models = list(models)
    n = len(models)
    if scheme not in RB_SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if scheme == SCHEME_MINIMAL and n != 1:
        raise ValueError("minimal scheme runs single-qubit benchmarking only")
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    m_values = tuple(int(m) for m in m_values)
    if any(m < 1 for m in m_values):
        raise ValueError("sequence lengths must be >= 1")

    p0_sum = np.zeros((n, len(m_values)))
    p0_sumsq = np.zeros((n, len(m_values)))
    slot_count = 0
    round_count = 0
    for rng in _spawn_rngs(rng_seed, n_seeds):
        for im, m in enumerate(m_values):
            seqs = rng.integers(1, 25, size=(n, m))
            combos = [tuple(int(seqs[q, k]) for q in range(n)) for k in range(m)]
            combos.append(tuple(recovery_clifford(seqs[q]) for q in range(n)))
            states = [GROUND.copy() for _ in range(n)]
            for k, combo in enumerate(combos):
                slots = _round_slots(combo, scheme, k)
                _simulate_slots(slots, models, states)
                slot_count += len(slots)
                round_count += 1
            for q in range(n):
                val = states[q][0, 0].real
                p0_sum[q, im] += val
                p0_sumsq[q, im] += val * val
    p0 = p0_sum / n_seeds
    p0_err = _seed_stderr(p0_sum, p0_sumsq, n_seeds)
    curves = [
        RBCurve(m_values=m_values, p0=p0[q].copy(), p1=1.0 - p0[q], seeds=n_seeds,
                p0_stderr=p0_err[q].copy())
        for q in range(n)
    ]
    return RBResult(
        scheme=scheme,
        curves=curves,
        mean_slots_per_round=slot_count / round_count,
        n_seeds=n_seeds,
        rng_seed=rng_seed,
    )


def run_idle_crossdrive(models, scheme: str, m_values, n_seeds: int,
                        rng_seed: int) -> RBResult:
    """Cross-driving of an undriven qubit during single-qubit benchmarking.

    models = (driven, idle).  The driven qubit runs the scheme with its own
    random sequences; the idle qubit's routing stays off, so it only feels
    each emitted pulse scaled by its cross_ratio.  Curve 0 is the driven
    qubit, curve 1 the idle one.
    """
    models = list(models)
    if len(models) != 2:
        raise ValueError("expected exactly (driven, idle) models")
    if scheme not in RB_SCHEMES or scheme in (SCHEME_SEQUENTIAL, SCHEME_COMPILED):
        raise ValueError(
            "idle cross-drive runs use the minimal or five-primitive schemes"
        )
    m_values = tuple(int(m) for m in m_values)
    p0_sum = np.zeros((2, len(m_values)))
    p0_sumsq = np.zeros((2, len(m_values)))
    slot_count = 0
    round_count = 0
    for rng in _spawn_rngs(rng_seed, n_seeds):
        for im, m in enumerate(m_values):
            seq = rng.integers(1, 25, size=m)
            cliffords = [int(c) for c in seq] + [recovery_clifford(seq)]
            states = [GROUND.copy(), GROUND.copy()]
            for k, c in enumerate(cliffords):
                slots = _round_slots((c,), scheme, k)
                widened = [
                    None if s is None else (s[0], (s[1][0], False)) for s in slots
                ]
                _simulate_slots(widened, models, states)
                slot_count += len(slots)
                round_count += 1
            for q in range(2):
                val = states[q][0, 0].real
                p0_sum[q, im] += val
                p0_sumsq[q, im] += val * val
    p0 = p0_sum / n_seeds
    p0_err = _seed_stderr(p0_sum, p0_sumsq, n_seeds)
    curves = [
        RBCurve(m_values=m_values, p0=p0[q].copy(), p1=1.0 - p0[q], seeds=n_seeds,
                p0_stderr=p0_err[q].copy())
        for q in range(2)
    ]
    return RBResult(
        scheme=scheme,
        curves=curves,
        mean_slots_per_round=slot_count / round_count,
        n_seeds=n_seeds,
        rng_seed=rng_seed,
    )


# --- diagnostic sequences -------------------------------------------------

# The 21 two-pulse diagnostic pairs with their ideal excited-state
# populations (a 0 / 0.5 / 1 staircase on an ideally tuned qubit).
ALLXY_SEQUENCE: tuple[tuple[Pulse, Pulse, float], ...] = (
    (Pulse.I, Pulse.I, 0.0),
    (Pulse.X180, Pulse.X180, 0.0),
    (Pulse.Y180, Pulse.Y180, 0.0),
    (Pulse.X180, Pulse.Y180, 0.0),
    (Pulse.Y180, Pulse.X180, 0.0),
    (Pulse.I, Pulse.X90, 0.5),
    (Pulse.I, Pulse.Y90, 0.5),
    (Pulse.X90, Pulse.Y90, 0.5),
    (Pulse.Y90, Pulse.X90, 0.5),
    (Pulse.X90, Pulse.Y180, 0.5),
    (Pulse.Y90, Pulse.X180, 0.5),
    (Pulse.Y180, Pulse.Y90, 0.5),
    (Pulse.X180, Pulse.X90, 0.5),
    (Pulse.X90, Pulse.X180, 0.5),
    (Pulse.X180, Pulse.X90, 0.5),
    (Pulse.Y90, Pulse.Y180, 0.5),
    (Pulse.Y180, Pulse.Y90, 0.5),
    (Pulse.I, Pulse.X180, 1.0),
    (Pulse.I, Pulse.Y180, 1.0),
    (Pulse.X90, Pulse.X90, 1.0),
    (Pulse.Y90, Pulse.Y90, 1.0),
)


def simulate_allxy(over_ratio: float = 1.0, phase_rad: float = 0.0,
                   t1_ns: float = math.inf,
                   slot_ns: float = compiler.SLOT_NS) -> np.ndarray:
    """Excited-state population after each of the 21 two-pulse pairs.

    over_ratio scales every non-identity rotation angle (amplitude error);
    phase_rad offsets the axis of y pulses (drive phase error).
    """
    out = np.empty(len(ALLXY_SEQUENCE))
    for i, (first, second, _) in enumerate(ALLXY_SEQUENCE):
        state = GROUND.copy()
        for p in (first, second):
            phase = phase_rad if p.axis == "y" else 0.0
            scale = over_ratio if p is not Pulse.I else 1.0
            state = apply_pulse(state, p, scale, phase)
            state = relax(state, slot_ns, t1_ns)
        out[i] = state[1, 1].real
    return out


def allxy_ideal() -> np.ndarray:
    return np.array([ideal for _, _, ideal in ALLXY_SEQUENCE])


def simulate_amp_calibration(over_ratio: float, n_max: int = 49,
                             t1_ns: float = math.inf,
                             slot_ns: float = compiler.SLOT_NS) -> tuple[np.ndarray, np.ndarray]:
    """P1 versus N for the half-pulse-then-2N-pi-pulses amplitude check.

    The qubit starts in the ground state, gets one X90 and then 2N X180
    pulses, all scaled by over_ratio.  On an ideally driven qubit P1 stays
    at one half for every N; over-driving tilts the initial slope positive,
    under-driving negative.
    """
    if over_ratio <= 0:
        raise ValueError("over_ratio must be > 0")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n_values = np.arange(n_max + 1)
    p1 = np.empty(n_max + 1)
    for n in n_values:
        state = GROUND.copy()
        state = apply_pulse(state, Pulse.X90, over_ratio)
        state = relax(state, slot_ns, t1_ns)
        for _ in range(2 * int(n)):
            state = apply_pulse(state, Pulse.X180, over_ratio)
            state = relax(state, slot_ns, t1_ns)
        p1[n] = state[1, 1].real
    return n_values, p1


def initial_slope(p1: np.ndarray) -> float:
    return float(p1[1] - p1[0])


# --- two-qubit exchange ---------------------------------------------------


@dataclass(frozen=True)
class ExchangeParams:
    """Residual exchange coupling between two qubits.

    j_over_2pi_khz is the coupling J/2pi in kHz; t1 values in ns
    (math.inf allowed).
    """

    j_over_2pi_khz: float
    t1_a_ns: float = math.inf
    t1_b_ns: float = math.inf

    def __post_init__(self):
        if self.j_over_2pi_khz < 0:
            raise ValueError("coupling must be >= 0")
        if not (self.t1_a_ns > 0 and self.t1_b_ns > 0):
            raise ValueError("t1 values must be positive")

    @property
    def j_rad_per_ns(self) -> float:
        return 2 * math.pi * self.j_over_2pi_khz * 1e3 * 1e-9

    @property
    def swap_return_ns(self) -> float:
        """Time pi/J after which the initial excitation returns."""
        return math.pi / self.j_rad_per_ns


def _damp_ops(dt: float, t1: float) -> tuple[np.ndarray, np.ndarray] | None:
    if math.isinf(t1):
        return None
    gamma = 1.0 - math.exp(-dt / t1)
    k0 = np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
    return k0, k1


def exchange_swap(params: ExchangeParams, t_grid_ns, dt_ns: float = 1.0):
    """Excitation swapping between two coupled qubits, starting from
    (excited, ground).

    The flip-flop coupling J(sigma+ sigma- + sigma- sigma+) is integrated
    exactly on the single-excitation block in steps of at most dt_ns, with
    independent amplitude damping per qubit interleaved (Trotterized).
    Returns (t_grid_ns, p1_a, p1_b).
    """
    if dt_ns <= 0 or dt_ns > 1.0:
        raise ValueError("dt_ns must be in (0, 1] for an accurate split")
    t_grid = np.asarray(sorted(float(t) for t in t_grid_ns))
    if t_grid.size == 0 or t_grid[0] < 0:
        raise ValueError("t_grid_ns must be non-empty and non-negative")

    j = params.j_rad_per_ns
    c, s = math.cos(j * dt_ns), math.sin(j * dt_ns)
    u = np.eye(4, dtype=complex)
    u[1, 1] = c
    u[2, 2] = c
    u[1, 2] = -1j * s
    u[2, 1] = -1j * s

    damp_a = _damp_ops(dt_ns, params.t1_a_ns)
    damp_b = _damp_ops(dt_ns, params.t1_b_ns)
    kraus_a = None if damp_a is None else [np.kron(k, _I2) for k in damp_a]
    kraus_b = None if damp_b is None else [np.kron(_I2, k) for k in damp_b]

    rho = np.zeros((4, 4), dtype=complex)
    rho[2, 2] = 1.0  # |1>_a |0>_b

    p1_a = np.empty(t_grid.size)
    p1_b = np.empty(t_grid.size)
    t_now = 0.0
    idx = 0
    while idx < t_grid.size:
        while t_now + dt_ns / 2 < t_grid[idx]:
            rho = u @ rho @ u.conj().T
            for ops in (kraus_a, kraus_b):
                if ops is not None:
                    rho = sum(k @ rho @ k.conj().T for k in ops)
            t_now += dt_ns
        p1_a[idx] = (rho[2, 2] + rho[3, 3]).real
        p1_b[idx] = (rho[1, 1] + rho[3, 3]).real
        idx += 1
    return t_grid, p1_a, p1_b
