"""Single-qubit Clifford group algebra over x/y rotation pulses.

The 24 single-qubit Cliffords are represented by integer ids 1..24.  Each id
is defined by its canonical decomposition into pulses from the set
{I, X180, Y180, X90, Y90, X-180, Y-180, X-90, Y-90} (left-to-right
application), and the group tables (composition, inversion) are derived from
the resulting 2x2 unitaries at import time.

Conventions
-----------
* Rotation sign: a pulse with axis a and angle theta implements
  exp(-1j * theta * sigma_a / 2).  Any consistent convention gives the same
  observable results; this one is fixed so tables are reproducible.
* Unitaries are compared up to global phase via |tr(U^dag V)| == 2.
* Pulse sequences act left to right: [p, q] means p first, so the matrix is
  U_q @ U_p.

Besides the minimal decompositions this module carries the five-primitive
broadcast tables: a fixed ordered round (X90, Y90, X90, X-180, Y-180) from
which every Clifford is obtained by firing a subset of the five slots, plus
the mirrored round (X180, Y180, X-90, Y-90, X-90) whose subset table is
derived here by exhaustive search and frozen below.
"""

from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

PHASE_TOL = 1e-9


class Pulse(enum.Enum):
    """The nine primitive rotations (axis, angle in units of pi)."""

    I = ("i", 0.0)
    X180 = ("x", 1.0)
    Y180 = ("y", 1.0)
    X90 = ("x", 0.5)
    Y90 = ("y", 0.5)
    XM180 = ("x", -1.0)
    YM180 = ("y", -1.0)
    XM90 = ("x", -0.5)
    YM90 = ("y", -0.5)

    @property
    def axis(self) -> str:
        return self.value[0]

    @property
    def angle(self) -> float:
        """Rotation angle in radians."""
        return self.value[1] * np.pi

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "Pulse":
        try:
            return _BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown pulse label {label!r}") from None


_LABELS = {
    Pulse.I: "I",
    Pulse.X180: "X180",
    Pulse.Y180: "Y180",
    Pulse.X90: "X90",
    Pulse.Y90: "Y90",
    Pulse.XM180: "X-180",
    Pulse.YM180: "Y-180",
    Pulse.XM90: "X-90",
    Pulse.YM90: "Y-90",
}
_BY_LABEL = {v: k for k, v in _LABELS.items()}

_SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}

_I2 = np.eye(2, dtype=complex)


def rotation_unitary(axis: str, angle: float) -> np.ndarray:
    """exp(-1j*angle*sigma_axis/2) for axis 'x' or 'y'; identity for axis 'i'."""
    if axis == "i" or angle == 0.0:
        return _I2.copy()
    return np.cos(angle / 2) * _I2 - 1j * np.sin(angle / 2) * _SIGMA[axis]


def pulse_unitary(p: Pulse) -> np.ndarray:
    return rotation_unitary(p.axis, p.angle)


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = PHASE_TOL) -> bool:
    """Phase-insensitive 2x2 unitary equality: |tr(U^dag V)| == 2 within tol."""
    return abs(abs(np.trace(u.conj().T @ v)) - 2.0) < tol


def sequence_unitary(pulses) -> np.ndarray:
    """Left-to-right product of a pulse sequence."""
    u = _I2.copy()
    for p in pulses:
        u = pulse_unitary(p) @ u
    return u


# Minimal decompositions of the 24 Cliffords (left-to-right pulse order).
MINIMAL_DECOMPOSITIONS: dict[int, tuple[Pulse, ...]] = {
    1: (Pulse.I,),
    2: (Pulse.Y90, Pulse.X90),
    3: (Pulse.XM90, Pulse.YM90),
    4: (Pulse.X180,),
    5: (Pulse.YM90, Pulse.XM90),
    6: (Pulse.X90, Pulse.YM90),
    7: (Pulse.Y180,),
    8: (Pulse.YM90, Pulse.X90),
    9: (Pulse.X90, Pulse.Y90),
    10: (Pulse.X180, Pulse.Y180),
    11: (Pulse.Y90, Pulse.XM90),
    12: (Pulse.XM90, Pulse.Y90),
    13: (Pulse.Y90, Pulse.X180),
    14: (Pulse.XM90,),
    15: (Pulse.X90, Pulse.YM90, Pulse.XM90),
    16: (Pulse.YM90,),
    17: (Pulse.X90,),
    18: (Pulse.X90, Pulse.Y90, Pulse.X90),
    19: (Pulse.YM90, Pulse.X180),
    20: (Pulse.X90, Pulse.Y180),
    21: (Pulse.X90, Pulse.YM90, Pulse.X90),
    22: (Pulse.Y90,),
    23: (Pulse.XM90, Pulse.Y180),
    24: (Pulse.X90, Pulse.Y90, Pulse.XM90),
}

# Five-primitive broadcast round and the per-Clifford firing masks
# (bit i fires FIVE_PRIMITIVES[i]; masks realize the Clifford left to right).
FIVE_PRIMITIVES: tuple[Pulse, ...] = (
    Pulse.X90,
    Pulse.Y90,
    Pulse.X90,
    Pulse.XM180,
    Pulse.YM180,
)

FIVE_PRIMITIVE_MASKS: dict[int, tuple[int, ...]] = {
    1: (0, 0, 0, 0, 0),
    2: (0, 1, 1, 0, 0),
    3: (1, 1, 0, 1, 0),
    4: (0, 0, 0, 1, 0),
    5: (0, 1, 1, 0, 1),
    6: (1, 1, 0, 0, 1),
    7: (0, 0, 0, 0, 1),
    8: (0, 1, 1, 1, 1),
    9: (1, 1, 0, 0, 0),
    10: (0, 0, 0, 1, 1),
    11: (0, 1, 1, 1, 0),
    12: (1, 1, 0, 1, 1),
    13: (0, 1, 0, 1, 0),
    14: (0, 0, 1, 1, 0),
    15: (1, 1, 1, 0, 1),
    16: (0, 1, 0, 0, 1),
    17: (0, 0, 1, 0, 0),
    18: (1, 1, 1, 0, 0),
    19: (0, 1, 0, 1, 1),
    20: (1, 0, 0, 0, 1),
    21: (1, 1, 1, 1, 1),
    22: (0, 1, 0, 0, 0),
    23: (1, 0, 0, 1, 1),
    24: (1, 1, 1, 1, 0),
}

# Mirrored round: the element-wise inverses of the normal round in reverse
# order compose (all fired) to the inverse of the full normal round.  The
# round is listed in the fixed hardware order used for odd parity.
FIVE_PRIMITIVES_INVERTED: tuple[Pulse, ...] = (
    Pulse.X180,
    Pulse.Y180,
    Pulse.XM90,
    Pulse.YM90,
    Pulse.XM90,
)

# Derived by derive_inverted_masks() (first matching subset in binary order,
# bit 0 = first primitive) and frozen; a regression test regenerates them.
FIVE_PRIMITIVE_MASKS_INVERTED: dict[int, tuple[int, ...]] = {
    1: (0, 0, 0, 0, 0),
    2: (1, 0, 0, 1, 1),
    3: (0, 0, 1, 1, 0),
    4: (1, 0, 0, 0, 0),
    5: (0, 0, 0, 1, 1),
    6: (1, 0, 1, 1, 0),
    7: (0, 1, 0, 0, 0),
    8: (1, 1, 0, 1, 1),
    9: (0, 1, 1, 1, 0),
    10: (1, 1, 0, 0, 0),
    11: (0, 1, 0, 1, 1),
    12: (1, 1, 1, 1, 0),
    13: (1, 0, 0, 1, 0),
    14: (0, 0, 1, 0, 0),
    15: (1, 0, 1, 1, 1),
    16: (0, 0, 0, 1, 0),
    17: (1, 0, 1, 0, 0),
    18: (0, 0, 1, 1, 1),
    19: (1, 1, 0, 1, 0),
    20: (0, 1, 1, 0, 0),
    21: (1, 1, 1, 1, 1),
    22: (0, 1, 0, 1, 0),
    23: (1, 1, 1, 0, 0),
    24: (0, 1, 1, 1, 1),
}


def _build_canonical() -> list[np.ndarray]:
    return [sequence_unitary(MINIMAL_DECOMPOSITIONS[c]) for c in range(1, 25)]


CANONICAL_UNITARIES: list[np.ndarray] = _build_canonical()


def clifford_unitary(c: int) -> np.ndarray:
    _check_id(c)
    return CANONICAL_UNITARIES[c - 1].copy()


def _check_id(c: int) -> None:
    if not 1 <= c <= 24:
        raise ValueError(f"Clifford id must be in 1..24, got {c}")


def match_unitary(u: np.ndarray, tol: float = PHASE_TOL) -> int | None:
    """Return the Clifford id whose unitary equals u up to phase, else None."""
    for c in range(1, 25):
        if equal_up_to_phase(u, CANONICAL_UNITARIES[c - 1], tol):
            return c
    return None


def clifford_of_pulses(pulses) -> int:
    """Id of the Clifford implemented by the pulse sequence (left to right).

    Every product of the primitive pulses is a Clifford; a failed match
    therefore indicates a corrupted table and raises.
    """
    c = match_unitary(sequence_unitary(pulses))
    if c is None:
        raise RuntimeError("pulse product did not match any canonical Clifford")
    return c


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    compose = np.zeros((25, 25), dtype=np.int8)
    for a in range(1, 25):
        ua = CANONICAL_UNITARIES[a - 1]
        for b in range(1, 25):
            prod = CANONICAL_UNITARIES[b - 1] @ ua  # a applied first
            c = match_unitary(prod)
            if c is None:
                raise RuntimeError("Clifford group not closed; table corrupt")
            compose[a, b] = c
    inverse = np.zeros(25, dtype=np.int8)
    for a in range(1, 25):
        inv = np.linalg.inv(CANONICAL_UNITARIES[a - 1])
        c = match_unitary(inv)
        if c is None:
            raise RuntimeError("Clifford inverse missing; table corrupt")
        inverse[a] = c
    return compose, inverse


_COMPOSE_TABLE, _INVERSE_TABLE = _build_tables()


def compose(a: int, b: int) -> int:
    """Clifford implementing 'a then b' (unitary U_b @ U_a)."""
    _check_id(a)
    _check_id(b)
    return int(_COMPOSE_TABLE[a, b])


def inverse(a: int) -> int:
    _check_id(a)
    return int(_INVERSE_TABLE[a])


def recovery_clifford(sequence) -> int:
    """Clifford that inverts the cumulative effect of the sequence.

    Appending the result to the sequence yields the identity; the empty
    sequence recovers with the identity Clifford (id 1).
    """
    acc = 1
    for c in sequence:
        acc = compose(acc, c)
    return inverse(acc)


def minimal_decomposition(a: int) -> list[Pulse]:
    _check_id(a)
    return list(MINIMAL_DECOMPOSITIONS[a])


def five_primitive_mask(a: int, inverted: bool = False) -> tuple[int, ...]:
    """Firing mask over the five-slot round realizing Clifford a.

    With inverted=True the mask refers to FIVE_PRIMITIVES_INVERTED.
    """
    _check_id(a)
    table = FIVE_PRIMITIVE_MASKS_INVERTED if inverted else FIVE_PRIMITIVE_MASKS
    return table[a]


def derive_inverted_masks() -> dict[int, tuple[int, ...]]:
    """Regenerate the inverted-round masks by exhaustive subset search.

    For each Clifford the first matching subset in binary counting order
    (bit 0 = first primitive) is chosen, which makes the table deterministic.
    """
    masks: dict[int, tuple[int, ...]] = {}
    for c in range(1, 25):
        target = CANONICAL_UNITARIES[c - 1]
        for code in range(32):
            bits = tuple((code >> i) & 1 for i in range(5))
            fired = [p for p, b in zip(FIVE_PRIMITIVES_INVERTED, bits) if b]
            if equal_up_to_phase(sequence_unitary(fired), target):
                masks[c] = bits
                break
        else:
            raise RuntimeError(f"no inverted-round subset found for Clifford {c}")
    return masks


@lru_cache(maxsize=1)
def pulse_clifford_map() -> dict[Pulse, int]:
    """Clifford id implemented by each single pulse."""
    return {p: clifford_of_pulses([p]) for p in Pulse}


def random_clifford_ids(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform ids in 1..24."""
    return rng.integers(1, 25, size=size)
