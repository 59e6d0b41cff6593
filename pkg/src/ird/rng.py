"""Counter-based uniform draws.

Every draw is a pure function of (master seed, round index, unit id, lane),
so rounds can be evaluated in any order or split across workers and still
reproduce the same stream bit for bit. The mixer is the SplitMix64 finalizer
without the golden-ratio increment.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3

LANE_OUTAGE = 0
LANE_JITTER = 0xD1B54A32D192ED03
LANES = {"outage": LANE_OUTAGE, "jitter": LANE_JITTER}

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 2.0**-53


def fnv1a64(text: str) -> int:
    h = FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _lane(lane) -> int:
    if isinstance(lane, str):
        return LANES[lane]
    if lane not in (LANE_OUTAGE, LANE_JITTER):
        raise ValueError(f"unknown lane: {lane!r}")
    return lane


def unit_key(unit_id: str, lane=LANE_OUTAGE) -> int:
    """The round-independent part of a draw: mix64(fnv(unit) ^ lane)."""
    return mix64(fnv1a64(unit_id) ^ _lane(lane))


def uniform01(master_seed: int, round_index: int, unit_id: str, lane=LANE_OUTAGE) -> float:
    """Deterministic draw in [0, 1) on the 2**-53 lattice."""
    x = mix64((master_seed & MASK64) ^ mix64(round_index) ^ unit_key(unit_id, lane))
    return (x >> 11) * _INV_2_53


def mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 arithmetic wraps modulo 2**64
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def uniform01_array(master_seed: int, round_indices, unit_id: str, lane=LANE_OUTAGE) -> np.ndarray:
    """Vectorised :func:`uniform01` over an array of round indices."""
    rounds = np.asarray(round_indices, dtype=np.uint64)
    base = np.uint64(((master_seed & MASK64) ^ unit_key(unit_id, lane)) & MASK64)
    x = mix64_array(mix64_array(rounds) ^ base)
    return (x >> np.uint64(11)).astype(np.float64) * _INV_2_53
