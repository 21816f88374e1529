"""Counter-based random tape addressed by (purpose, ids)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Union

import numpy as np

from ..model.kernel import MAX_SEED

IntArray = Union[int, np.ndarray]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / float(1 << 53)


class Purpose(IntEnum):
    """Stream tags; each purpose draws from a disjoint part of the tape."""

    WEIGHT = 1
    POSITION = 2
    PAIR = 3
    SKIP = 4
    ANALYSIS = 5


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> _S30)) * _MUL1
    z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


def _as_u64(value: IntArray) -> np.ndarray:
    arr = np.asarray(value)
    if arr.dtype.kind == "u":
        return arr.astype(np.uint64)
    return arr.astype(np.int64).astype(np.uint64)


@dataclass(frozen=True)
class RandomTape:
    """Deterministic uniforms: same (seed, address) always yields the same value."""

    seed: int

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def _hash(self, purpose: Purpose, *keys: IntArray) -> np.ndarray:
        with np.errstate(over="ignore"):
            h = _splitmix(np.atleast_1d(np.uint64(self.seed)) ^ _splitmix(np.atleast_1d(np.uint64(int(purpose)))))
            for key in keys:
                h = _splitmix(h ^ _as_u64(key))
        return h

    def uniform(self, purpose: Purpose, *keys: IntArray) -> np.ndarray:
        """Uniforms in [0, 1) with 53 random bits, broadcast over array keys."""
        h = self._hash(purpose, *keys)
        return (h >> _S11).astype(np.float64) * _INV_2_53

    def open_uniform(self, purpose: Purpose, *keys: IntArray) -> np.ndarray:
        """Uniforms in the open interval (0, 1)."""
        h = self._hash(purpose, *keys)
        return ((h >> _S11).astype(np.float64) + 0.5) * _INV_2_53

    def pair_coins(self, us: IntArray, vs: IntArray) -> np.ndarray:
        """Vectorised pair coins; order-symmetric in (u, v)."""
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if np.any(us == vs):
            raise ValueError("pair coins are undefined for u == v")
        return self.uniform(Purpose.PAIR, np.minimum(us, vs), np.maximum(us, vs))


def pair_coin(tape: RandomTape, u: int, v: int) -> float:
    """The uniform attached to the unordered pair {u, v}."""
    if u == v:
        raise ValueError(f"pair coin needs distinct vertices, got u = v = {u}")
    return float(tape.pair_coins(np.array([u]), np.array([v]))[0])
