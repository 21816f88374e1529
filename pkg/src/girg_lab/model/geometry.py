"""Torus arithmetic, distance functions and ball volumes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


class Geometry(str, Enum):
    """Distance function on the torus."""

    MCD = "mcd"
    LINF = "linf"

    @classmethod
    def parse(cls, value: Union[str, "Geometry"]) -> "Geometry":
        if isinstance(value, Geometry):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown geometry {value!r}; expected one of mcd, linf") from None


def wrap_coordinate(c: float) -> float:
    """Canonical coordinate in [0, 1); exactly 1.0 maps to 0.0."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"coordinate {c} outside [0, 1]")
    return 0.0 if c == 1.0 else float(c)


@dataclass(frozen=True)
class TorusPoint:
    """A point of the d-dimensional unit torus."""

    coords: Tuple[float, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("a torus point needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(wrap_coordinate(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: float) -> "TorusPoint":
        return cls(tuple(coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)


def _check_unit(a: float, name: str):
    if not 0.0 <= a < 1.0:
        raise ValueError(f"{name}={a} outside [0, 1)")


def torus_abs(a: float, b: float) -> float:
    """Per-coordinate torus distance min{|a-b|, 1-|a-b|}."""
    _check_unit(a, "a")
    _check_unit(b, "b")
    diff = abs(a - b)
    return min(diff, 1.0 - diff)


def _component_distances(x: Sequence[float], y: Sequence[float]):
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} != {len(y)}")
    return [torus_abs(a, b) for a, b in zip(x, y)]


def mcd_distance(x: TorusPoint, y: TorusPoint) -> float:
    """Minimum-component distance."""
    return min(_component_distances(x.coords, y.coords))


def linf_distance(x: TorusPoint, y: TorusPoint) -> float:
    """Maximum-component (L-infinity) torus distance."""
    return max(_component_distances(x.coords, y.coords))


def distance(x: TorusPoint, y: TorusPoint, geometry: Geometry) -> float:
    if Geometry.parse(geometry) is Geometry.MCD:
        return mcd_distance(x, y)
    return linf_distance(x, y)


def pairwise_torus_abs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise torus distance of coordinate arrays (no range checks)."""
    diff = np.abs(a - b)
    return np.minimum(diff, 1.0 - diff)


def distances(xs: np.ndarray, ys: np.ndarray, geometry: Geometry) -> np.ndarray:
    """Row-wise distances between two (m, d) position arrays."""
    comp = pairwise_torus_abs(xs, ys)
    if Geometry.parse(geometry) is Geometry.MCD:
        return comp.min(axis=1)
    return comp.max(axis=1)


def mcd_distances(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return pairwise_torus_abs(xs, ys).min(axis=1)


def linf_distances(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return pairwise_torus_abs(xs, ys).max(axis=1)


def _as_radius(r: ArrayLike) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("radius must be >= 0")
    return arr


def _scalar_or_array(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def volume_min(r: ArrayLike, d: int) -> ArrayLike:
    """Exact volume of the MCD ball: 1 - (1 - 2r)^d, saturating at 1."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    arr = _as_radius(r)
    inner = np.clip(1.0 - 2.0 * arr, 0.0, 1.0)
    return _scalar_or_array(1.0 - inner ** d, r)


def volume_linf(r: ArrayLike, d: int) -> ArrayLike:
    """Volume of the L-infinity torus ball: min{1, (2r)^d}."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    arr = _as_radius(r)
    return _scalar_or_array(np.minimum(1.0, (2.0 * arr) ** d), r)


def volume(r: ArrayLike, d: int, geometry: Geometry) -> ArrayLike:
    if Geometry.parse(geometry) is Geometry.MCD:
        return volume_min(r, d)
    return volume_linf(r, d)


def inverse_volume(v: float, d: int, geometry: Geometry) -> float:
    """Smallest radius whose ball has volume ``v`` (v in [0, 1])."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"volume {v} outside [0, 1]")
    if Geometry.parse(geometry) is Geometry.MCD:
        return 0.5 * (1.0 - (1.0 - v) ** (1.0 / d))
    return 0.5 * v ** (1.0 / d)
