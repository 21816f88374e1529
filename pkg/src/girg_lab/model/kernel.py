"""Model parameters, the power-law weight law and the connection kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Union

import numpy as np

from ..errors import ConfigError
from .geometry import ArrayLike, Geometry, TorusPoint, volume

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one MCD-GIRG (or L-infinity baseline) draw.

    ``kernel_c`` is the explicit constant multiplying the kernel after
    exponentiation; with ``kernel_c = 1`` the connection probability is
    ``min{w_u w_v / (n V(dist)), 1}^alpha``.
    """

    n: int
    d: int = 2
    tau: float = 2.5
    alpha: float = 1.5
    kernel_c: float = 1.0
    geometry: Geometry = Geometry.MCD
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry.parse(self.geometry))
        self.validate()

    def validate(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError("model.n", f"must be a positive integer, got {self.n}")
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError("model.d", f"must be a positive integer, got {self.d}")
        if not self.tau > 2:
            raise ConfigError("model.tau", f"must be > 2 (power-law exponent), got {self.tau}")
        if not self.alpha > 1:
            raise ConfigError("model.alpha", f"must be > 1, got {self.alpha}")
        if self.kernel_c < 0:
            raise ConfigError("model.kernel_c", f"must be >= 0, got {self.kernel_c}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise ConfigError("model.seed", f"must be a 64-bit unsigned integer, got {self.seed}")

    def with_seed(self, seed: int) -> "ModelParams":
        return replace(self, seed=int(seed))

    def with_n(self, n: int) -> "ModelParams":
        return replace(self, n=int(n))

    def with_geometry(self, geometry: Union[str, Geometry]) -> "ModelParams":
        return replace(self, geometry=Geometry.parse(geometry))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "tau": self.tau,
            "alpha": self.alpha,
            "kernel_c": self.kernel_c,
            "geometry": self.geometry.value,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class VertexData:
    """Weight and torus position of a single vertex."""

    weight: float
    position: TorusPoint

    def __post_init__(self):
        if not self.weight >= 1:
            raise ValueError(f"weight must be >= 1, got {self.weight}")


@dataclass(frozen=True)
class VertexTable:
    """Column storage for the VertexData of a whole graph."""

    weights: np.ndarray
    positions: np.ndarray = field(repr=False)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[0] != weights.shape[0]:
            raise ValueError("positions must have shape (n, d) matching weights")
        if weights.size and weights.min() < 1:
            raise ValueError("all weights must be >= 1")
        if positions.size and (positions.min() < 0 or positions.max() >= 1):
            raise ValueError("positions must lie in [0, 1)")
        weights.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "positions", positions)

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])

    @property
    def d(self) -> int:
        return int(self.positions.shape[1])

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, v: int) -> VertexData:
        return VertexData(float(self.weights[v]), TorusPoint(tuple(self.positions[v])))

    def __iter__(self) -> Iterator[VertexData]:
        for v in range(self.n):
            yield self[v]

    def subset(self, ids: np.ndarray) -> "VertexTable":
        return VertexTable(self.weights[ids], self.positions[ids])


def sample_weight(u: ArrayLike, tau: float) -> ArrayLike:
    """Pareto inverse CDF u^(-1/(tau-1)); P(W >= w) = w^(1-tau) on [1, inf)."""
    if not tau > 2:
        raise ValueError(f"tau must be > 2, got {tau}")
    arr = np.asarray(u, dtype=float)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise ValueError("u must lie in the open interval (0, 1)")
    w = arr ** (-1.0 / (tau - 1.0))
    return float(w) if np.ndim(u) == 0 else w


def expected_weight_tail(w: ArrayLike, tau: float) -> ArrayLike:
    return np.asarray(w, dtype=float) ** (1.0 - tau)


def weight_mean(tau: float) -> float:
    return (tau - 1.0) / (tau - 2.0)


def critical_gamma(tau: float) -> float:
    """Threshold 1/(3 - tau) above which G' has no isolated vertices whp."""
    if not 2 < tau < 3:
        raise ValueError(f"critical gamma needs 2 < tau < 3, got {tau}")
    return 1.0 / (3.0 - tau)


def induced_degree_scale(n: int, gamma: float, tau: float) -> float:
    """log^(gamma (3 - tau)) n, the typical degree inside G'."""
    return math.log(n) ** (gamma * (3.0 - tau))


def subgraph_size_scale(n: int, gamma: float, tau: float) -> float:
    """n log^(gamma (1 - tau)) n, the order of |V'|."""
    return n * math.log(n) ** (gamma * (1.0 - tau))


def _inner_ratio(w_u: ArrayLike, w_v: ArrayLike, dist: ArrayLike, p: ModelParams) -> np.ndarray:
    vol = np.asarray(volume(np.asarray(dist, dtype=float), p.d, p.geometry), dtype=float)
    prod = np.asarray(w_u, dtype=float) * np.asarray(w_v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(vol > 0, prod / (p.n * vol), np.inf)
    return ratio


def connection_probability(w_u: ArrayLike, w_v: ArrayLike, dist: ArrayLike, p: ModelParams) -> ArrayLike:
    """Edge probability min{1, c * min{w_u w_v / (n V(dist)), 1}^alpha}.

    Coincident points (V(0) = 0) connect with probability min{1, c}.
    """
    inner = np.minimum(_inner_ratio(w_u, w_v, dist, p), 1.0)
    prob = np.minimum(1.0, p.kernel_c * inner ** p.alpha)
    if np.ndim(w_u) == 0 and np.ndim(w_v) == 0 and np.ndim(dist) == 0:
        return float(prob)
    return prob


def is_strong_tie(w_u: ArrayLike, w_v: ArrayLike, dist: ArrayLike, p: ModelParams) -> ArrayLike:
    """True where the kernel's inner minimum is attained by 1."""
    strong = _inner_ratio(w_u, w_v, dist, p) >= 1.0
    if np.ndim(strong) == 0:
        return bool(strong)
    return strong
