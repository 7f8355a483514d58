"""Finite measure spaces, sampled functions and classical L^q norms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Literal, Sequence, Union

import numpy as np

INF = math.inf

ArrayLike = Union[Sequence[float], np.ndarray]


class AlignmentError(ValueError):
    """A function does not have one value per point of its space."""


class DomainError(ValueError):
    """A parameter lies outside the range where the operation is defined."""


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """Finite set of points ``0..n-1`` carrying strictly positive weights."""

    weights: np.ndarray
    total_mass: float = field(init=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size < 1:
            raise DomainError("a measure space needs at least one point")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("weights must be finite and strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_mass", float(math.fsum(w)))

    @classmethod
    def uniform(cls, n: int, mass: float = 1.0) -> "MeasureSpace":
        return cls(np.full(n, mass / n))

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= 1e-12

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"MeasureSpace(n={self.size}, total_mass={self.total_mass!r})"


def as_function(f: ArrayLike, space: MeasureSpace) -> np.ndarray:
    """Validate ``f`` as a finite real function on ``space`` and return it as an array."""
    v = np.asarray(f, dtype=float)
    if v.ndim != 1 or v.size != space.size:
        raise AlignmentError(
            f"function has shape {v.shape}, space has {space.size} points")
    if not np.all(np.isfinite(v)):
        raise DomainError("function values must be finite")
    return v


@dataclass(frozen=True)
class EpsilonGrid:
    """Discretization policy for ``0 < eps <= p - 1``.

    The grid always contains ``eps = p - 1``; its smallest point is
    ``min_fraction * (p - 1)``. ``refine_tol`` is the relative bracket width
    at which golden-section refinement stops.
    """

    count: int = 256
    min_fraction: float = 1e-8
    spacing: Literal["geometric", "uniform"] = "geometric"
    refine_tol: float = 1e-10

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise DomainError("grid count must be an integer >= 2")
        if not 0 < self.min_fraction < 1:
            raise DomainError("min_fraction must lie in (0, 1)")
        if self.spacing not in ("geometric", "uniform"):
            raise DomainError(f"unknown spacing {self.spacing!r}")
        if not self.refine_tol > 0:
            raise DomainError("refine_tol must be positive")

    def points(self, p: float) -> np.ndarray:
        return _grid_points(self, float(p))


@lru_cache(maxsize=256)
def _grid_points(grid: EpsilonGrid, p: float) -> np.ndarray:
    top = p - 1.0
    lo = grid.min_fraction * top
    if grid.spacing == "geometric":
        eps = np.geomspace(lo, top, grid.count)
    else:
        eps = np.linspace(lo, top, grid.count)
    eps[-1] = top
    eps.setflags(write=False)
    return eps


@dataclass(frozen=True)
class ExponentParams:
    p: float
    theta: float = 1.0
    grid: EpsilonGrid = field(default_factory=EpsilonGrid)

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 1):
            raise DomainError(f"p must lie in (1, inf), got {self.p}")
        if not (math.isfinite(self.theta) and self.theta >= 0):
            raise DomainError(f"theta must be >= 0, got {self.theta}")

    @property
    def conjugate(self) -> float:
        return conjugate_exponent(self.p)

    def epsilons(self) -> np.ndarray:
        return self.grid.points(self.p)


def conjugate_exponent(q: float) -> float:
    """Hölder conjugate ``q / (q - 1)`` for ``1 < q < inf``."""
    if not (math.isfinite(q) and q > 1):
        raise DomainError(f"conjugate exponent needs 1 < q < inf, got {q}")
    return q / (q - 1.0)


def dual_exponent(q: float) -> float:
    """Like :func:`conjugate_exponent` but maps 1 to inf and inf to 1."""
    if q == 1:
        return INF
    if q == INF:
        return 1.0
    return conjugate_exponent(q)


def _lp(v: np.ndarray, q: float, w: np.ndarray) -> float:
    a = np.abs(v)
    top = a.max(initial=0.0)
    if top == 0.0:
        return 0.0
    if q == INF:
        return float(top)
    # |v|^q = top^q * (|v|/top)^q keeps every power in [0, 1]
    s = float(np.dot(w, (a / top) ** q))
    return float(top * math.exp(math.log(s) / q))


def scalar_norm(v: np.ndarray, w: np.ndarray):
    """Return ``q -> ||v||_q`` with the normalization done once, for repeated scalar calls."""
    a = np.abs(v)
    top = float(a.max(initial=0.0))
    if top == 0.0:
        return lambda q: 0.0
    r = a / top
    log_top = math.log(top)

    def norm(q: float) -> float:
        if q == INF:
            return top
        return math.exp(log_top + math.log(float(np.dot(w, r ** q))) / q)

    return norm


def lp_norm(f: ArrayLike, q: float, space: MeasureSpace) -> float:
    """``(sum_i w_i |f_i|^q)^(1/q)``; ``q = inf`` gives ``max_i |f_i|``."""
    if not q >= 1:
        raise DomainError(f"lp_norm needs q >= 1, got {q}")
    return _lp(as_function(f, space), q, space.weights)


def lp_norms(f: np.ndarray, qs: np.ndarray, space: MeasureSpace) -> np.ndarray:
    """Vectorized :func:`lp_norm` over an array of finite exponents ``qs``."""
    v = as_function(f, space)
    qs = np.asarray(qs, dtype=float)
    a = np.abs(v)
    top = a.max(initial=0.0)
    if top == 0.0:
        return np.zeros_like(qs)
    out = np.empty_like(qs)
    finite = np.isfinite(qs)
    if finite.any():
        r = a / top
        q = qs[finite]
        s = (r[None, :] ** q[:, None]) @ space.weights
        out[finite] = top * np.exp(np.log(s) / q)
    out[~finite] = top
    return out


def integrate(f: ArrayLike, space: MeasureSpace) -> float:
    return float(np.dot(space.weights, as_function(f, space)))


def integrate_product(f: ArrayLike, g: ArrayLike, space: MeasureSpace) -> float:
    """Pairing ``sum_i w_i f_i g_i``."""
    return float(np.dot(space.weights,
                        as_function(f, space) * as_function(g, space)))


# -- serialization -----------------------------------------------------------

def function_to_json(f: ArrayLike, space: MeasureSpace) -> str:
    v = as_function(f, space)
    return json.dumps({"weights": space.weights.tolist(), "values": v.tolist()})


def function_from_json(text: str) -> tuple[MeasureSpace, np.ndarray]:
    """Parse ``{"weights": [...], "values": [...]}`` or a bare value list.

    A bare list, or an object without weights, gets uniform probability weights.
    """
    data = json.loads(text)
    if isinstance(data, list):
        values, weights = data, None
    elif isinstance(data, dict) and "values" in data:
        values, weights = data["values"], data.get("weights")
    else:
        raise ValueError("expected a JSON list or an object with 'values'")
    values = np.asarray(values, dtype=float)
    space = (MeasureSpace.uniform(values.size) if weights is None
             else MeasureSpace(weights))
    return space, as_function(values, space)


def function_to_binary(f: ArrayLike) -> bytes:
    return np.asarray(f, dtype="<f8").tobytes()


def function_from_binary(data: bytes) -> tuple[MeasureSpace, np.ndarray]:
    """Values as little-endian float64; weights are uniform 1/n."""
    if len(data) % 8 or not data:
        raise ValueError("binary function data must be a nonempty multiple of 8 bytes")
    values = np.frombuffer(data, dtype="<f8").astype(float)
    space = MeasureSpace.uniform(values.size)
    return space, as_function(values, space)


def load_function(path: Union[str, Path]) -> tuple[MeasureSpace, np.ndarray]:
    path = Path(path)
    raw = path.read_bytes()
    if path.suffix.lower() == ".json":
        return function_from_json(raw.decode())
    if path.suffix.lower() in (".bin", ".f64", ".dat"):
        return function_from_binary(raw)
    try:
        return function_from_json(raw.decode())
    except (UnicodeDecodeError, json.JSONDecodeError):
        return function_from_binary(raw)
