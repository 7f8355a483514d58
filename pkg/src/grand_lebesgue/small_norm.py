"""Two-sided estimates of the small Lebesgue norm.

The small norm of ``g`` is an infimum over decompositions ``g = sum_k g_k`` of

    sum_k  inf_{0 < eps <= p-1}  eps^(-theta/(p-eps)) * ||g_k||_{(p-eps)'}

Every concrete decomposition therefore gives an upper bound. A lower bound
comes from duality with the grand norm: ``int f|g| <= ||f||_{p),theta} ||g||``
for every test function ``f``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from ._search import refine_max
from .grand_norm import eps_weight, grand_norm
from .measure_space import (INF, ArrayLike, DomainError, EpsilonGrid,
                            ExponentParams, MeasureSpace, as_function,
                            lp_norms, scalar_norm)

RECONSTRUCTION_TOL = 1e-10
BRACKET_TOL = 1e-9
DEFAULT_LEVELS = 8
DEFAULT_CANDIDATES = 32
STRATEGIES = ("single", "level_sets", "greedy")


class InvalidDecompositionError(ValueError):
    """The parts of a decomposition do not sum to the decomposed function."""


class PreconditionError(ValueError):
    pass


class BracketError(ArithmeticError):
    """Computed lower bound exceeds the computed upper bound."""


@dataclass(frozen=True)
class Decomposition:
    parts: tuple

    def __init__(self, parts: Iterable[ArrayLike]):
        object.__setattr__(self, "parts",
                           tuple(np.asarray(g, dtype=float) for g in parts))

    def __len__(self):
        return len(self.parts)

    def reconstruct(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for g in self.parts:
            out = out + g
        return out

    def __add__(self, other: "Decomposition") -> "Decomposition":
        return Decomposition(self.parts + other.parts)


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    lower_method: str
    upper_method: str

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def gap_ratio(self) -> float:
        if self.lower > 0:
            return self.upper / self.lower
        return 1.0 if self.upper == 0 else math.inf

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "lower_method": self.lower_method,
                "upper_method": self.upper_method}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# -- term costs ----------------------------------------------------------------

def _dual_exponents(p: float, eps: np.ndarray) -> np.ndarray:
    base = p - eps
    with np.errstate(divide="ignore"):
        q = np.where(base - 1.0 > 0, base / np.maximum(base - 1.0, 1e-300), INF)
    return q


def _cost_fn(a: np.ndarray, params: ExponentParams, space: MeasureSpace):
    norm = scalar_norm(a, space.weights)
    p, theta = params.p, params.theta

    def cost(eps: float) -> float:
        base = p - eps
        q = base / (base - 1.0) if base - 1.0 > 0 else INF
        return math.exp(-theta * math.log(eps) / base) * norm(q)

    return cost


def _term_cost(a: np.ndarray, params: ExponentParams, space: MeasureSpace,
               hints: Sequence[float] = (), refine: bool = True) -> tuple[float, float]:
    """Return ``(cost, eps)`` minimizing over the grid, the hints and a golden polish."""
    eps = params.epsilons()
    if not np.any(a):
        return 0.0, float(eps[-1])
    costs = eps_weight(eps, -params.theta, params.p) * lp_norms(
        a, _dual_exponents(params.p, eps), space)
    cost = _cost_fn(a, params, space)
    if refine:
        i, e_star, neg = refine_max(lambda e: -cost(e),
                                    eps, -costs, params.grid.refine_tol)
        best_eps, best = e_star, -neg
    else:
        i = int(np.argmin(costs))
        best_eps, best = float(eps[i]), float(costs[i])
    for h in hints:
        c = cost(float(h))
        if c < best:
            best_eps, best = float(h), c
    return best, best_eps


def term_cost(g_k: ArrayLike, params: ExponentParams, space: MeasureSpace) -> float:
    """``inf_eps eps^(-theta/(p-eps)) ||g_k||_{(p-eps)'}`` over the grid, polished.

    At ``eps = p - 1`` the conjugate exponent is infinite and the sup norm is used.
    The result is an upper bound of the true infimum.
    """
    return _term_cost(as_function(g_k, space), params, space)[0]


def _decomposition_cost(dec: Decomposition, params, space, hints=None):
    total, eps = 0.0, []
    for k, part in enumerate(dec.parts):
        h = () if hints is None else (hints[k],)
        c, e = _term_cost(np.abs(part), params, space, h)
        total += c
        eps.append(e)
    return total, eps


def _check_reconstruction(dec: Decomposition, g: np.ndarray):
    for part in dec.parts:
        if part.shape != g.shape:
            raise InvalidDecompositionError("part does not match the function length")
    resid = np.max(np.abs(dec.reconstruct(g.size) - g), initial=0.0)
    if resid > RECONSTRUCTION_TOL:
        raise InvalidDecompositionError(f"reconstruction residual {resid:.3e}")


def decomposition_cost(dec: Decomposition, params: ExponentParams,
                       space: MeasureSpace, g: Optional[ArrayLike] = None) -> float:
    """Sum of term costs; an upper bound on the small norm of what ``dec`` sums to.

    When ``g`` is given the decomposition must reconstruct it.
    """
    for part in dec.parts:
        as_function(part, space)
    if g is not None:
        _check_reconstruction(dec, as_function(g, space))
    return _decomposition_cost(dec, params, space)[0]


# -- decomposition strategies ----------------------------------------------------

def level_set_partition(g: ArrayLike, levels: int) -> list[np.ndarray]:
    """Index groups of ``g``'s nonzero points split into magnitude quantiles."""
    a = np.abs(np.asarray(g, dtype=float))
    order = np.argsort(-a, kind="stable")
    order = order[a[order] > 0]
    if order.size == 0:
        return []
    return [grp for grp in np.array_split(order, min(levels, order.size)) if grp.size]


def split_by(g: ArrayLike, groups: Sequence[np.ndarray]) -> Decomposition:
    g = np.asarray(g, dtype=float)
    parts = []
    for grp in groups:
        part = np.zeros_like(g)
        part[grp] = g[grp]
        parts.append(part)
    return Decomposition(parts)


def _greedy_groups(a, levels, params, space):
    remaining = np.argsort(-a, kind="stable")
    remaining = remaining[a[remaining] > 0]
    groups = []

    def cost(idx):
        part = np.zeros_like(a)
        part[idx] = a[idx]
        return _term_cost(part, params, space, refine=False)[0]

    for _ in range(levels - 1):
        m = remaining.size
        if m < 2:
            break
        current = cost(remaining)
        sizes = sorted({min(max(1, math.ceil(m * j / levels)), m - 1)
                        for j in range(1, levels)})
        scored = [(cost(remaining[:t]) + cost(remaining[t:]), t) for t in sizes]
        best, t = min(scored)
        if not best < current:
            break
        groups.append(remaining[:t])
        remaining = remaining[t:]
    if remaining.size:
        groups.append(remaining)
    return groups


def candidate_decompositions(g: np.ndarray, params: ExponentParams,
                             space: MeasureSpace, strategy="all",
                             levels: int = DEFAULT_LEVELS) -> dict[str, Decomposition]:
    names = STRATEGIES if strategy == "all" else (
        (strategy,) if isinstance(strategy, str) else tuple(strategy))
    # the one-term bound is always a candidate
    out = {"single": Decomposition([g])}
    for name in names:
        if name == "single":
            continue
        if name == "level_sets":
            if levels < 1:
                raise DomainError("level_sets needs K >= 1")
            out[f"level_sets({levels})"] = split_by(g, level_set_partition(g, levels))
        elif name == "greedy":
            if levels < 1:
                raise DomainError("greedy needs K >= 1")
            groups = _greedy_groups(np.abs(g), levels, params, space)
            out[f"greedy({levels})"] = split_by(g, groups)
        else:
            raise DomainError(f"unknown strategy {name!r}")
    return out


def best_decomposition(g: ArrayLike, params: ExponentParams, space: MeasureSpace,
                       strategy="all", levels: int = DEFAULT_LEVELS,
                       candidates: Sequence[Decomposition] = ()
                       ) -> tuple[float, Decomposition, str]:
    """Cheapest decomposition among the strategies and extra ``candidates``.

    Returns ``(cost, decomposition, method)``; ties keep the earlier strategy.
    """
    v = as_function(g, space)
    tried = candidate_decompositions(v, params, space, strategy, levels)
    for j, dec in enumerate(candidates):
        _check_reconstruction(dec, v)
        tried[f"candidate[{j}]"] = dec
    best = None
    for name, dec in tried.items():
        c = _decomposition_cost(dec, params, space)[0]
        if best is None or c < best[0]:
            best = (c, dec, name)
    return best


def small_norm_upper(g: ArrayLike, params: ExponentParams, space: MeasureSpace,
                     strategy="all", levels: int = DEFAULT_LEVELS,
                     candidates: Sequence[Decomposition] = ()) -> float:
    """Smallest decomposition cost found; ``strategy`` is a name, a list of names or ``"all"``."""
    return best_decomposition(g, params, space, strategy, levels, candidates)[0]


# -- duality lower bound ---------------------------------------------------------

def _candidate_grid(params: ExponentParams, count: int) -> np.ndarray:
    g = params.grid
    return EpsilonGrid(count=min(g.count, count), min_fraction=g.min_fraction,
                       spacing=g.spacing).points(params.p)


def holder_extremal(g: ArrayLike, eps: float, p: float) -> np.ndarray:
    """``|g|^((p-eps)'-1)`` scaled to max 1; at ``eps = p-1`` the indicator of ``argmax |g|``."""
    a = np.abs(np.asarray(g, dtype=float))
    top = a.max(initial=0.0)
    if top == 0:
        return np.zeros_like(a)
    r = a / top
    base = p - eps
    if base - 1.0 <= 0:
        return (r == 1.0).astype(float)
    return r ** (1.0 / (base - 1.0))


def associate_lower_bound(g: ArrayLike, params: ExponentParams, space: MeasureSpace,
                          extra_tests: Sequence[ArrayLike] = (),
                          count: int = DEFAULT_CANDIDATES) -> float:
    """``max_f int f|g| / ||f||_{p),theta}`` over Hölder-extremal test functions.

    The test functions are ``|g|^((p-eps)'-1)`` for ``eps`` on a candidate grid,
    plus any ``extra_tests`` supplied by the caller.
    """
    a = np.abs(as_function(g, space))
    if not np.any(a):
        return 0.0
    tests = [holder_extremal(a, float(e), params.p)
             for e in _candidate_grid(params, count)]
    tests += [np.abs(as_function(t, space)) for t in extra_tests]
    best = 0.0
    for f in tests:
        gn = grand_norm(f, params, space)
        if gn > 0:
            best = max(best, float(np.dot(space.weights, f * a)) / gn)
    return best


def small_norm_estimate(g: ArrayLike, params: ExponentParams, space: MeasureSpace,
                        levels: int = DEFAULT_LEVELS) -> NormEstimate:
    v = as_function(g, space)
    lower = associate_lower_bound(v, params, space)
    upper, _, method = best_decomposition(v, params, space, "all", levels)
    if lower > upper + BRACKET_TOL:
        raise BracketError(f"lower {lower!r} exceeds upper {upper!r}")
    return NormEstimate(lower, upper, "associate_duality", method)


def dominated_monotonicity_check(g: ArrayLike, psi: ArrayLike, params: ExponentParams,
                                 space: MeasureSpace,
                                 levels: int = DEFAULT_LEVELS) -> bool:
    """Check that both bounds respect ``0 <= psi <= |g|``.

    The upper bounds use the level-set partition of ``g`` for both functions
    and the same evaluation points per part. The lower bound of ``g`` also
    sees ``psi``'s test functions, so both maxima run over comparable sets.
    """
    a = np.abs(as_function(g, space))
    s = as_function(psi, space)
    if np.any(s < 0) or np.any(s > a * (1 + 1e-12)):
        raise PreconditionError("psi must satisfy 0 <= psi <= |g| pointwise")
    groups = level_set_partition(a, levels)
    g_cost, g_eps = _decomposition_cost(split_by(a, groups), params, space)
    s_cost, _ = _decomposition_cost(split_by(s, groups), params, space, hints=g_eps)
    upper_ok = s_cost <= g_cost + BRACKET_TOL

    s_tests = [holder_extremal(s, float(e), params.p)
               for e in _candidate_grid(params, DEFAULT_CANDIDATES)] if np.any(s) else []
    lower_ok = (associate_lower_bound(s, params, space)
                <= associate_lower_bound(a, params, space, extra_tests=s_tests)
                + BRACKET_TOL)
    return bool(upper_ok and lower_ok)
