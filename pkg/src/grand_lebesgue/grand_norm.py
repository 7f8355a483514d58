"""Generalized grand Lebesgue norm and its epsilon profile.

For ``1 < p < inf`` and ``theta >= 0`` the norm is

    sup_{0 < eps <= p-1}  eps^(theta/(p-eps)) * ||f||_{p-eps}

The supremum is taken over a finite grid and then polished by golden-section
search, so the returned value is a lower bound of the true supremum that
increases with grid density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._search import refine_max
from .measure_space import (ArrayLike, DomainError, ExponentParams,
                            MeasureSpace, as_function, lp_norms,
                            scalar_norm)


def eps_weight(eps, theta: float, p: float):
    """``eps^(theta/(p-eps))``, also used with a negative ``theta`` for the small norm."""
    eps = np.asarray(eps, dtype=float)
    if theta == 0:
        return np.ones_like(eps)
    return np.exp(theta * np.log(eps) / (p - eps))


def phi(f: ArrayLike, eps: float, params: ExponentParams,
        space: MeasureSpace) -> float:
    """The profile value ``eps^(theta/(p-eps)) * ||f||_{p-eps}`` at a single ``eps``."""
    v = as_function(f, space)
    return _phi_fn(v, params, space)(eps)


def _phi_fn(v: np.ndarray, params: ExponentParams, space: MeasureSpace):
    norm = scalar_norm(v, space.weights)
    p, theta = params.p, params.theta
    if theta == 0:
        return lambda eps: norm(p - eps)
    return lambda eps: math.exp(theta * math.log(eps) / (p - eps)) * norm(p - eps)


def _phi_grid(v, eps, params, space):
    return eps_weight(eps, params.theta, params.p) * lp_norms(v, params.p - eps, space)


@dataclass(frozen=True)
class EpsilonProfile:
    epsilons: np.ndarray
    values: np.ndarray
    argmax_index: int
    refined_argmax: tuple[float, float]

    @property
    def maximum(self) -> float:
        return self.refined_argmax[1]

    def to_csv(self) -> str:
        lines = ["epsilon,phi"]
        lines += [f"{e:.17g},{v:.17g}" for e, v in zip(self.epsilons, self.values)]
        e, v = self.refined_argmax
        lines.append(f"# refined_argmax epsilon={e:.17g} phi={v:.17g}")
        return "\n".join(lines) + "\n"


def epsilon_profile(f: ArrayLike, params: ExponentParams,
                    space: MeasureSpace) -> EpsilonProfile:
    v = as_function(f, space)
    eps = params.epsilons()
    if not np.any(v):
        zeros = np.zeros_like(eps)
        return EpsilonProfile(eps, zeros, eps.size - 1, (float(eps[-1]), 0.0))
    values = _phi_grid(v, eps, params, space)
    i, e_star, v_star = refine_max(_phi_fn(v, params, space),
                                   eps, values, params.grid.refine_tol)
    return EpsilonProfile(eps, values, i, (e_star, v_star))


def grand_norm(f: ArrayLike, params: ExponentParams, space: MeasureSpace) -> float:
    """Refined grid maximum of the epsilon profile; 0 for the zero function."""
    v = as_function(f, space)
    if not np.any(v):
        return 0.0
    return epsilon_profile(v, params, space).maximum


def vanishing_tail(f: ArrayLike, params: ExponentParams, space: MeasureSpace,
                   tail: Sequence[float]) -> np.ndarray:
    """Profile values along a strictly decreasing sequence of ``eps``.

    Functions in the closure of L^p inside the grand space are exactly those
    whose tail goes to 0. On a finite space this happens for every ``f`` as
    soon as ``theta > 0``.
    """
    v = as_function(f, space)
    t = np.asarray(tail, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("tail must be a nonempty 1-d sequence")
    if np.any(t <= 0) or np.any(t > params.p - 1):
        raise DomainError("tail values must lie in (0, p-1]")
    if np.any(np.diff(t) >= 0):
        raise DomainError("tail values must be strictly decreasing")
    fn = _phi_fn(v, params, space)
    return np.array([fn(float(e)) for e in t])


def embedding_constant(params: ExponentParams) -> float:
    """``(p-1)^theta``, the constant in ``||f||_{p),theta} <= C ||f||_p`` on probability spaces."""
    return math.pow(params.p - 1.0, params.theta)
