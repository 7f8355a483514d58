"""Convolution multipliers on finite abelian groups.

A multiplier is a bounded operator commuting with convolution,
``T(f*g) = f*T(g)``. On a finite group these are exactly the convolution
operators ``T_h f = f*h``. The helpers here measure commutation, operator
norms out of L^1, approximate-identity convergence and the relative
completion norm ``sup_alpha ||f*e_alpha||_A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from .grand_norm import grand_norm
from .group_algebra import (ApproximateIdentityFamily, GroupStructure, convolve,
                            fejer_family, haar_space, unit)
from .measure_space import (AlignmentError, ArrayLike, ExponentParams,
                            MeasureSpace, as_function, lp_norm)
from .norms import GrandNorm, LpNorm, SmallNorm
from .small_norm import (BRACKET_TOL, NormEstimate, _decomposition_cost,
                         best_decomposition, small_norm_estimate)

Norm = Callable[[np.ndarray, MeasureSpace], float]


@dataclass(frozen=True, eq=False)
class ConvolutionOperator:
    symbol: np.ndarray
    group: GroupStructure

    def __post_init__(self):
        object.__setattr__(self, "symbol", as_function(self.symbol, self.space))

    @property
    def space(self) -> MeasureSpace:
        return haar_space(self.group)

    def __call__(self, f: ArrayLike) -> np.ndarray:
        return convolve(f, self.symbol, self.group)


def apply(T: ConvolutionOperator, f: ArrayLike) -> np.ndarray:
    return T(f)


def commutation_residual(T: ConvolutionOperator, f: ArrayLike, g: ArrayLike,
                         norm: Norm = LpNorm(2)) -> float:
    """``||T(f*g) - f*T(g)||`` in the selected norm."""
    grp = T.group
    return norm(T(convolve(f, g, grp)) - convolve(f, T(g), grp), T.space)


@dataclass(frozen=True)
class OperatorNormReport:
    value: float
    method: str
    witness: np.ndarray
    bracket: Optional[NormEstimate] = None

    def to_dict(self) -> dict:
        out = {"value": self.value, "method": self.method,
               "witness": self.witness.tolist()}
        if self.bracket is not None:
            out["bracket"] = self.bracket.to_dict()
        return out


def operator_norm_l1_to(T: ConvolutionOperator, codomain: Norm) -> OperatorNormReport:
    """Exact norm of ``T: L^1 -> codomain``.

    The extreme points of the L^1 unit ball are ``+-order*delta_x``; their
    images are translates of the symbol, and every supported codomain norm is
    translation invariant on Haar space, so the norm is attained at
    ``order*delta_0``.
    """
    space = T.space
    witness = unit(T.group)
    image = T(witness)
    scale = lp_norm(witness, 1, space)
    if isinstance(codomain, SmallNorm):
        est = codomain.estimate(image, space)
        return OperatorNormReport(est.midpoint / scale, "extreme_point", witness,
                                  NormEstimate(est.lower / scale, est.upper / scale,
                                               est.lower_method, est.upper_method))
    return OperatorNormReport(codomain(image, space) / scale, "extreme_point", witness)


def random_search_lower_bound(T: ConvolutionOperator, codomain: Norm, trials: int,
                              rng: np.random.Generator) -> OperatorNormReport:
    """Largest ``||T f|| / ||f||_1`` over random inputs; never above the true norm."""
    space = T.space
    best, witness = 0.0, np.zeros(T.group.order)
    for _ in range(trials):
        f = rng.uniform(-1.0, 1.0, T.group.order)
        # sparse inputs move toward the extreme points
        f[rng.random(T.group.order) < rng.random()] = 0.0
        d = lp_norm(f, 1, space)
        if d == 0:
            continue
        r = codomain(T(f), space) / d
        if r > best:
            best, witness = r, f
    return OperatorNormReport(best, "random_search", witness)


def _ratio(a: float, b: float) -> Optional[float]:
    return a / b if b > 0 else None


def multiplier_ratio_report(h: ArrayLike, params: ExponentParams,
                            group: GroupStructure) -> dict[str, Any]:
    """Compare the L^1 -> small operator norm of ``T_h`` with ``||h||_{p),theta}``.

    Reported, not asserted; ratios are ``None`` when the grand norm vanishes.
    """
    T = ConvolutionOperator(h, group)
    rep = operator_norm_l1_to(T, SmallNorm(params))
    gn = grand_norm(T.symbol, params, T.space)
    small = small_norm_estimate(T.symbol, params, T.space)
    return {
        "op_norm_bracket": [rep.bracket.lower, rep.bracket.upper],
        "grand_norm_value": gn,
        "small_bracket": [small.lower, small.upper],
        "ratios": {"lower": _ratio(rep.bracket.lower, gn),
                   "upper": _ratio(rep.bracket.upper, gn)},
    }


def module_inequality_check(f: ArrayLike, g: ArrayLike, params: ExponentParams,
                            space: MeasureSpace, group: GroupStructure) -> dict[str, Any]:
    """Check the per-term module estimate for convolution by an L^1 function.

    ``g`` is decomposed by the best strategy; the induced parts ``f*g_k``
    decompose ``f*g`` and must cost at most ``||f||_1`` times as much.
    """
    if space.size != group.order:
        raise AlignmentError("space and group sizes differ")
    f = as_function(f, space)
    g = as_function(g, space)
    dec_cost, dec, method = best_decomposition(g, params, space)
    _, eps = _decomposition_cost(dec, params, space)
    induced = type(dec)([convolve(f, gk, group) for gk in dec.parts])
    induced_cost, _ = _decomposition_cost(induced, params, space, hints=eps)
    f1 = lp_norm(f, 1, space)
    rhs = f1 * dec_cost
    fg = convolve(f, g, group)
    head = small_norm_estimate(fg, params, space)
    return {
        "lhs_upper": induced_cost,
        "rhs": rhs,
        "holds": bool(induced_cost <= rhs + BRACKET_TOL),
        "decomposition_method": method,
        "headline": {"small_upper_fg": head.upper, "small_lower_fg": head.lower,
                     "l1_f_times_small_upper_g": rhs},
    }


def approx_identity_convergence(family: ApproximateIdentityFamily, f: ArrayLike,
                                norm: Norm = LpNorm(2)) -> np.ndarray:
    """``||e_alpha*f - f||`` along the family."""
    space = haar_space(family.group)
    f = as_function(f, space)
    return np.array([norm(convolve(e, f, family.group) - f, space)
                     for e in family.members])


def factorization_density_check(group: GroupStructure, params: ExponentParams,
                                samples: int, rng: np.random.Generator,
                                family: Optional[ApproximateIdentityFamily] = None
                                ) -> dict[str, Any]:
    """Grand-norm residuals ``||F_m*f - f||`` for random ``f``.

    ``F_m*f`` lies in the convolution product of the closure subspace with
    itself, so shrinking residuals show that products are dense.
    """
    if family is None:
        family = (fejer_family(group) if group.is_cyclic and group.order > 1
                  else ApproximateIdentityFamily.unit_family(group))
    norm = GrandNorm(params)
    residuals = []
    for _ in range(samples):
        f = rng.uniform(-1.0, 1.0, group.order)
        residuals.append(approx_identity_convergence(family, f, norm))
    last_below_first = all(r[-1] < r[0] or r[0] == 0 for r in residuals)
    nonincreasing = all(bool(np.all(np.diff(r) <= 1e-12)) for r in residuals)
    return {"orders": list(family.labels), "residuals": [r.tolist() for r in residuals],
            "last_below_first": last_below_first, "nonincreasing": nonincreasing,
            "holds": last_below_first}


def relative_completion_norm(f: ArrayLike, family: ApproximateIdentityFamily,
                             a_norm: Norm) -> float:
    """``max_alpha A-norm(f*e_alpha)`` over the family's members."""
    if len(family) == 0:
        raise ValueError("family must be nonempty")
    space = haar_space(family.group)
    f = as_function(f, space)
    return max(a_norm(convolve(f, e, family.group), space) for e in family.members)
