"""Seeded verification suites for the norm, algebra, module and multiplier inequalities.

Every check yields one :class:`CheckResult`. ``margin`` is the smallest slack
``rhs + tol - lhs`` over all trials (negative means a violation) and
``witness`` names the trial attaining it. Report-only checks carry
``passed = None`` and never fail a run.
"""

from __future__ import annotations

import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

import numpy as np

from .grand_norm import embedding_constant, grand_norm, vanishing_tail
from .group_algebra import (ApproximateIdentityFamily, GroupStructure, convolve,
                            convolve_fft, fejer_family, haar_space)
from .measure_space import (EpsilonGrid, ExponentParams, conjugate_exponent,
                            integrate_product, lp_norm)
from .multipliers import (ConvolutionOperator, approx_identity_convergence,
                          commutation_residual, factorization_density_check,
                          module_inequality_check, multiplier_ratio_report,
                          operator_norm_l1_to, random_search_lower_bound,
                          relative_completion_norm)
from .norms import GrandNorm, LpNorm, SmallUpperNorm
from .small_norm import (associate_lower_bound, small_norm_estimate,
                         small_norm_upper)

SUITES = ("norm_axioms", "banach_algebra", "module_l1", "approx_identity",
          "multipliers", "sandwich")


@dataclass
class CheckResult:
    check: str
    params: dict
    witness: Any
    margin: Optional[float]
    passed: Optional[bool]
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"check": self.check, "params": self.params, "witness": self.witness,
               "margin": _finite_or_none(self.margin), "pass": self.passed}
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)


def _finite_or_none(x):
    if x is None or not math.isfinite(x):
        return None
    return x


@dataclass(frozen=True)
class SuiteConfig:
    group: GroupStructure
    params: ExponentParams
    trials: int = 100
    seed: int = 0
    threads: int = 1

    @property
    def space(self):
        return haar_space(self.group)

    def rng(self, check: str, trial: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(check.encode()), trial])

    def describe(self, **more) -> dict:
        d = {"group": str(self.group), "p": self.params.p,
             "theta": self.params.theta, "trials": self.trials, "seed": self.seed}
        d.update(more)
        return d


def threads_from_env(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get("GLL_THREADS", default)))
    except ValueError:
        return default


def _trials(cfg: SuiteConfig, check: str, fn: Callable[[np.random.Generator], tuple],
            trials: Optional[int] = None) -> list:
    """Run ``fn`` once per trial with its own seeded generator, results in trial order."""
    n = cfg.trials if trials is None else trials
    rngs = [cfg.rng(check, t) for t in range(n)]
    if cfg.threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(fn, rngs))
    return [fn(r) for r in rngs]


def _inequality(cfg: SuiteConfig, check: str, fn, tol: float, trials=None,
                **params) -> CheckResult:
    """``fn(rng) -> (lhs, rhs)``; passes when ``lhs <= rhs + tol`` for every trial."""
    pairs = _trials(cfg, check, fn, trials)
    if not pairs:
        return CheckResult(check, cfg.describe(tol=tol, **params), None, None, True)
    margins = [rhs + tol - lhs for lhs, rhs in pairs]
    worst = int(np.argmin(margins))
    return CheckResult(check, cfg.describe(tol=tol, **params), {"trial": worst},
                       float(margins[worst]), bool(margins[worst] >= 0))


def _rand(rng, n):
    return rng.uniform(-1.0, 1.0, n)


def _family(group: GroupStructure) -> ApproximateIdentityFamily:
    if group.is_cyclic and group.order > 1:
        return fejer_family(group)
    return ApproximateIdentityFamily.unit_family(group)


# -- suites --------------------------------------------------------------------

def suite_norm_axioms(cfg: SuiteConfig) -> Iterator[CheckResult]:
    sp, n, pr = cfg.space, cfg.group.order, cfg.params

    def lp_homog(rng):
        f, c, q = _rand(rng, n), rng.normal() * 10, rng.choice([1, 1.5, 2, 3])
        base = abs(c) * lp_norm(f, q, sp)
        return abs(lp_norm(c * f, q, sp) - base), 1e-12 * max(base, 1e-300)
    yield _inequality(cfg, "lp_homogeneity", lp_homog, 0.0)

    for q in (1, 1.5, 2, 3):
        def tri(rng, q=q):
            f, g = _rand(rng, n), _rand(rng, n)
            return lp_norm(f + g, q, sp), lp_norm(f, q, sp) + lp_norm(g, q, sp)
        yield _inequality(cfg, "lp_triangle", tri, 1e-12, q=q)

    qs = (1, 1.25, 1.5, 2, 3, 5, 8)

    def mono(rng):
        f = _rand(rng, n)
        vals = [lp_norm(f, q, sp) for q in qs]
        return max(a - b for a, b in zip(vals, vals[1:])), 0.0
    yield _inequality(cfg, "lp_monotone_in_q", mono, 1e-12)

    def holder(rng):
        f, g, q = _rand(rng, n), _rand(rng, n), rng.choice([1.5, 2, 3])
        return (abs(integrate_product(f, g, sp)),
                lp_norm(f, q, sp) * lp_norm(g, conjugate_exponent(q), sp))
    yield _inequality(cfg, "holder", holder, 1e-12)

    def g_homog(rng):
        f, c = _rand(rng, n), rng.normal() * 10
        base = abs(c) * grand_norm(f, pr, sp)
        return abs(grand_norm(c * f, pr, sp) - base), 1e-12 * max(base, 1e-300)
    yield _inequality(cfg, "grand_homogeneity", g_homog, 0.0)

    def g_tri(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        return grand_norm(f + g, pr, sp), grand_norm(f, pr, sp) + grand_norm(g, pr, sp)
    yield _inequality(cfg, "grand_triangle", g_tri, 1e-9)

    def g_mono(rng):
        g = _rand(rng, n)
        f = g * rng.uniform(0, 1, n)
        return grand_norm(f, pr, sp), grand_norm(g, pr, sp)
    yield _inequality(cfg, "grand_lattice_monotone", g_mono, 1e-12)

    def g_def(rng):
        f = _rand(rng, n)
        eps = pr.epsilons()
        w = np.exp(pr.theta * np.log(eps) / (pr.p - eps))
        prof = max(w[i] * lp_norm(f, pr.p - eps[i], sp) for i in range(eps.size))
        return prof, grand_norm(f, pr, sp)
    yield _inequality(cfg, "grand_definition_consistency", g_def, 1e-12,
                      trials=min(cfg.trials, 20))

    p0 = ExponentParams(pr.p, 0.0, pr.grid)

    def red(rng):
        f = _rand(rng, n)
        return abs(grand_norm(f, p0, sp) - lp_norm(f, pr.p, sp)), 0.0
    yield _inequality(cfg, "grand_theta0_reduction", red, 1e-6)

    def emb(rng):
        f = _rand(rng, n)
        return grand_norm(f, pr, sp), embedding_constant(pr) * lp_norm(f, pr.p, sp)
    yield _inequality(cfg, "grand_embedding", emb, 1e-9)

    coarse = ExponentParams(pr.p, pr.theta, EpsilonGrid(count=max(pr.grid.count // 2, 2),
                                                        min_fraction=pr.grid.min_fraction,
                                                        spacing=pr.grid.spacing))

    def refine(rng):
        f = _rand(rng, n)
        return grand_norm(f, coarse, sp), grand_norm(f, pr, sp)
    yield _inequality(cfg, "grand_grid_refinement", refine, 1e-12)


def suite_banach_algebra(cfg: SuiteConfig) -> Iterator[CheckResult]:
    grp, sp, n, pr = cfg.group, cfg.space, cfg.group.order, cfg.params

    def sub(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        return (grand_norm(convolve(f, g, grp), pr, sp),
                grand_norm(f, pr, sp) * grand_norm(g, pr, sp))
    yield _inequality(cfg, "grand_submultiplicative", sub, 1e-9)

    tail = [10.0 ** -k * (pr.p - 1) for k in range(1, 7)]

    def tail_dom(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        lhs = vanishing_tail(convolve(f, g, grp), pr, sp, tail)
        w = np.exp(pr.theta * np.log(tail) / (pr.p - np.asarray(tail)))
        rhs = [wi * lp_norm(f, pr.p - e, sp) * lp_norm(g, pr.p - e, sp)
               for wi, e in zip(w, tail)]
        return float(np.max(lhs - np.asarray(rhs))), 0.0
    yield _inequality(cfg, "closure_tail_domination", tail_dom, 1e-12)

    if pr.theta > 0:
        def tail_vanish(rng):
            f, g = _rand(rng, n), _rand(rng, n)
            t = vanishing_tail(convolve(f, g, grp), pr, sp, tail)
            bound = tail[-1] ** (pr.theta / (pr.p - tail[-1])) * lp_norm(
                convolve(f, g, grp), pr.p, sp)
            return float(t[-1]), bound
        yield _inequality(cfg, "closure_tail_vanishes", tail_vanish, 1e-12)


def suite_module_l1(cfg: SuiteConfig) -> Iterator[CheckResult]:
    grp, sp, n, pr = cfg.group, cfg.space, cfg.group.order, cfg.params
    for q in (1, 1.5, 2, 3):
        def young(rng, q=q):
            f, g = _rand(rng, n), _rand(rng, n)
            return lp_norm(convolve(f, g, grp), q, sp), lp_norm(f, 1, sp) * lp_norm(g, q, sp)
        yield _inequality(cfg, "young_l1_module", young, 1e-9, q=q)

    def mod(rng):
        r = module_inequality_check(_rand(rng, n), _rand(rng, n), pr, sp, grp)
        return r["lhs_upper"], r["rhs"]
    yield _inequality(cfg, "small_module_induced_decomposition", mod, 1e-9)

    fam = _family(grp)
    a_norm = SmallUpperNorm(pr)

    def rc(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        return (relative_completion_norm(convolve(f, g, grp), fam, a_norm),
                relative_completion_norm(f, fam, a_norm) * lp_norm(g, 1, sp))
    yield _inequality(cfg, "relative_completion_l1_module", rc, 1e-9,
                      trials=min(cfg.trials, 50))

    def rc_dom(rng):
        f = _rand(rng, n)
        return relative_completion_norm(f, fam, a_norm), a_norm(f, sp)
    yield _inequality(cfg, "relative_completion_dominated", rc_dom, 1e-9,
                      trials=min(cfg.trials, 50))


def cosine(group: GroupStructure, k: int = 1) -> np.ndarray:
    j = np.arange(group.order)
    return np.cos(2 * np.pi * k * j / group.order)


def suite_approx_identity(cfg: SuiteConfig) -> Iterator[CheckResult]:
    grp, sp, pr = cfg.group, cfg.space, cfg.params
    fam = _family(grp)
    params = cfg.describe(orders=list(fam.labels))
    l1_err = [abs(lp_norm(e, 1, sp) - 1.0) for e in fam.members]
    worst = int(np.argmax(l1_err))
    yield CheckResult("fejer_l1_norm", params, {"member": fam.labels[worst]},
                      1e-12 - l1_err[worst], bool(l1_err[worst] <= 1e-12))
    neg = min(float(e.min()) for e in fam.members)
    yield CheckResult("fejer_nonnegative", params, None, neg, bool(neg >= 0))

    f = cosine(grp)
    for name, norm in (("lp2", LpNorm(2)), ("small_upper", SmallUpperNorm(pr))):
        seq = approx_identity_convergence(fam, f, norm)
        steps = np.diff(seq)
        margin = float(-steps.max()) if steps.size else 0.0
        yield CheckResult("approx_identity_nonincreasing", {**params, "norm": name},
                          {"sequence": seq.tolist()}, margin + 1e-12,
                          bool(margin + 1e-12 >= 0))
        ratio = float(seq[-1] / seq[0]) if seq[0] > 0 else None
        yield CheckResult("approx_identity_decay_ratio", {**params, "norm": name},
                          {"final_over_first": ratio}, None, None)

    rep = factorization_density_check(grp, pr, min(cfg.trials, 20),
                                      cfg.rng("factorization_density"), fam)
    yield CheckResult("factorization_density", params,
                      {"nonincreasing": rep["nonincreasing"]}, None,
                      bool(rep["last_below_first"] or len(fam) == 1))


def suite_multipliers(cfg: SuiteConfig) -> Iterator[CheckResult]:
    grp, sp, n, pr = cfg.group, cfg.space, cfg.group.order, cfg.params

    def comm(rng):
        T = ConvolutionOperator(_rand(rng, n), grp)
        return commutation_residual(T, _rand(rng, n), _rand(rng, n)), 0.0
    yield _inequality(cfg, "commutation_residual", comm, 1e-9)

    for name, norm in (("lp2", LpNorm(2)), ("grand", GrandNorm(pr))):
        def ident(rng, norm=norm):
            h = _rand(rng, n)
            rep = operator_norm_l1_to(ConvolutionOperator(h, grp), norm)
            return abs(rep.value - norm(h, sp)), 0.0
        yield _inequality(cfg, "extreme_point_identity", ident, 1e-9, norm=name)

    def search(rng):
        T = ConvolutionOperator(_rand(rng, n), grp)
        norm = GrandNorm(pr)
        return (random_search_lower_bound(T, norm, 10, rng).value,
                operator_norm_l1_to(T, norm).value)
    yield _inequality(cfg, "random_search_below_extreme_point", search, 1e-9,
                      trials=min(cfg.trials, 50))

    def fft(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        return float(np.max(np.abs(convolve_fft(f, g, grp) - convolve(f, g, grp)))), 0.0
    yield _inequality(cfg, "convolve_fft_agreement", fft, 1e-9)

    def restrict(rng):
        h, f = _rand(rng, n), _rand(rng, n)
        T = ConvolutionOperator(h, grp)
        return float(np.max(np.abs(T(f) - convolve(f, h, grp)))), 0.0
    yield _inequality(cfg, "restriction_consistency", restrict, 1e-12)

    rng = cfg.rng("multiplier_ratio")
    rep = multiplier_ratio_report(_rand(rng, n), pr, grp)
    yield CheckResult("multiplier_ratio_report", cfg.describe(), rep["ratios"],
                      None, None)


def suite_sandwich(cfg: SuiteConfig) -> Iterator[CheckResult]:
    sp, n, pr = cfg.space, cfg.group.order, cfg.params
    gaps = []

    def sand(rng):
        g = _rand(rng, n)
        lo = associate_lower_bound(g, pr, sp)
        up = small_norm_upper(g, pr, sp)
        gaps.append(up / lo if lo > 0 else (1.0 if up == 0 else math.inf))
        return lo, up
    cfg_seq = SuiteConfig(cfg.group, cfg.params, cfg.trials, cfg.seed, 1)
    yield _inequality(cfg_seq, "sandwich", sand, 1e-9)
    yield CheckResult("sandwich_max_gap_ratio", cfg.describe(), None,
                      None, None, {"max_gap_ratio": _finite_or_none(max(gaps, default=1.0))})

    def pair(rng):
        f, g = _rand(rng, n), _rand(rng, n)
        return (abs(integrate_product(f, g, sp)),
                grand_norm(f, pr, sp) * small_norm_upper(g, pr, sp))
    yield _inequality(cfg, "holder_pairing", pair, 1e-9)

    one = np.ones(n)
    est = small_norm_estimate(one, pr, sp)
    tight = abs(integrate_product(one, one, sp) - grand_norm(one, pr, sp) * est.upper)
    yield CheckResult("constants_tight", cfg.describe(),
                      {"lower": est.lower, "upper": est.upper},
                      1e-6 - max(tight, est.upper - est.lower),
                      bool(max(tight, est.upper - est.lower) <= 1e-6))

    p0 = ExponentParams(pr.p, 0.0, pr.grid)

    def red(rng):
        g = _rand(rng, n)
        e = small_norm_estimate(g, p0, sp)
        ref = lp_norm(g, conjugate_exponent(pr.p), sp)
        return max(e.lower - ref, ref - e.upper), 0.0
    yield _inequality(cfg, "small_theta0_reduction", red, 1e-6,
                      trials=min(cfg.trials, 50))


SUITE_FUNCS = {
    "norm_axioms": suite_norm_axioms,
    "banach_algebra": suite_banach_algebra,
    "module_l1": suite_module_l1,
    "approx_identity": suite_approx_identity,
    "multipliers": suite_multipliers,
    "sandwich": suite_sandwich,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[CheckResult]:
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, cfg)]
    try:
        fn = SUITE_FUNCS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    return [CheckResult(f"{name}.{r.check}", r.params, r.witness, r.margin,
                        r.passed, r.extra) for r in fn(cfg)]


def all_passed(results) -> bool:
    return all(r.passed is not False for r in results)
