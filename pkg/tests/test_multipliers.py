import numpy as np
import pytest

from grand_lebesgue import (ApproximateIdentityFamily, ConvolutionOperator,
                            ExponentParams, GrandNorm, GroupStructure, LpNorm,
                            SmallNorm, SmallUpperNorm, apply,
                            approx_identity_convergence, commutation_residual,
                            convolve, factorization_density_check, fejer_family,
                            grand_norm, haar_space, lp_norm, module_inequality_check,
                            multiplier_ratio_report, operator_norm_l1_to,
                            parse_selector, random_search_lower_bound,
                            relative_completion_norm, small_norm_estimate, unit)
from grand_lebesgue.measure_space import INF

Z8 = GroupStructure.cyclic(8)
Z16 = GroupStructure.cyclic(16)
P21 = ExponentParams(2, 1)


def test_apply_examples(rng):
    f = rng.normal(size=8)
    np.testing.assert_allclose(apply(ConvolutionOperator(unit(Z8), Z8), f), f, atol=1e-14)
    np.testing.assert_allclose(apply(ConvolutionOperator(np.ones(8), Z8), f), np.full(8, f.mean()))
    T = ConvolutionOperator(rng.normal(size=8), Z8)
    for _ in range(20):
        a, b = rng.normal(size=(2, 8))
        np.testing.assert_allclose(T(convolve(a, b, Z8)), convolve(a, T(b), Z8), atol=1e-9)


def test_commutation_residual(rng):
    T = ConvolutionOperator(rng.normal(size=8), Z8)
    a, b = rng.normal(size=(2, 8))
    assert commutation_residual(T, a, b) <= 1e-9
    assert commutation_residual(ConvolutionOperator(unit(Z8), Z8), a, b) <= 1e-14
    assert commutation_residual(T, np.zeros(8), b) == 0
    for _ in range(200):
        n = int(rng.integers(1, 65))
        g = GroupStructure.cyclic(n)
        T = ConvolutionOperator(rng.uniform(-1, 1, n), g)
        assert commutation_residual(T, *rng.uniform(-1, 1, (2, n)), norm=GrandNorm(P21)) <= 1e-9


def test_operator_norm_examples(rng):
    sp = haar_space(Z8)
    assert operator_norm_l1_to(ConvolutionOperator(np.ones(8), Z8), LpNorm(2)).value == pytest.approx(1)
    assert operator_norm_l1_to(ConvolutionOperator(unit(Z8), Z8), LpNorm(1)).value == pytest.approx(1)
    h = rng.normal(size=8)
    rep = operator_norm_l1_to(ConvolutionOperator(h, Z8), GrandNorm(P21))
    assert rep.method == "extreme_point"
    assert abs(rep.value - grand_norm(h, P21, sp)) <= 1e-9
    # the stored value is reproducible from the witness
    image = ConvolutionOperator(h, Z8)(rep.witness)
    assert abs(rep.value - grand_norm(image, P21, sp) / lp_norm(rep.witness, 1, sp)) <= 1e-9


def test_extreme_point_dominates_random_search(rng):
    for q in (1, 2, 3, INF):
        h = rng.uniform(-1, 1, 16)
        T = ConvolutionOperator(h, Z16)
        exact = operator_norm_l1_to(T, LpNorm(q)).value
        assert exact == pytest.approx(lp_norm(h, q, haar_space(Z16)), abs=1e-9)
        assert random_search_lower_bound(T, LpNorm(q), 200, rng).value <= exact + 1e-9


def test_operator_norm_small_codomain_bracket(rng):
    h = rng.uniform(-1, 1, 8)
    rep = operator_norm_l1_to(ConvolutionOperator(h, Z8), SmallNorm(P21))
    est = small_norm_estimate(h, P21, haar_space(Z8))
    assert rep.bracket.lower == pytest.approx(est.lower) and rep.bracket.upper == pytest.approx(est.upper)
    assert rep.value == pytest.approx(est.midpoint)


def test_ratio_report(rng):
    rep = multiplier_ratio_report(np.ones(8), P21, Z8)
    assert rep["op_norm_bracket"] == pytest.approx([1, 1])
    assert rep["grand_norm_value"] == pytest.approx(1)
    assert rep["ratios"]["lower"] == pytest.approx(1) and rep["ratios"]["upper"] == pytest.approx(1)
    zero = multiplier_ratio_report(np.zeros(8), P21, Z8)
    assert zero["ratios"] == {"lower": None, "upper": None}
    assert zero["grand_norm_value"] == 0 and zero["op_norm_bracket"] == [0, 0]
    rand = multiplier_ratio_report(rng.uniform(-1, 1, 16), P21, Z16)
    assert all(0 < r < np.inf for r in rand["ratios"].values())


def test_module_inequality_examples(rng):
    sp = haar_space(Z16)
    g = rng.uniform(-1, 1, 16)
    r = module_inequality_check(unit(Z16), g, P21, sp, Z16)
    assert r["lhs_upper"] == pytest.approx(r["rhs"], rel=1e-12) and r["holds"]
    r = module_inequality_check(np.ones(16), np.ones(16), P21, sp, Z16)
    assert r["lhs_upper"] == pytest.approx(1) and r["rhs"] == pytest.approx(1) and r["holds"]
    for _ in range(50):
        f, g = rng.uniform(-1, 1, (2, 16))
        assert module_inequality_check(f, g, P21, sp, Z16)["holds"]


def test_approx_identity_convergence():
    g = GroupStructure.cyclic(64)
    fam = fejer_family(g)
    assert approx_identity_convergence(fam, np.full(64, 2.5)).max() < 1e-12
    f = np.cos(2 * np.pi * np.arange(64) / 64)
    seq = approx_identity_convergence(fam, f, LpNorm(2))
    assert np.all(np.diff(seq) < 0)
    # a pure first harmonic is damped by exactly 1 - 1/m
    np.testing.assert_allclose(seq, np.sqrt(0.5) / np.array(fam.labels), rtol=1e-10)
    unit_fam = ApproximateIdentityFamily.unit_family(GroupStructure.cyclic(8))
    assert approx_identity_convergence(unit_fam, np.arange(8.0)).tolist() == pytest.approx([0])


def test_factorization_density(rng):
    g = GroupStructure.cyclic(32)
    rep = factorization_density_check(g, P21, 5, rng)
    assert rep["holds"] and all(r[-1] < r[0] for r in rep["residuals"])
    const = factorization_density_check(g, P21, 1, rng, fejer_family(g))
    assert const["holds"]
    unit_fam = ApproximateIdentityFamily.unit_family(g)
    single = factorization_density_check(g, P21, 3, rng, unit_fam)
    assert all(r == pytest.approx([0], abs=1e-12) for r in single["residuals"])


def test_relative_completion_norm(rng):
    fam = fejer_family(Z16)
    sp = haar_space(Z16)
    assert relative_completion_norm(np.full(16, -3.0), fam, GrandNorm(P21)) == pytest.approx(3)
    assert relative_completion_norm(np.zeros(16), fam, SmallUpperNorm(P21)) == 0
    for a_norm in (GrandNorm(P21), SmallUpperNorm(P21), LpNorm(2)):
        for _ in range(10):
            f, g = rng.uniform(-1, 1, (2, 16))
            lhs = relative_completion_norm(convolve(f, g, Z16), fam, a_norm)
            assert lhs <= relative_completion_norm(f, fam, a_norm) * lp_norm(g, 1, sp) + 1e-9
            assert relative_completion_norm(f, fam, a_norm) <= a_norm(f, sp) + 1e-9
    with pytest.raises(ValueError):
        relative_completion_norm(np.ones(16), ApproximateIdentityFamily((), 1.0, Z16), LpNorm(2))


def test_restriction_to_vanishing_tail_functions(rng):
    # on a finite space every function has a vanishing tail once theta > 0
    h = rng.normal(size=16)
    T = ConvolutionOperator(h, Z16)
    for _ in range(10):
        f = rng.normal(size=16)
        assert np.max(np.abs(T(f) - convolve(f, h, Z16))) <= 1e-12


def test_parse_selector():
    assert parse_selector("lp:2") == LpNorm(2.0)
    assert parse_selector("lp:inf") == LpNorm(INF)
    assert parse_selector("grand:3,2") == GrandNorm(ExponentParams(3, 2))
    assert isinstance(parse_selector("small-upper:2,1"), SmallUpperNorm)
    assert isinstance(parse_selector("small:2,1"), SmallNorm)
    with pytest.raises(ValueError):
        parse_selector("sobolev:2,1")
