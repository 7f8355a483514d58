import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grand_lebesgue import (DomainError, ExponentParams, GroupStructure,
                            UnsupportedGroupError, convolve, convolve_fft,
                            fejer_family, fejer_kernel, grand_norm, haar_space,
                            lp_norm, translate, unit)
from grand_lebesgue.group_algebra import default_fejer_orders

GROUPS = ["Z1", "Z2", "Z8", "Z2xZ3", "Z4xZ4", "Z3xZ2xZ2"]


def brute_convolve(f, g, factors):
    """Oracle: loop over multi-indices with explicit modular subtraction."""
    elems = list(itertools.product(*[range(n) for n in factors]))
    index = {e: i for i, e in enumerate(elems)}
    out = np.zeros(len(elems))
    for x in elems:
        for y in elems:
            d = tuple((a - b) % n for a, b, n in zip(x, y, factors))
            out[index[x]] += f[index[y]] * g[index[d]]
    return out / len(elems)


def test_parse_and_str():
    g = GroupStructure.parse("Z2xZ3")
    assert g.factors == (2, 3) and g.order == 6 and str(g) == "Z2xZ3"
    assert GroupStructure.parse("Z8").is_cyclic
    assert GroupStructure.parse("Z2 × Z2").order == 4
    for bad in ("", "Q8", "Z2x", "Z0"):
        with pytest.raises(ValueError):
            GroupStructure.parse(bad)


@pytest.mark.parametrize("name", GROUPS)
def test_index_bijection_and_arithmetic(name):
    g = GroupStructure.parse(name)
    assert [g.from_multi(g.to_multi(x)) for x in range(g.order)] == list(range(g.order))
    for x in range(g.order):
        assert g.add(x, g.neg(x)) == 0
        for y in range(g.order):
            assert g.subtraction_table[x, y] == g.add(x, g.neg(y))


def test_haar_space():
    assert haar_space(GroupStructure.cyclic(4)).weights.tolist() == [0.25] * 4
    sp = haar_space(GroupStructure.parse("Z2xZ3"))
    assert sp.size == 6 and np.allclose(sp.weights, 1 / 6) and sp.is_probability
    assert haar_space(GroupStructure.cyclic(1)).weights.tolist() == [1.0]


@pytest.mark.parametrize("name", GROUPS)
def test_convolve_matches_brute_force(name, rng):
    g = GroupStructure.parse(name)
    for _ in range(5):
        a, b = rng.normal(size=(2, g.order))
        expected = brute_convolve(a, b, g.factors)
        np.testing.assert_allclose(convolve(a, b, g), expected, atol=1e-13)
        assert np.max(np.abs(convolve_fft(a, b, g) - expected)) <= 1e-9


def test_convolve_examples(rng):
    z2 = GroupStructure.cyclic(2)
    np.testing.assert_allclose(convolve([1, 0], [0, 1], z2), [0, 0.5])
    for name in GROUPS:
        g = GroupStructure.parse(name)
        one = np.ones(g.order)
        np.testing.assert_allclose(convolve(one, one, g), one)
        np.testing.assert_allclose(convolve_fft(one, one, g), one, atol=1e-12)
        f = rng.normal(size=g.order)
        np.testing.assert_allclose(convolve(f, unit(g), g), f, atol=1e-14)
        np.testing.assert_allclose(convolve_fft(f, unit(g), g), f, atol=1e-9)


def test_fft_agrees_on_z8(rng):
    g = GroupStructure.cyclic(8)
    for _ in range(100):
        a, b = rng.uniform(-1, 1, (2, 8))
        assert np.max(np.abs(convolve_fft(a, b, g) - convolve(a, b, g))) <= 1e-9


def test_translate(rng):
    g = GroupStructure.parse("Z3xZ4")
    sp = haar_space(g)
    f = rng.normal(size=12)
    np.testing.assert_array_equal(translate(f, 0, g), f)
    for x in range(12):
        np.testing.assert_array_equal(translate(translate(f, x, g), g.neg(x), g), f)
        assert lp_norm(translate(f, x, g), 2.5, sp) == pytest.approx(lp_norm(f, 2.5, sp), rel=1e-14)
        shifted = translate(f, x, g)
        assert all(shifted[g.add(y, x)] == f[y] for y in range(12))
    with pytest.raises(DomainError):
        translate(f, 12, g)


def test_fejer_kernels():
    np.testing.assert_allclose(fejer_kernel(16, 1), np.ones(16), rtol=1e-14)
    for n in range(2, 65):
        for m in range(1, n):
            k = fejer_kernel(n, m)
            assert k.min() >= 0
            assert abs(k.mean() - 1) <= 1e-12
    with pytest.raises(DomainError):
        fejer_kernel(8, 8)
    with pytest.raises(UnsupportedGroupError):
        fejer_family(GroupStructure.parse("Z2xZ2"))
    assert default_fejer_orders(64) == [1, 2, 4, 8, 16, 32, 63]
    assert default_fejer_orders(2) == [1]


def test_fejer_fourier_multiplier():
    """The kernel of order m multiplies frequency k by (1 - |k|/m)+ (no aliasing for 2m <= n)."""
    n, m = 32, 8
    coef = np.fft.fft(fejer_kernel(n, m)).real / n
    k = np.minimum(np.arange(n), n - np.arange(n))
    np.testing.assert_allclose(coef, np.clip(1 - k / m, 0, None), atol=1e-12)


def test_fejer_convergence_trend():
    g = GroupStructure.cyclic(64)
    f = np.sin(2 * np.pi * np.arange(64) / 64) + 0.3 * np.cos(6 * np.pi * np.arange(64) / 64)
    fam = fejer_family(g, [4, 8, 16, 32, 63])
    err = [lp_norm(convolve(e, f, g) - f, 2, haar_space(g)) for e in fam]
    assert all(a > b for a, b in zip(err, err[1:]))


pairs = st.integers(0, 2**32 - 1)


@given(pairs, st.sampled_from([4, 7, 16, 64]))
def test_commutative_associative(seed, n):
    rng = np.random.default_rng(seed)
    g = GroupStructure.cyclic(n)
    a, b, c = rng.uniform(-1, 1, (3, n))
    np.testing.assert_allclose(convolve(a, b, g), convolve(b, a, g), atol=1e-9)
    np.testing.assert_allclose(convolve(convolve(a, b, g), c, g),
                               convolve(a, convolve(b, c, g), g), atol=1e-9)


@given(pairs, st.sampled_from([4, 16, 64]), st.sampled_from([1, 1.5, 2, 3]))
def test_young_l1_module(seed, n, q):
    rng = np.random.default_rng(seed)
    g = GroupStructure.cyclic(n)
    sp = haar_space(g)
    a, b = rng.uniform(-1, 1, (2, n))
    assert lp_norm(convolve(a, b, g), q, sp) <= lp_norm(a, 1, sp) * lp_norm(b, q, sp) + 1e-9


@given(pairs, st.sampled_from([8, 16, 64]),
       st.sampled_from([(1.5, 0.0), (2.0, 0.0), (3.0, 0.0), (2.0, 1.0), (2.0, 2.0),
                        (3.0, 1.0), (3.0, 2.0)]))
def test_grand_submultiplicative_where_it_holds(seed, n, pt):
    rng = np.random.default_rng(seed)
    g = GroupStructure.cyclic(n)
    sp = haar_space(g)
    params = ExponentParams(*pt)
    a, b = rng.uniform(-1, 1, (2, n))
    assert (grand_norm(convolve(a, b, g), params, sp)
            <= grand_norm(a, params, sp) * grand_norm(b, params, sp) + 1e-9)


@pytest.mark.parametrize("theta", [1.0, 2.0])
def test_grand_submultiplicativity_fails_for_small_p(theta):
    """For p < 2 the weight eps^(theta/(p-eps)) stays below 1 and constants break the bound."""
    g = GroupStructure.cyclic(8)
    sp = haar_space(g)
    params = ExponentParams(1.5, theta)
    one = np.ones(8)
    lhs = grand_norm(convolve(one, one, g), params, sp)
    assert lhs == pytest.approx(0.5 ** theta)
    assert lhs > grand_norm(one, params, sp) ** 2 + 1e-3
    # the L1-module form survives: ||f*g|| <= (p-1)^-theta ||f|| ||g||
    assert lhs <= 0.5 ** -theta * grand_norm(one, params, sp) ** 2 + 1e-12
