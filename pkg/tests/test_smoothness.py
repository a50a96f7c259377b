import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from fslab import (GridFunction, ResolutionWarning, UsageError, ball_means, iterated_difference,
                   make_bump, modulus, modulus_curve)
from fslab.smoothness import (ModulusTable, ball_means_stack, binomial_weights, lattice_shifts,
                              saturation_units)


def random_function(seed, dim=1, level=3, extent=1.0, radius=None):
    rng = np.random.default_rng(seed)
    g = GridFunction.zeros(dim, level, extent, radius or extent)
    R = g.support_radius
    return g.replace(rng.standard_normal(g.values.shape) * (g.radius_sq() < R * R))


def test_binomial_weights():
    assert binomial_weights(1) == [-1, 1]
    assert binomial_weights(3) == [-1, 3, -3, 1]
    assert sum(binomial_weights(4)) == 0
    with pytest.raises(UsageError):
        binomial_weights(0)


def test_lattice_shifts_half_and_order():
    full = lattice_shifts(2, 2.0)
    half = lattice_shifts(2, 2.0, half=True)
    assert len(full) == 13 and len(half) == 6
    sq = np.sum(full * full, axis=1)
    assert np.all(np.diff(sq) >= 0)
    # each pair {h, -h} represented once
    keys = {tuple(h) for h in half} | {tuple(-h) for h in half}
    assert keys == {tuple(h) for h in full if np.any(h)}


@given(st.integers(0, 10**6), st.integers(1, 4), st.sampled_from([1, 2]), st.integers(-3, 3), st.integers(-3, 3))
def test_iterated_difference_matches_binomial_sum(seed, r, dim, h0, h1):
    f = random_function(seed, dim=dim, level=2)
    h = (h0,) if dim == 1 else (h0, h1)
    g = iterated_difference(f, h, r)
    for idx in [(0,) * dim, (1,) * dim, (-4,) * dim, (4,) * dim]:
        assert oracles.lookup(g, idx) == oracles.difference_at(f, idx, h, r)


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(-3, 3))
def test_iterated_difference_recursion(seed, r, h):
    f = random_function(seed, level=3)
    # Delta^{r+1} = Delta^1 Delta^r on the padded full lattice
    from fslab.smoothness import full_difference
    a, _ = full_difference(f.values, (h,), r + 1)
    b, _ = full_difference(full_difference(f.values, (h,), r)[0], (h,), 1)
    assert np.allclose(a, b, rtol=0, atol=1e-12)


def interior(f, margin):
    x = f.axis()
    return np.abs(x) < margin


def test_difference_of_linear_function():
    f = make_bump(1, 4, 2, 1, "polynomial", degree=1)
    g = iterated_difference(f, (8,), 1)  # h delta = 0.5
    assert np.all(g.values[interior(f, 0.5)] == 0.5)


def test_second_difference_annihilates_constants():
    f = make_bump(1, 4, 2, 1, "polynomial", degree=0)
    g = iterated_difference(f, (3,), 2)
    assert np.all(g.values[interior(f, 1 - 6 / 16)] == 0.0)


def test_second_difference_of_square():
    f = make_bump(1, 4, 2, 1, "polynomial", degree=2)
    g = iterated_difference(f, (4,), 2)  # h delta = 0.25
    assert np.all(g.values[interior(f, 0.5)] == 2 * 0.25**2)


def test_difference_support_radius_is_window():
    f = make_bump(2, 3, 1, 0.5, "hat")
    g = iterated_difference(f, (1, 2), 2)
    assert g.support_radius >= f.extent


def test_hat_modulus():
    f = make_bump(1, 4, 2, 1, "hat")
    assert modulus(f, 0.25, math.inf, 1) == 0.25
    assert modulus(f, 0.25, math.inf, 1) == oracles.modulus(f, 0.25, math.inf, 1)


def test_modulus_below_resolution_is_flagged():
    f = make_bump(1, 4, 2, 1, "hat")
    with pytest.warns(ResolutionWarning):
        assert modulus(f, f.delta / 2, 2, 1) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        modulus(f, f.delta, 2, 1)


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0, math.inf]), st.integers(1, 3),
       st.sampled_from([1, 2]), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_modulus_matches_brute_force(seed, p, r, dim, t_units):
    level = 3 if dim == 1 else 2
    f = random_function(seed, dim=dim, level=level, radius=0.75)
    t = t_units * f.delta
    assert modulus(f, t, p, r) == pytest.approx(oracles.modulus(f, t, p, r), rel=1e-12)


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0, math.inf]), st.integers(1, 3))
def test_modulus_monotone_in_t(seed, p, r):
    f = random_function(seed, level=4)
    vals = [modulus(f, t, p, r) for t in (0.0625, 0.125, 0.25, 0.5, 1.0, 2.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_modulus_saturates_beyond_twice_support():
    f = make_bump(1, 4, 2, 0.5, "smooth_bump")
    assert saturation_units(f) == 16
    a = ModulusTable(f, 2, 2, 1.0)(1.0)
    b = oracles.modulus(f, 1.5, 2, 2)
    assert a == pytest.approx(b, rel=1e-12)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([1.0, 2.0, math.inf]), st.integers(1, 3))
def test_modulus_subadditive(s1, s2, p, r):
    f, g = random_function(s1), random_function(s2)
    t = 0.5
    assert modulus(f + g, t, p, r) <= (modulus(f, t, p, r) + modulus(g, t, p, r)) * (1 + 1e-12)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([0.5, 0.8]), st.integers(1, 2))
def test_modulus_p_subadditive(s1, s2, p, r):
    f, g = random_function(s1), random_function(s2)
    t = 0.5
    lhs = modulus(f + g, t, p, r) ** p
    assert lhs <= (modulus(f, t, p, r) ** p + modulus(g, t, p, r) ** p) * (1 + 1e-12)


def test_ball_means_hat_example():
    f = make_bump(1, 4, 2, 1, "hat")
    d = f.delta
    g = ball_means(f, 2 * d, 1.0, 1)
    centre = g.values[(g.npts - 1) // 2]
    assert centre == pytest.approx((2 * d + d + 0 + d + 2 * d) / 5, rel=1e-15)


def test_ball_means_zero_and_errors():
    z = GridFunction.zeros(1, 3, 1.0)
    assert np.all(ball_means(z, 0.25, 2, 2).values == 0.0)
    f = make_bump(1, 3, 1, 1, "hat")
    with pytest.raises(UsageError):
        ball_means(f, 0.25, math.inf, 1)
    with pytest.raises(UsageError):
        ball_means(f, f.delta / 2, 1, 1)


def test_ball_means_vanish_inside_constant_window():
    f = make_bump(1, 4, 2, 1, "polynomial", degree=0)
    g = ball_means(f, 0.125, 2.0, 2)
    assert np.all(g.values[interior(f, 1 - 2 * 0.125)] == 0.0)


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0]), st.integers(1, 3),
       st.sampled_from([1, 2]), st.sampled_from([1.0, 2.0, 2.5]))
def test_ball_means_match_brute_force(seed, p, r, dim, t_units):
    level = 3 if dim == 1 else 2
    f = random_function(seed, dim=dim, level=level, radius=0.75)
    t = t_units * f.delta
    g = ball_means(f, t, p, r)
    for idx in [(0,) * dim, (2,) * dim, (-3,) + (1,) * (dim - 1), (f.npts // 2,) * dim]:
        assert oracles.lookup(g, idx) == pytest.approx(oracles.ball_means_at(f, idx, t, p, r),
                                                       rel=1e-12, abs=1e-14)


def test_ball_means_stack_matches_single_radius():
    f = random_function(3, level=4)
    stack, pad = ball_means_stack(f, [0.5, 0.125, 0.25], 2.0, 2)
    for i, t in enumerate([0.5, 0.125, 0.25]):
        single = ball_means(f, t, 2.0, 2).values
        window = slice(pad, pad + f.npts)
        assert np.array_equal(stack[i][window], single)


def test_hat_modulus_curve():
    f = make_bump(1, 4, 2, 1, "hat")
    c = modulus_curve(f, math.inf, 1, 1, 3)
    assert c.radii == [0.125, 0.25, 0.5]
    assert c.values == [0.125, 0.25, 0.5]
    assert c.to_csv().splitlines()[0] == "t,omega"


@given(st.integers(0, 10**6), st.sampled_from([1.0, 2.0, math.inf]))
def test_modulus_curve_non_decreasing_in_t(seed, p):
    f = random_function(seed, level=4)
    c = modulus_curve(f, p, 2, -1, 4)
    assert c.radii == sorted(c.radii)
    assert all(b >= a for a, b in zip(c.values, c.values[1:]))


def test_zero_modulus_curve_and_errors():
    z = GridFunction.zeros(1, 3, 1.0)
    assert modulus_curve(z, 2, 1, 0, 3).values == [0.0] * 4
    with pytest.raises(UsageError):
        modulus_curve(z, 2, 1, 0, 4)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_polynomial_annihilation_interior(r):
    for d in range(r):
        f = make_bump(1, 6, 2, 1, "polynomial", degree=d)
        for p in (1.0, 2.0, math.inf):
            assert modulus(f, 0.25, p, r, interior=1.0) == 0.0
    f = make_bump(1, 6, 2, 1, "polynomial", degree=r)
    assert modulus(f, 0.25, 2.0, r, interior=1.0) > 0.0
