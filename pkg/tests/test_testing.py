import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hellsearch.models import CATALOG_NAMES, Sample, catalog_lookup, draw_sample
from hellsearch.testing import (
    GridSpec,
    TestValue,
    baraud_statistic,
    grid_epsilon,
    project_to_grid,
    test_T,
)

from oracles import MPMATH_TBAR, tbar_direct


def _point(model, rng):
    lo = np.asarray(model.theta_rect.lower)
    hi = np.asarray(model.theta_rect.upper)
    return lo + (hi - lo) * rng.random(model.dim)


def _near(model, theta, rng, scale=0.1):
    w = model.theta_rect.widths
    return model.theta_rect.clamp(theta + scale * w * rng.standard_normal(model.dim))


class TestStatistic:
    @pytest.mark.parametrize("key", list(MPMATH_TBAR))
    def test_mpmath_frozen(self, key):
        name, x, t, u = key
        v = baraud_statistic(catalog_lookup(name), t, u, Sample(x))
        assert v == pytest.approx(MPMATH_TBAR[key], abs=1e-10)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_definition_oracle(self, name):
        m = catalog_lookup(name)
        rng = np.random.default_rng(11)
        sample = draw_sample(m, m.reference_theta, 30, 5)
        for _ in range(3):
            t = _near(m, np.asarray(m.reference_theta), rng)
            u = _near(m, np.asarray(m.reference_theta), rng)
            assert baraud_statistic(m, t, u, sample) == pytest.approx(
                tbar_direct(name, sample.values, t, u), abs=1e-7)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_antisymmetry_bit_exact(self, name):
        m = catalog_lookup(name)
        rng = np.random.default_rng(12)
        sample = draw_sample(m, m.reference_theta, 20, 6)
        for _ in range(10):
            t, u = _point(m, rng), _point(m, rng)
            assert baraud_statistic(m, t, u, sample) == -baraud_statistic(m, u, t, sample)

    @given(t=st.floats(-3, 3), u=st.floats(-3, 3),
           xs=st.lists(st.floats(-6, 6), min_size=1, max_size=15))
    @settings(max_examples=60, deadline=None)
    def test_antisymmetry_hypothesis(self, t, u, xs):
        m = catalog_lookup("cauchy-loc")
        s = Sample(xs)
        assert baraud_statistic(m, t, u, s) == -baraud_statistic(m, u, t, s)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_equal_parameters_give_zero(self, name):
        m = catalog_lookup(name)
        s = draw_sample(m, m.reference_theta, 10, 1)
        assert baraud_statistic(m, m.reference_theta, m.reference_theta, s) == 0.0

    def test_bounded_by_two(self):
        # Each of the two terms is at most 1 in absolute value.
        m = catalog_lookup("gamma-2d")
        rng = np.random.default_rng(3)
        s = draw_sample(m, (2.0, 3.0), 50, 2)
        for _ in range(20):
            assert abs(baraud_statistic(m, _point(m, rng), _point(m, rng), s)) <= 2.0

    def test_sign_favours_true_parameter(self):
        m = catalog_lookup("gauss-loc")
        s = draw_sample(m, 1.0, 2000, 9)
        assert baraud_statistic(m, -1.0, 1.0, s) > 0
        assert baraud_statistic(m, 1.0, -1.0, s) < 0

    @pytest.mark.parametrize("name", ["gauss-loc", "cauchy-loc", "unif-loc",
                                      "sqrt-singular"])
    def test_translation_even_has_no_integral_term(self, name):
        m = catalog_lookup(name)
        s = Sample([0.1, -0.2, 0.45])
        g = m.density(0.0, s.values)
        gp = m.density(0.3, s.values)
        tot = g + gp
        emp = np.where(tot > 0, (np.sqrt(gp) - np.sqrt(g)) / np.sqrt(np.where(tot > 0, tot, 1)), 0)
        assert baraud_statistic(m, 0.0, 0.3, s) == pytest.approx(emp.mean(), abs=1e-15)


class TestGrid:
    def test_epsilon_formula(self):
        eps = grid_epsilon((1.0, 0.0), (0.25, 1.0), (2.0, 1.0), 100)
        assert eps[0] == pytest.approx(1.0 * (0.25 * 100) ** -0.5)
        assert eps[1] == 0.0

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            GridSpec((1.0,), (0.0,), (0.0,))
        with pytest.raises(ValueError):
            GridSpec((1.0, 1.0), (0.1,), (0.0,))
        with pytest.raises(ValueError):
            GridSpec((-1.0,), (0.1,), (0.0,))

    def test_for_model_origin(self):
        m = catalog_lookup("gauss-2d")
        g = GridSpec.for_model(m, 1.0, 100)
        assert g.origin == m.theta_rect.lower
        assert g.epsilon[0] == pytest.approx((m.constants.r_upper[0] * 100) ** -0.5)

    def test_theory_mode(self):
        assert GridSpec((1.0,), (0.1,), (0.0,)).theory_mode_ok(2.0)
        assert not GridSpec((0.0,), (0.0,), (0.0,)).theory_mode_ok(2.0)
        # t_j may not exceed d^(1/alpha_j).
        assert not GridSpec((1.5, 1.0), (0.1, 0.1), (0, 0)).theory_mode_ok((2.0, 2.0))
        assert GridSpec((1.4, 1.0), (0.1, 0.1), (0, 0)).theory_mode_ok((2.0, 2.0))

    @given(x=st.floats(-10, 10), eps=st.floats(1e-3, 2.0))
    @settings(max_examples=100, deadline=None)
    def test_projection_floor(self, x, eps):
        g = GridSpec((1.0,), (eps,), (-10.0,))
        p = project_to_grid(x, g)[0]
        k = (p + 10.0) / eps
        assert p <= x + 1e-9
        assert x - p < eps + 1e-9
        assert abs(k - round(k)) < 1e-6

    def test_identity_projection(self):
        np.testing.assert_array_equal(
            project_to_grid((0.123, 4.5), GridSpec.identity(2)), [0.123, 4.5])

    def test_test_uses_projections(self):
        m = catalog_lookup("gauss-loc")
        s = draw_sample(m, 0.0, 20, 3)
        g = GridSpec((1.0,), (0.5,), (-100.0,))
        tv = test_T(m, 0.3, 1.2, s, g)
        assert isinstance(tv, TestValue)
        assert tv.f_theta_used == (0.0,)
        assert tv.f_theta_prime_used == (1.0,)
        assert tv.value == baraud_statistic(m, 0.0, 1.0, s)

    def test_test_without_grid(self):
        m = catalog_lookup("gauss-2d")
        s = draw_sample(m, (0.0, 1.0), 20, 3)
        tv = test_T(m, (0.1, 1.0), (0.2, 2.0), s)
        assert tv.value == baraud_statistic(m, (0.1, 1.0), (0.2, 2.0), s)
        assert math.isfinite(tv.value)
