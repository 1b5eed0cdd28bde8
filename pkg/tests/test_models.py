import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from hellsearch.models import (
    CATALOG_NAMES,
    ParameterRect,
    RegularityConstants,
    Sample,
    UnknownModelError,
    catalog_lookup,
    draw_sample,
    gauss_2d_model,
    verify_assumption1,
)

from oracles import density, reference_cdf, support_points

ONE_D = [n for n in CATALOG_NAMES if catalog_lookup(n).dim == 1]
TWO_D = [n for n in CATALOG_NAMES if catalog_lookup(n).dim == 2]


class TestParameterRect:
    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            ParameterRect((0.0,), (0.0,))
        with pytest.raises(ValueError):
            ParameterRect((0.0, 1.0), (1.0,))

    def test_geometry(self):
        r = ParameterRect((-1.0, 2.0), (3.0, 4.0))
        assert r.dim == 2
        np.testing.assert_array_equal(r.widths, [4.0, 2.0])
        np.testing.assert_array_equal(r.center, [1.0, 3.0])
        assert r.contains((0.0, 3.0))
        assert not r.contains((0.0, 5.0))
        np.testing.assert_array_equal(r.clamp((9.0, 0.0)), [3.0, 2.0])
        assert r.contains_rect(ParameterRect((0.0, 2.5), (1.0, 3.0)))
        assert not r.contains_rect(ParameterRect((-2.0, 2.5), (1.0, 3.0)))


class TestRegularityConstants:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            RegularityConstants((0.0,), (1.0,), (2.0,))
        with pytest.raises(ValueError):
            RegularityConstants((1.0,), (3.0,), (2.0,))
        with pytest.raises(ValueError):
            RegularityConstants((1.0, 1.0), (1.0,), (2.0,))

    def test_metrics(self):
        c = RegularityConstants((1.0, 2.0), (0.5, 0.25), (1.0, 1.0))
        assert c.lower_metric((0, 0), (1, 2)) == pytest.approx(1.0)
        assert c.upper_metric((0, 0), (1, 2)) == pytest.approx(4.0)
        assert c.lower_metric((1, 1), (1, 1)) == 0.0


class TestCatalog:
    def test_fourteen_models(self):
        assert len(CATALOG_NAMES) == 14
        assert len(ONE_D) == 8 and len(TWO_D) == 6

    def test_unknown_name(self):
        with pytest.raises(UnknownModelError, match="unknown"):
            catalog_lookup("unknown")

    @pytest.mark.parametrize("name, lower, upper", [
        ("exp-rate", (0.01,), (100.0,)),
        ("gauss-loc", (-100.0,), (100.0,)),
        ("unif-scale", (0.01,), (10.0,)),
        ("sqrt-singular", (-1.0,), (1.0,)),
        ("gamma-2d", (0.6, 0.1), (10.0, 20.0)),
        ("beta-2d", (0.7, 0.7), (20.0, 20.0)),
        ("unif-locscale-2d", (-0.5, 0.1), (0.5, 2.0)),
    ])
    def test_rectangles(self, name, lower, upper):
        m = catalog_lookup(name)
        assert m.theta_rect.lower == lower
        assert m.theta_rect.upper == upper

    def test_sqrt_singular_constants(self):
        c = catalog_lookup("sqrt-singular").constants
        assert c.alpha == (0.5,)
        assert c.r_lower == (0.17,)
        assert c.r_upper == (0.7071067811865475,)

    def test_gauss_loc_upper_constant(self):
        # h^2 = 1 - exp(-d^2/8) behaves like d^2/8 at small d, so the upper
        # constant must be at least 1/8; 1/16 would be violated.
        m = catalog_lookup("gauss-loc")
        assert m.constants.alpha == (2.0,)
        assert m.constants.r_upper == (0.125,)
        d = 1e-3
        assert -math.expm1(-d * d / 8) > d * d / 16

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_reference_theta_inside(self, name):
        m = catalog_lookup(name)
        assert m.theta_rect.contains(m.reference_theta)

    def test_translation_even_flags(self):
        even = {n for n in CATALOG_NAMES if catalog_lookup(n).translation_even}
        assert even == {"gauss-loc", "cauchy-loc", "unif-loc", "sqrt-singular"}


class TestDensities:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_matches_reference(self, name):
        m = catalog_lookup(name)
        th = np.asarray(m.reference_theta)
        lo, hi = m.support(th)
        lo = max(lo, -30.0)
        hi = min(hi, 30.0)
        xs = np.linspace(lo, hi, 997)
        xs = xs[(xs != th[0])]
        np.testing.assert_allclose(m.density(th, xs), density(name, th, xs),
                                   rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_integrates_to_one(self, name):
        m = catalog_lookup(name)
        th = np.asarray(m.reference_theta)
        pts = sorted(set(support_points(name, th)))
        edges = [-np.inf] + pts + [np.inf]
        total = sum(integrate.quad(lambda x: float(m.density(th, x)), a, b,
                                   limit=400)[0]
                    for a, b in zip(edges[:-1], edges[1:]) if a < b)
        assert total == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_nonnegative(self, name):
        m = catalog_lookup(name)
        xs = np.linspace(-50, 50, 20001)
        assert np.all(m.density(m.reference_theta, xs) >= 0)

    @pytest.mark.parametrize("name", ["gauss-loc", "cauchy-loc", "unif-loc",
                                      "sqrt-singular"])
    @given(u=st.floats(1e-3, 3.0), theta=st.floats(-0.9, 0.9))
    @settings(max_examples=50, deadline=None)
    def test_translation_even_symmetry(self, name, u, theta):
        # theta +- u round differently, so compare to a relative tolerance.
        m = catalog_lookup(name)
        assert m.density(theta, theta + u) == pytest.approx(
            m.density(theta, theta - u), rel=1e-9, abs=1e-300)

    def test_sqrt_singular_zero_at_theta(self):
        m = catalog_lookup("sqrt-singular")
        assert m.density(0.3, 0.3) == 0.0

    @pytest.mark.parametrize("name", [n for n in CATALOG_NAMES
                                      if catalog_lookup(n).has_cdf])
    def test_cdf_matches_reference(self, name):
        m = catalog_lookup(name)
        th = np.asarray(m.reference_theta)
        xs = np.linspace(-3, 6, 301)
        np.testing.assert_allclose(m.cdf(th, xs), reference_cdf(name, th)(xs),
                                   atol=1e-12)


class TestSamplers:
    def test_deterministic(self):
        m = catalog_lookup("exp-rate")
        a = draw_sample(m, 1.0, 5, 42)
        b = draw_sample(m, 1.0, 5, 42)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.provenance == "seed:42"

    def test_support(self):
        s = draw_sample(catalog_lookup("unif-scale"), 2.0, 1000, 7)
        assert s.values.min() >= 0.0 and s.values.max() <= 2.0

    def test_gauss_mean_clt(self):
        s = draw_sample(catalog_lookup("gauss-loc"), 0.0, 10 ** 5, 1)
        assert abs(s.values.mean()) <= 4 / math.sqrt(10 ** 5)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_kolmogorov_smirnov(self, name):
        m = catalog_lookup(name)
        n = 10 ** 5
        s = draw_sample(m, m.reference_theta, n, 2024)
        ks = stats.kstest(s.values, reference_cdf(name, m.reference_theta)).statistic
        assert ks < 2.0 / math.sqrt(n)

    def test_rejects_theta_outside(self):
        with pytest.raises(ValueError, match="outside"):
            draw_sample(catalog_lookup("exp-rate"), 200.0, 5, 0)

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ValueError, match="dimensional"):
            draw_sample(catalog_lookup("gauss-2d"), 0.0, 5, 0)

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            draw_sample(catalog_lookup("exp-rate"), 1.0, 0, 0)


class TestSample:
    def test_validation(self):
        with pytest.raises(ValueError):
            Sample([])
        with pytest.raises(ValueError):
            Sample([1.0, np.nan])

    def test_read_only(self):
        s = Sample([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 3.0

    def test_from_file(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("1.5\n\n-2.25\n# note\n3\n")
        s = Sample.from_file(p)
        np.testing.assert_array_equal(s.values, [1.5, -2.25, 3.0])
        assert s.n == 3
        assert str(p) in s.provenance


class TestAssumption1:
    @pytest.mark.parametrize("name", ["unif-scale", "gauss-loc", "exp-rate"])
    def test_zero_violations(self, name):
        rep = verify_assumption1(catalog_lookup(name), 20)
        assert rep.violations == 0
        assert rep.pairs == 20 * 21 // 2

    def test_degenerate_pair_bounds_vanish(self):
        c = catalog_lookup("gauss-2d").constants
        assert c.lower_metric((1.0, 2.0), (1.0, 2.0)) == 0.0
        assert c.upper_metric((1.0, 2.0), (1.0, 2.0)) == 0.0

    def test_gauss_2d_custom_rectangle(self):
        m = gauss_2d_model(ParameterRect((-10.0, 0.5), (10.0, 10.0)))
        assert m.constants.r_upper == pytest.approx((1.0, 2.0))
        assert verify_assumption1(m, 8).violations == 0
