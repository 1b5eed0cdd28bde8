import math

import numpy as np
import pytest

from hellsearch.diagnostics import (
    TheoryModeRequired,
    compute_theory_bundle,
    dimension_term_1d,
    dimension_term_md,
    harmonic_mean_alpha,
    max_thinness,
)
from hellsearch.models import CATALOG_NAMES, catalog_lookup
from hellsearch.search1d import EstimatorConfig1D, test_count_bound_1d
from hellsearch.searchmd import EstimatorConfigMD


class TestHarmonicMean:
    @pytest.mark.parametrize("alpha, expected", [
        ((2.0, 2.0), 2.0), ((1.0, 2.0), 4.0 / 3.0), ((0.5,), 0.5), ((1.0, 2.0, 4.0), 12 / 7),
    ])
    def test_values(self, alpha, expected):
        assert harmonic_mean_alpha(alpha) == pytest.approx(expected, rel=1e-15)

    def test_rejects(self):
        with pytest.raises(ValueError):
            harmonic_mean_alpha((1.0, 0.0))

    def test_max_thinness(self):
        assert max_thinness((2.0, 1.0)) == pytest.approx((math.sqrt(2.0), 2.0))


class TestDimensionTerm:
    def test_at_least_dimension(self):
        assert dimension_term_md((2.0, 2.0), (1.0, 1.0), (1.0, 1.0), (1e6, 1e6)) == 2.0

    def test_formula(self):
        v = dimension_term_md((2.0, 1.0), (0.5, 0.25), (2.0, 1.0), (0.5, 0.5), c=3.0)
        ab = 4.0 / 3.0
        expected = (math.log1p((2 / ab * 3 * 4) ** 0.5 / 0.5)
                    + math.log1p((2 / ab * 3 * 4) ** 1.0 / 0.5))
        assert v == pytest.approx(expected, rel=1e-14)

    def test_decreasing_in_t(self):
        a = dimension_term_md((2.0, 2.0), (0.1, 0.1), (1.0, 1.0), (0.1, 0.1))
        b = dimension_term_md((2.0, 2.0), (0.1, 0.1), (1.0, 1.0), (1.0, 1.0))
        assert a > b

    def test_increasing_in_c(self):
        a = dimension_term_md((2.0, 2.0), (0.1, 0.1), (1.0, 1.0), (1.0, 1.0), c=1.0)
        b = dimension_term_md((2.0, 2.0), (0.1, 0.1), (1.0, 1.0), (1.0, 1.0), c=10.0)
        assert b > a

    def test_one_dimensional_variant(self):
        v = dimension_term_1d(0.5, 0.17, 0.7071, 1.0)
        assert v == pytest.approx(math.log1p((0.7071 / (0.5 * 0.17)) ** 2), rel=1e-14)
        # d / alpha_bar = 1 / alpha at d = 1, so both forms agree.
        assert v == pytest.approx(dimension_term_md((0.5,), (0.17,), (0.7071,), (1.0,)),
                                  rel=1e-14)

    def test_equal_constants_floor(self):
        # log(1 + sqrt(1/2)) < 1, so the floor applies.
        assert dimension_term_1d(2.0, 1.0, 1.0, 1.0) == 1.0
        assert math.log1p(math.sqrt(0.5)) < 1.0

    @pytest.mark.parametrize("t", [0.0, (1.0, 0.0)])
    def test_needs_theory_mode(self, t):
        with pytest.raises(TheoryModeRequired):
            dimension_term_md((2.0, 2.0), (1.0, 1.0), (1.0, 1.0), t)


class TestBundle:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_default_config_rejected(self, name):
        with pytest.raises(TheoryModeRequired):
            compute_theory_bundle(catalog_lookup(name))

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_theory_mode(self, name):
        m = catalog_lookup(name)
        if m.dim == 1:
            cfg = EstimatorConfig1D(t=1.0)
        else:
            cfg = EstimatorConfigMD(t=max_thinness(m.constants.alpha))
        b = compute_theory_bundle(m, cfg)
        assert b.d_f >= m.dim
        assert b.bound_md > 0
        assert b.c == 1.0
        if m.dim == 1:
            assert b.d_f_1d >= 1.0
            assert b.bound_1d == test_count_bound_1d(m, cfg.kappa, cfg.resolved_eta(m))
        else:
            assert math.isnan(b.d_f_1d) and math.isnan(b.bound_1d)

    def test_rejects_c(self):
        with pytest.raises(ValueError):
            compute_theory_bundle(catalog_lookup("gauss-loc"), EstimatorConfig1D(t=1.0), c=0)

    def test_alpha_bar(self):
        b = compute_theory_bundle(catalog_lookup("sqrt-singular"), EstimatorConfig1D(t=1.0))
        assert b.alpha_bar == 0.5
        b = compute_theory_bundle(catalog_lookup("shiftexp-2d"),
                                  EstimatorConfigMD(t=(1.0, 1.0)))
        assert b.alpha_bar == pytest.approx(harmonic_mean_alpha(
            catalog_lookup("shiftexp-2d").constants.alpha))
        assert np.isfinite(b.d_f)
