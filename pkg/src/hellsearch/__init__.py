"""Robust parametric density estimation by pairwise Hellinger tests."""

__version__ = "0.1.0"

from hellsearch.baselines import (  # noqa: E402
    BaselineSpec,
    mle_closed,
    mle_grid,
    mle_numeric,
    mspe,
    simple_stats,
)
from hellsearch.diagnostics import (  # noqa: E402
    TheoryBundle,
    compute_theory_bundle,
    harmonic_mean_alpha,
)
from hellsearch.distance import (  # noqa: E402
    QuadratureError,
    QuadratureSpec,
    hellinger_sq,
)
from hellsearch.models import (  # noqa: E402
    CATALOG_NAMES,
    ParameterRect,
    ParametricModel,
    RegularityConstants,
    Sample,
    catalog_lookup,
    draw_sample,
    verify_assumption1,
)
from hellsearch.search1d import (  # noqa: E402
    EstimatorConfig1D,
    Estimate,
    IterationCapError,
    estimate_1d,
    kappa_bar,
    test_count_bound_1d,
)
from hellsearch.searchmd import (  # noqa: E402
    EstimatorConfigMD,
    estimate_md,
    test_count_bound_md,
)
from hellsearch.testing import GridSpec, baraud_statistic, test_T  # noqa: E402

__all__ = [
    "BaselineSpec", "CATALOG_NAMES", "Estimate", "EstimatorConfig1D",
    "EstimatorConfigMD", "GridSpec", "IterationCapError", "ParameterRect",
    "ParametricModel", "QuadratureError", "QuadratureSpec",
    "RegularityConstants", "Sample", "TheoryBundle", "baraud_statistic",
    "catalog_lookup", "compute_theory_bundle", "draw_sample", "estimate_1d",
    "estimate_md", "harmonic_mean_alpha", "hellinger_sq", "kappa_bar",
    "mle_closed", "mle_grid", "mle_numeric", "mspe", "simple_stats",
    "test_T", "test_count_bound_1d", "test_count_bound_md",
    "verify_assumption1",
]
