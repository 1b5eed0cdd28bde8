"""Interval-shrinking estimation for one-parameter families."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from hellsearch import _kernels as K
from hellsearch.distance import DEFAULT_QUAD, QuadratureError, QuadratureSpec
from hellsearch.models import ParametricModel, Sample
from hellsearch.testing import GridSpec

__all__ = [
    "RADIUS_RULES_1D",
    "EstimatorConfig1D",
    "SearchTrace1D",
    "Estimate",
    "IterationCapError",
    "RadiusRuleFallback",
    "kappa_bar",
    "radius_pair_1d",
    "estimate_1d",
    "test_count_bound_1d",
]

RADIUS_RULES_1D = {
    "optimal": K.RULE_OPTIMAL,
    "hellinger_based": K.RULE_HELLINGER,
    "parametric": K.RULE_PARAMETRIC,
}


class IterationCapError(RuntimeError):
    """The search hit its iteration cap before the stopping width."""


class RadiusRuleFallback(UserWarning):
    """The optimal rule was requested for a family without explicit
    geometry; the Hellinger-based rule was used instead."""


def kappa_bar() -> float:
    """Critical shrink threshold ``(1 + sqrt((2+sqrt2)/(2-sqrt2)))^-2``.

    Since ``(2+sqrt2)/(2-sqrt2) = 3 + 2 sqrt2 = (1 + sqrt2)^2`` this equals
    ``(2 + sqrt2)^-2``.
    """
    return (2.0 + math.sqrt(2.0)) ** -2


@dataclass(frozen=True)
class EstimatorConfig1D:
    """Settings of the one-dimensional search.

    Attributes
    ----------
    kappa : float
        Shrink parameter in ``(0, kappa_bar())``.
    t : float
        Grid thinness; 0 disables the discretization.
    eta : float or None
        Stopping width; ``None`` means ``(M - m) * 1e-8``.
    radius_rule : str or None
        ``optimal``, ``hellinger_based`` or ``parametric``; ``None`` picks
        the model's default.
    max_iterations : int
        Cap on the number of tests.
    quad : QuadratureSpec
        Tolerances for every integral computed during the search.
    """

    kappa: float = field(default_factory=lambda: kappa_bar() / 2.0)
    t: float = 0.0
    eta: float | None = None
    radius_rule: str | None = None
    max_iterations: int = 10 ** 6
    quad: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self):
        kb = kappa_bar()
        if not 0.0 < self.kappa < kb:
            raise ValueError(
                f"kappa={self.kappa} must lie in (0, kappa_bar) with "
                f"kappa_bar = {kb:.7f}")
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if self.eta is not None and not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.radius_rule is not None and self.radius_rule not in RADIUS_RULES_1D:
            raise ValueError(f"unknown radius rule {self.radius_rule!r}; "
                             f"choose one of {sorted(RADIUS_RULES_1D)}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")

    def resolved_eta(self, model: ParametricModel) -> float:
        if self.eta is not None:
            return float(self.eta)
        return float(model.theta_rect.widths[0]) * 1e-8

    def resolved_rule(self, model: ParametricModel) -> str:
        return self.radius_rule or model.default_rule


@dataclass(frozen=True)
class SearchTrace1D:
    """Intervals before each test and the test values.

    ``intervals`` has shape ``(test_count, 2)`` when recorded and shape
    ``(0, 2)`` otherwise; ``test_count`` is always filled.
    """

    intervals: np.ndarray
    test_values: np.ndarray
    test_count: int


@dataclass(frozen=True)
class Estimate:
    """Result of a search.

    Attributes
    ----------
    theta_hat : numpy.ndarray
        Centre of the final interval or rectangle.
    final_lower, final_upper : numpy.ndarray
        Corners of the final interval or rectangle.
    test_count : int
        Number of tests computed.
    trace : object
        ``SearchTrace1D`` or ``SearchTraceMD``.
    config : object
        The configuration used.
    fell_back : bool
        Whether the optimal rule was replaced by the Hellinger-based one.
    """

    theta_hat: np.ndarray
    final_lower: np.ndarray
    final_upper: np.ndarray
    test_count: int
    trace: object
    config: object
    fell_back: bool = False


def radius_pair_1d(model: ParametricModel, theta: float, theta_prime: float,
                   kappa: float, rule: str,
                   quad: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """Radii ``(r_bar, r_under)`` for the pair ``theta < theta'``.

    ``[theta, theta + r_bar]`` and ``[theta' - r_under, theta']`` lie in the
    Hellinger balls of radius ``sqrt(kappa) h(f_theta, f_theta')`` around
    ``theta`` and ``theta'`` respectively.

    * ``optimal``: largest radii from the family's explicit geometry.
    * ``hellinger_based``: ``((kappa / R_upper) h^2)^(1/alpha)`` for both.
    * ``parametric``: ``(kappa R_lower / R_upper)^(1/alpha) (theta' - theta)``.
    """
    if model.dim != 1:
        raise ValueError("radius_pair_1d needs a one-parameter family")
    if not theta < theta_prime:
        raise ValueError("need theta < theta_prime")
    if rule not in RADIUS_RULES_1D:
        raise ValueError(f"unknown radius rule {rule!r}")
    c = model.constants
    rb, ru, fell_back, status = K.radius_1d(
        model.kind, RADIUS_RULES_1D[rule], float(theta), float(theta_prime),
        float(kappa), c.alpha[0], c.r_lower[0], c.r_upper[0], *quad.args)
    if status != K.OK:
        raise QuadratureError("h^2 quadrature did not converge")
    if fell_back:
        warnings.warn(f"{model.name} has no explicit radius geometry; "
                      "using the Hellinger-based rule", RadiusRuleFallback,
                      stacklevel=2)
    return float(rb), float(ru)


def estimate_1d(model: ParametricModel, sample: Sample,
                config: EstimatorConfig1D | None = None,
                record_trace: bool = True) -> Estimate:
    """Shrink ``[m, M]`` by pairwise tests until its width is at most eta.

    At each step with interval ``[theta, theta']`` the test at the two
    (projected) endpoints decides which end moves: a nonnegative value
    moves ``theta`` up by ``min(r_bar, width/2)``, a nonpositive value
    moves ``theta'`` down by ``min(r_under, width/2)``. A zero value moves
    both. The midpoint of the final interval is returned.

    Raises
    ------
    IterationCapError
        If ``config.max_iterations`` tests did not suffice.
    QuadratureError
        If an integral did not converge.
    """
    if model.dim != 1:
        raise ValueError(f"{model.name} is not a one-parameter family")
    config = config or EstimatorConfig1D()
    rule = config.resolved_rule(model)
    if rule not in RADIUS_RULES_1D:
        raise ValueError(f"rule {rule!r} is not a one-dimensional radius rule")
    eta = config.resolved_eta(model)
    grid = GridSpec.for_model(model, config.t, sample.n)
    c = model.constants
    lo, hi = model.theta_rect.lower[0], model.theta_rect.upper[0]
    out = K.search_1d(
        model.kind, sample.values, lo, hi, eta, float(config.kappa),
        RADIUS_RULES_1D[rule], c.alpha[0], c.r_lower[0], c.r_upper[0],
        grid.epsilon[0], *config.quad.args, int(config.max_iterations),
        bool(record_trace))
    a, b, count, status, fell_back, tr_lo, tr_hi, tr_t = out
    if status == K.ITERATION_CAP:
        raise IterationCapError(
            f"{model.name}: {count} tests without reaching width {eta:g}; "
            "the radius rule does not contract")
    if status == K.QUAD_FAILURE:
        raise QuadratureError(f"{model.name}: quadrature failed during search")
    if fell_back:
        warnings.warn(f"{model.name} has no explicit radius geometry; "
                      "using the Hellinger-based rule", RadiusRuleFallback,
                      stacklevel=2)
    trace = SearchTrace1D(np.column_stack([tr_lo, tr_hi]), tr_t, int(count))
    return Estimate(np.array([0.5 * (a + b)]), np.array([a]), np.array([b]),
                    int(count), trace, config, bool(fell_back))


def test_count_bound_1d(model: ParametricModel, kappa: float,
                        eta: float) -> float:
    """Upper bound on the number of tests of :func:`estimate_1d`.

    ``1 + max{(R_upper / (kappa R_lower))^(1/alpha), 1/log 2}
    * log((M - m) / eta)``, valid for radii at least as large as the
    parametric rule's.
    """
    c = model.constants
    width = float(model.theta_rect.widths[0])
    ratio = (c.r_upper[0] / (kappa * c.r_lower[0])) ** (1.0 / c.alpha[0])
    return 1.0 + max(ratio, 1.0 / math.log(2.0)) * math.log(width / eta)


test_count_bound_1d.__test__ = False
