"""Theory-side quantities: harmonic mean exponent, dimension term, bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hellsearch.models import ParametricModel
from hellsearch.search1d import EstimatorConfig1D, test_count_bound_1d
from hellsearch.searchmd import EstimatorConfigMD, test_count_bound_md

__all__ = [
    "TheoryModeRequired",
    "TheoryBundle",
    "harmonic_mean_alpha",
    "max_thinness",
    "dimension_term_md",
    "dimension_term_1d",
    "compute_theory_bundle",
]


class TheoryModeRequired(ValueError):
    """The calculation needs every grid thinness ``t_j`` to be positive."""


@dataclass(frozen=True)
class TheoryBundle:
    """Theory quantities for a model and configuration.

    Attributes
    ----------
    alpha_bar : float
        Harmonic mean of the exponents.
    d_f : float
        Dimension term in its multi-dimensional form.
    d_f_1d : float
        One-parameter form with ``c / (alpha R_lower)`` inside the log,
        equal to ``d_f`` there; NaN when ``d > 1``.
    bound_1d : float
        Test-count bound of the interval search; NaN when ``d > 1``.
    bound_md : float
        Test-count bound of the rectangle search.
    c : float
        The unspecified constant used, not a published value.
    """

    alpha_bar: float
    d_f: float
    d_f_1d: float
    bound_1d: float
    bound_md: float
    c: float


def harmonic_mean_alpha(alpha) -> float:
    """``d / sum_j (1 / alpha_j)``.

    Raises
    ------
    ValueError
        If some exponent is not positive.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    if a.size == 0 or np.any(a <= 0):
        raise ValueError("exponents must be positive")
    return float(a.size / np.sum(1.0 / a))


def max_thinness(alpha) -> tuple[float, ...]:
    """Largest admissible thinness ``d^(1/alpha_j)`` per coordinate."""
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    return tuple(float(a.size ** (1.0 / aj)) for aj in a)


def _check_t(t, d):
    t = np.broadcast_to(np.atleast_1d(np.asarray(t, dtype=float)), (d,))
    if np.any(t <= 0):
        raise TheoryModeRequired(
            "theory quantities need t_j > 0 in every coordinate")
    return t


def dimension_term_md(alpha, r_lower, r_upper, t, c: float = 1.0) -> float:
    """``max{d, sum_j log(1 + t_j^-1 ((d / alpha_bar)(c R_upper_j / R_lower_j))^(1/alpha_j))}``."""
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    d = a.size
    t = _check_t(t, d)
    ab = harmonic_mean_alpha(a)
    ratio = c * np.asarray(r_upper, float) / np.asarray(r_lower, float)
    terms = np.log1p(((d / ab) * ratio) ** (1.0 / a) / t)
    return float(max(d, np.sum(terms)))


def dimension_term_1d(alpha: float, r_lower: float, r_upper: float, t: float,
                      c: float = 1.0) -> float:
    """``max{1, log(1 + t^-1 (c R_upper / (alpha R_lower))^(1/alpha))}``.

    Since ``d / alpha_bar = 1 / alpha`` when ``d = 1``, this equals
    :func:`dimension_term_md` on one-parameter families.
    """
    t = float(_check_t(t, 1)[0])
    return float(max(1.0, math.log1p((c * r_upper / (alpha * r_lower))
                                     ** (1.0 / alpha) / t)))


def compute_theory_bundle(model: ParametricModel, config=None,
                          c: float = 1.0) -> TheoryBundle:
    """Evaluate the theory quantities for ``model`` under ``config``.

    Raises
    ------
    TheoryModeRequired
        If some ``t_j`` is zero, the practical setting where the grid is
        disabled.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    k = model.constants
    if config is None:
        config = EstimatorConfig1D() if model.dim == 1 else EstimatorConfigMD()
    t = config.t if config.t is not None else 0.0
    d_f = dimension_term_md(k.alpha, k.r_lower, k.r_upper, t, c)
    eta = config.resolved_eta(model)
    bound_md = test_count_bound_md(model, config.kappa, eta)
    if model.dim == 1:
        d_f_1d = dimension_term_1d(k.alpha[0], k.r_lower[0], k.r_upper[0],
                                   float(np.atleast_1d(t)[0]), c)
        bound_1d = test_count_bound_1d(model, config.kappa, float(np.atleast_1d(eta)[0]))
    else:
        d_f_1d = bound_1d = math.nan
    return TheoryBundle(harmonic_mean_alpha(k.alpha), d_f, d_f_1d, bound_1d,
                        bound_md, float(c))
