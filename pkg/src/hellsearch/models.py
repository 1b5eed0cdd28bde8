"""Catalog of parametric families with their geometry and samplers.

Each family is identified by a string name and backed by an integer code
understood by the compiled core in :mod:`hellsearch._kernels`. Densities,
supports and the Hellinger closed forms all go through that core, so the
Python layer and the compiled search loops always agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import special

from hellsearch import _kernels as K

__all__ = [
    "ParameterRect",
    "RegularityConstants",
    "ParametricModel",
    "Sample",
    "Assumption1Report",
    "UnknownModelError",
    "CATALOG_NAMES",
    "catalog_lookup",
    "gauss_2d_model",
    "draw_sample",
    "verify_assumption1",
]


class UnknownModelError(KeyError):
    """Raised when a catalog identifier is not recognised."""


@dataclass(frozen=True)
class ParameterRect:
    """Axis-aligned parameter rectangle ``prod_j [lower_j, upper_j]``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi) or len(lo) == 0:
            raise ValueError("lower and upper must have the same length >= 1")
        if any(not a < b for a, b in zip(lo, hi)):
            raise ValueError(f"degenerate rectangle: lower={lo}, upper={hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> np.ndarray:
        return np.asarray(self.upper) - np.asarray(self.lower)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lower) + np.asarray(self.upper))

    def contains(self, theta, tol: float = 0.0) -> bool:
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        return bool(np.all(t >= np.asarray(self.lower) - tol)
                    and np.all(t <= np.asarray(self.upper) + tol))

    def clamp(self, theta) -> np.ndarray:
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        return np.clip(t, self.lower, self.upper)

    def contains_rect(self, other: "ParameterRect") -> bool:
        return (all(a <= b for a, b in zip(self.lower, other.lower))
                and all(a >= b for a, b in zip(self.upper, other.upper)))


@dataclass(frozen=True)
class RegularityConstants:
    """Exponents and constants of the two-sided Hellinger sandwich.

    For all parameters ``t, u`` in the rectangle,
    ``max_j r_lower[j] |t_j - u_j|**alpha[j] <= h^2(f_t, f_u)
    <= max_j r_upper[j] |t_j - u_j|**alpha[j]``.
    """

    alpha: tuple[float, ...]
    r_lower: tuple[float, ...]
    r_upper: tuple[float, ...]

    def __post_init__(self):
        for name in ("alpha", "r_lower", "r_upper"):
            v = tuple(float(x) for x in np.atleast_1d(getattr(self, name)))
            object.__setattr__(self, name, v)
        if not len(self.alpha) == len(self.r_lower) == len(self.r_upper):
            raise ValueError("constant vectors must share one length")
        if any(a <= 0 for a in self.alpha):
            raise ValueError("alpha must be positive")
        if any(not 0 < lo <= hi for lo, hi in zip(self.r_lower, self.r_upper)):
            raise ValueError("need 0 < r_lower <= r_upper componentwise")

    def lower_metric(self, t, u) -> float:
        d = np.abs(np.atleast_1d(t) - np.atleast_1d(u))
        return float(np.max(np.asarray(self.r_lower) * d ** np.asarray(self.alpha)))

    def upper_metric(self, t, u) -> float:
        d = np.abs(np.atleast_1d(t) - np.atleast_1d(u))
        return float(np.max(np.asarray(self.r_upper) * d ** np.asarray(self.alpha)))


@dataclass(frozen=True)
class Sample:
    """A batch of i.i.d. observations with where they came from."""

    values: np.ndarray
    provenance: str = "array"

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float).ravel())
        if v.size < 1:
            raise ValueError("a sample needs at least one observation")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_file(cls, path) -> "Sample":
        """Read one decimal observation per line; blank lines are skipped."""
        p = Path(path)
        values = np.loadtxt(p, dtype=float, ndmin=1, comments="#")
        return cls(values, provenance=f"file:{p}")


def _support_text(kind: int, theta: np.ndarray) -> tuple[float, float]:
    p0, p1 = _params(theta)
    return K.support(kind, p0, p1)


def _params(theta) -> tuple[float, float]:
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    return float(t[0]), float(t[1]) if t.size > 1 else 0.0


@dataclass(frozen=True)
class ParametricModel:
    """A named family ``{f_theta : theta in theta_rect}``.

    Attributes
    ----------
    name : str
        Catalog identifier.
    kind : int
        Family code of the compiled core.
    theta_rect : ParameterRect
        Parameter rectangle.
    constants : RegularityConstants
        Sandwich exponents and constants valid on ``theta_rect``.
    translation_even : bool
        Pure location family with an even density, for which the integral
        term of the test statistic vanishes.
    default_rule : str
        Radius rule used by default (``optimal``, ``hellinger_based``,
        ``parametric`` in dimension one, ``annexe_geometry`` otherwise).
    reference_theta : tuple
        Parameter used by the in-model simulation scenarios.
    """

    name: str
    kind: int
    theta_rect: ParameterRect
    constants: RegularityConstants
    translation_even: bool
    default_rule: str
    reference_theta: tuple[float, ...]
    _sampler: Callable = field(repr=False, compare=False, default=None)
    _cdf: Callable | None = field(repr=False, compare=False, default=None)
    _mle: Callable | None = field(repr=False, compare=False, default=None)

    @property
    def dim(self) -> int:
        return self.theta_rect.dim

    def density(self, theta, x) -> np.ndarray:
        """Density ``f_theta`` evaluated at ``x`` (array-like)."""
        p0, p1 = _params(theta)
        xs = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
        out = K.pdf_array(self.kind, xs, p0, p1)
        return out if np.ndim(x) else out[0]

    @property
    def has_cdf(self) -> bool:
        return self._cdf is not None

    def cdf(self, theta, x) -> np.ndarray:
        if self._cdf is None:
            raise NotImplementedError(f"{self.name} has no distribution function")
        return self._cdf(np.atleast_1d(np.asarray(theta, dtype=float)),
                         np.asarray(x, dtype=float))

    def sampler(self, theta, n: int, rng: np.random.Generator) -> np.ndarray:
        return self._sampler(np.atleast_1d(np.asarray(theta, dtype=float)), n, rng)

    def support(self, theta) -> tuple[float, float]:
        """Closed interval outside of which ``f_theta`` vanishes."""
        return _support_text(self.kind, theta)

    @property
    def has_closed_mle(self) -> bool:
        return self._mle is not None

    def closed_mle(self, values) -> np.ndarray:
        if self._mle is None:
            raise NotImplementedError(f"{self.name} has no closed-form MLE")
        v = np.asarray(values, dtype=float)
        return self.theta_rect.clamp(self._mle(v))

    @property
    def has_closed_hellinger(self) -> bool:
        from hellsearch.distance import hellinger_affinity_closed
        return hellinger_affinity_closed(self.name, self.reference_theta,
                                         self.reference_theta) is not None

    def closed_hellinger(self, theta, theta_prime) -> float | None:
        from hellsearch.distance import hellinger_affinity_closed
        return hellinger_affinity_closed(self.name, theta, theta_prime)


# ---------------------------------------------------------------------------
# Samplers. All draw from a caller-owned PCG64 generator; inverse CDF is
# used wherever the quantile function is explicit.
# ---------------------------------------------------------------------------

def _u(rng, n):
    return rng.random(n)


def _sample_exp(t, n, rng):
    return -np.log1p(-_u(rng, n)) / t[0]


def _sample_gauss(t, n, rng):
    return t[0] + rng.standard_normal(n)


def _sample_rayleigh(t, n, rng):
    return t[0] * np.sqrt(-2.0 * np.log1p(-_u(rng, n)))


def _sample_cauchy(t, n, rng):
    return t[0] + np.tan(np.pi * (_u(rng, n) - 0.5))


def _sample_unif_scale(t, n, rng):
    return t[0] * _u(rng, n)


def _sample_pareto(t, n, rng):
    return t[0] - 1.0 + 1.0 / (1.0 - _u(rng, n))


def _sample_unif_loc(t, n, rng):
    return t[0] - 0.5 + _u(rng, n)


def _sample_sqrt_singular(t, n, rng):
    v = 2.0 * (_u(rng, n) - 0.5)
    return t[0] + np.sign(v) * v * v


def _sample_gauss_2d(t, n, rng):
    return t[0] + t[1] * rng.standard_normal(n)


def _sample_cauchy_2d(t, n, rng):
    return t[0] + t[1] * np.tan(np.pi * (_u(rng, n) - 0.5))


def _sample_gamma(t, n, rng):
    return rng.gamma(t[0], 1.0 / t[1], n)


def _sample_beta(t, n, rng):
    return rng.beta(t[0], t[1], n)


def _sample_shiftexp(t, n, rng):
    return t[0] - np.log1p(-_u(rng, n)) / t[1]


def _sample_unif_locscale(t, n, rng):
    return t[0] + t[1] * _u(rng, n)


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------

def _cdf_exp(t, x):
    return np.where(x > 0, -np.expm1(-t[0] * np.maximum(x, 0.0)), 0.0)


def _cdf_gauss(t, x):
    return special.ndtr(x - t[0])


def _cdf_rayleigh(t, x):
    xp = np.maximum(x, 0.0)
    return -np.expm1(-xp * xp / (2.0 * t[0] * t[0]))


def _cdf_cauchy(t, x):
    return 0.5 + np.arctan(x - t[0]) / np.pi


def _cdf_unif_scale(t, x):
    return np.clip(x / t[0], 0.0, 1.0)


def _cdf_pareto(t, x):
    d = np.maximum(x - t[0], 0.0)
    return d / (d + 1.0)


def _cdf_unif_loc(t, x):
    return np.clip(x - t[0] + 0.5, 0.0, 1.0)


def _cdf_sqrt_singular(t, x):
    d = np.clip(x - t[0], -1.0, 1.0)
    return 0.5 + 0.5 * np.sign(d) * np.sqrt(np.abs(d))


def _cdf_gauss_2d(t, x):
    return special.ndtr((x - t[0]) / t[1])


def _cdf_cauchy_2d(t, x):
    return 0.5 + np.arctan((x - t[0]) / t[1]) / np.pi


def _cdf_gamma(t, x):
    return special.gammainc(t[0], t[1] * np.maximum(x, 0.0))


def _cdf_beta(t, x):
    return special.betainc(t[0], t[1], np.clip(x, 0.0, 1.0))


def _cdf_shiftexp(t, x):
    return -np.expm1(-t[1] * np.maximum(x - t[0], 0.0))


def _cdf_unif_locscale(t, x):
    return np.clip((x - t[0]) / t[1], 0.0, 1.0)


# ---------------------------------------------------------------------------
# Closed-form maximum likelihood estimators (before clamping)
# ---------------------------------------------------------------------------

def _mle_exp(v):
    return np.array([1.0 / v.mean()])


def _mle_gauss(v):
    return np.array([v.mean()])


def _mle_rayleigh(v):
    return np.array([math.sqrt(float(np.mean(v * v)) / 2.0)])


def _mle_unif_scale(v):
    return np.array([v.max()])


def _mle_pareto(v):
    return np.array([v.min()])


def _mle_gauss_2d(v):
    m = v.mean()
    return np.array([m, math.sqrt(float(np.mean((v - m) ** 2)))])


def _mle_shiftexp(v):
    lo = v.min()
    gap = v.mean() - lo
    return np.array([lo, 1.0 / gap if gap > 0 else math.inf])


def _mle_unif_locscale(v):
    lo = v.min()
    return np.array([lo, v.max() - lo])


# ---------------------------------------------------------------------------
# Regularity constants
# ---------------------------------------------------------------------------

# Lower constants without a closed expression are computed numerically by
# tools/derive_constants.py (grid infimum of h^2 / |delta|^alpha combined
# with the local quadratic bound, times a 0.9 safety margin) and frozen here.
_CAUCHY_LOC_R_LOWER = 1.7226e-3
_CAUCHY_2D_R_LOWER = 1.4884e-3
_GAMMA_2D_R_LOWER = 9.1403e-5
_BETA_2D_R_LOWER = 1.0082e-4
_UNIF_LOCSCALE_R_LOWER = 0.22639

_TRIGAMMA_07 = 2.8340491566946113  # trigamma(0.7)


def _gauss_2d_lower(rect: ParameterRect) -> tuple[float, float]:
    (m_lo, s_lo), (m_hi, s_hi) = rect.lower, rect.upper
    length = m_hi - m_lo
    ratio = math.sqrt(2.0 * s_hi * s_lo / (s_hi * s_hi + s_lo * s_lo))
    first = ratio * -math.expm1(-length * length / (8.0 * s_hi * s_hi)) / length ** 2
    return first, 1.0 / (4.0 * s_hi * s_hi)


def _shiftexp_lower(rect: ParameterRect) -> tuple[float, float]:
    (m_lo, l_lo), (m_hi, l_hi) = rect.lower, rect.upper
    length = m_hi - m_lo
    ratio = 2.0 * math.sqrt(l_hi * l_lo) / (l_hi + l_lo)
    first = ratio * -math.expm1(-l_lo * length / 2.0) / length
    return first, 1.0 / (8.0 * l_hi * l_hi)


def gauss_2d_model(rect: ParameterRect | None = None,
                   name: str = "gauss-2d") -> ParametricModel:
    """Gaussian location-scale family on ``rect``.

    The default rectangle is ``[-5, 5] x [0.2, 5]``. Constants are derived
    from ``rect``: the lower ones from the explicit bound on rectangles and
    the upper ones from the Fisher information at the smallest scale.
    """
    rect = rect or ParameterRect((-5.0, 0.2), (5.0, 5.0))
    s_lo = rect.lower[1]
    consts = RegularityConstants(
        (2.0, 2.0), _gauss_2d_lower(rect),
        (1.0 / (4.0 * s_lo * s_lo), 1.0 / (2.0 * s_lo * s_lo)))
    return ParametricModel(
        name, K.GAUSS_2D, rect, consts, False, "annexe_geometry", (0.0, 1.0),
        _sample_gauss_2d, _cdf_gauss_2d, _mle_gauss_2d)


def _build_catalog() -> dict[str, ParametricModel]:
    R = ParameterRect
    C = RegularityConstants
    pm = ParametricModel
    cat = [
        pm("exp-rate", K.EXP_RATE, R((0.01,), (100.0,)),
           C((2.0,), (1.0 / (8 * 100.0 ** 2),), (1.0 / (8 * 0.01 ** 2),)),
           False, "optimal", (1.0,), _sample_exp, _cdf_exp, _mle_exp),
        pm("gauss-loc", K.GAUSS_LOC, R((-100.0,), (100.0,)),
           C((2.0,), (-math.expm1(-200.0 ** 2 / 8.0) / 200.0 ** 2,), (1.0 / 8.0,)),
           True, "optimal", (0.0,), _sample_gauss, _cdf_gauss, _mle_gauss),
        pm("rayleigh", K.RAYLEIGH, R((0.01,), (100.0,)),
           C((2.0,), (1.0 / (2 * 100.0 ** 2),), (1.0 / (2 * 0.01 ** 2),)),
           False, "optimal", (1.0,), _sample_rayleigh, _cdf_rayleigh,
           _mle_rayleigh),
        pm("cauchy-loc", K.CAUCHY_LOC, R((-10.0,), (10.0,)),
           C((2.0,), (_CAUCHY_LOC_R_LOWER,), (1.0 / 16.0,)),
           True, "hellinger_based", (0.0,), _sample_cauchy, _cdf_cauchy, None),
        pm("unif-scale", K.UNIF_SCALE, R((0.01,), (10.0,)),
           C((1.0,), (1.0 / (2 * 10.0),), (1.0 / (2 * 0.01),)),
           False, "optimal", (1.0,), _sample_unif_scale, _cdf_unif_scale,
           _mle_unif_scale),
        pm("pareto-shift", K.PARETO_SHIFT, R((-10.0,), (10.0,)),
           C((1.0,), ((1.0 - math.log(21.0) / 20.0) / 20.0,), (0.5,)),
           False, "hellinger_based", (0.0,), _sample_pareto, _cdf_pareto,
           _mle_pareto),
        pm("unif-loc", K.UNIF_LOC, R((-10.0,), (10.0,)),
           C((1.0,), (1.0 / 20.0,), (1.0,)),
           True, "optimal", (0.0,), _sample_unif_loc, _cdf_unif_loc, None),
        pm("sqrt-singular", K.SQRT_SINGULAR, R((-1.0,), (1.0,)),
           C((0.5,), (0.17,), (1.0 / math.sqrt(2.0),)),
           True, "parametric", (0.0,), _sample_sqrt_singular,
           _cdf_sqrt_singular, None),
        gauss_2d_model(),
        pm("cauchy-2d", K.CAUCHY_2D, R((-5.0, 0.2), (5.0, 5.0)),
           C((2.0, 2.0), (_CAUCHY_2D_R_LOWER,) * 2, (3.125, 3.125)),
           False, "annexe_geometry", (0.0, 1.0), _sample_cauchy_2d,
           _cdf_cauchy_2d, None),
        pm("gamma-2d", K.GAMMA_2D, R((0.6, 0.1), (10.0, 20.0)),
           C((2.0, 2.0), (_GAMMA_2D_R_LOWER,) * 2, _gamma_r_upper()),
           False, "annexe_geometry", (2.0, 3.0), _sample_gamma, _cdf_gamma,
           None),
        pm("beta-2d", K.BETA_2D, R((0.7, 0.7), (20.0, 20.0)),
           C((2.0, 2.0), (_BETA_2D_R_LOWER,) * 2,
             (_TRIGAMMA_07 / 4.0, _TRIGAMMA_07 / 4.0)),
           False, "annexe_geometry", (3.0, 4.0), _sample_beta, _cdf_beta, None),
        pm("shiftexp-2d", K.SHIFTEXP_2D, R((-1.0, 0.2), (1.0, 5.0)),
           C((1.0, 2.0), _shiftexp_lower(R((-1.0, 0.2), (1.0, 5.0))),
             (2.0 * 5.0 / 2.0, 2.0 / (8.0 * 0.2 ** 2))),
           False, "annexe_geometry", (0.0, 1.0), _sample_shiftexp,
           _cdf_shiftexp, _mle_shiftexp),
        pm("unif-locscale-2d", K.UNIF_LOCSCALE_2D, R((-0.5, 0.1), (0.5, 2.0)),
           C((1.0, 1.0), (_UNIF_LOCSCALE_R_LOWER,) * 2, (20.0, 20.0)),
           False, "annexe_geometry", (0.0, 1.0), _sample_unif_locscale,
           _cdf_unif_locscale, _mle_unif_locscale),
    ]
    return {m.name: m for m in cat}


def _gamma_r_upper() -> tuple[float, float]:
    # (I_jj + |I_ab|) / 4 maximised over the rectangle, where I is the
    # Fisher information: I_aa = trigamma(a), I_bb = a / b^2, I_ab = -1 / b.
    a_lo, a_hi, b_lo = 0.6, 10.0, 0.1
    return ((float(special.polygamma(1, a_lo)) + 1.0 / b_lo) / 4.0,
            (a_hi / b_lo ** 2 + 1.0 / b_lo) / 4.0)


_CATALOG: dict[str, ParametricModel] | None = None

CATALOG_NAMES = (
    "exp-rate", "gauss-loc", "rayleigh", "cauchy-loc", "unif-scale",
    "pareto-shift", "unif-loc", "sqrt-singular", "gauss-2d", "cauchy-2d",
    "gamma-2d", "beta-2d", "shiftexp-2d", "unif-locscale-2d",
)


def catalog_lookup(name: str) -> ParametricModel:
    """Return the catalog model called ``name``.

    Raises
    ------
    UnknownModelError
        If ``name`` is not a catalog identifier.
    """
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; choose one of {', '.join(CATALOG_NAMES)}"
        ) from None


def draw_sample(model: ParametricModel, theta, n: int, seed: int) -> Sample:
    """Draw ``n`` i.i.d. observations from ``f_theta`` with a PCG64 stream.

    The same ``(seed, theta, n)`` always gives the same values bit for bit.
    """
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    if t.size != model.dim:
        raise ValueError(f"{model.name} expects a {model.dim}-dimensional parameter")
    if not model.theta_rect.contains(t):
        raise ValueError(f"theta={t.tolist()} lies outside the parameter "
                         f"rectangle of {model.name}")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    return Sample(model.sampler(t, n, rng), provenance=f"seed:{seed}")


@dataclass(frozen=True)
class Assumption1Report:
    """Outcome of a sandwich check on a parameter grid."""

    model: str
    pairs: int
    violations: int
    max_violation: float
    worst_pair: tuple | None


def verify_assumption1(model: ParametricModel, grid_per_dim: int = 20,
                       tol: float = 1e-9) -> Assumption1Report:
    """Check the Hellinger sandwich on every pair of a regular grid.

    The grid has ``grid_per_dim`` equally spaced points per axis, corners
    included. A violation is a pair where either inequality fails by more
    than ``tol``.
    """
    from hellsearch.distance import hellinger_sq

    axes = [np.linspace(lo, hi, grid_per_dim)
            for lo, hi in zip(model.theta_rect.lower, model.theta_rect.upper)]
    pts = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    worst, worst_pair, count, pairs = 0.0, None, 0, 0
    for i in range(len(pts)):
        for j in range(i, len(pts)):
            t, u = pts[i], pts[j]
            h2 = hellinger_sq(model, t, u)
            lo = model.constants.lower_metric(t, u)
            hi = model.constants.upper_metric(t, u)
            excess = max(lo - h2, h2 - hi)
            pairs += 1
            if excess > tol:
                count += 1
            if excess > worst:
                worst, worst_pair = excess, (tuple(t), tuple(u))
    return Assumption1Report(model.name, pairs, count, worst, worst_pair)
