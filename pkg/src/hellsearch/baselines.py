"""Comparator estimators: likelihood, spacings and simple statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import stats

from hellsearch import _kernels as K
from hellsearch.models import ParametricModel, Sample

__all__ = [
    "BASELINE_KINDS",
    "BaselineSpec",
    "UnsupportedModelError",
    "mle_closed",
    "mle_grid",
    "mle_numeric",
    "mspe",
    "simple_stats",
]

BASELINE_KINDS = ("mle_closed", "mle_grid", "mle_numeric", "mspe", "median", "mean", "mvub",
                  "midrange")


class UnsupportedModelError(ValueError):
    """The baseline is not defined for this family."""


@dataclass(frozen=True)
class BaselineSpec:
    """Which comparator to run and how finely to search.

    Attributes
    ----------
    kind : str
        One of ``BASELINE_KINDS``.
    grid_points : int
        Points per anchor window for ``mle_grid``.
    mspe_points : int
        Points across the parameter interval for ``mspe``.
    anchor : str
        Centre of the ``mle_grid`` windows: ``our_estimate`` or ``median``.
    """

    kind: str = "mle_closed"
    grid_points: int = 10 ** 5
    mspe_points: int = 2 * 10 ** 5
    anchor: str = "our_estimate"

    def __post_init__(self):
        if self.kind not in BASELINE_KINDS:
            raise ValueError(f"unknown baseline {self.kind!r}")
        if self.grid_points < 10 ** 3 or self.mspe_points < 10 ** 3:
            raise ValueError("grid sizes must be at least 1000")
        if self.anchor not in ("our_estimate", "median"):
            raise ValueError("anchor must be 'our_estimate' or 'median'")


def mle_closed(model: ParametricModel, sample: Sample) -> np.ndarray:
    """Explicit maximum likelihood estimate, clamped to the rectangle.

    Raises
    ------
    UnsupportedModelError
        If the family has no closed-form MLE.
    """
    if not model.has_closed_mle:
        raise UnsupportedModelError(f"{model.name} has no closed-form MLE")
    return model.closed_mle(sample.values)


_SCIPY_FITS = {
    "cauchy-2d": (stats.cauchy, {}),
    "gamma-2d": (stats.gamma, {"floc": 0.0}),
    "beta-2d": (stats.beta, {"floc": 0.0, "fscale": 1.0}),
}


def mle_numeric(model: ParametricModel, sample: Sample) -> np.ndarray:
    """Numerical MLE for two-parameter families without a closed form.

    Delegates to ``scipy.stats`` maximum likelihood fitting, then maps the
    fitted values to this package's parametrization and clamps to the
    rectangle.

    Raises
    ------
    UnsupportedModelError
        If the family is not ``cauchy-2d``, ``gamma-2d`` or ``beta-2d``.
    """
    if model.name not in _SCIPY_FITS:
        raise UnsupportedModelError(f"no numerical MLE for {model.name}")
    dist, fixed = _SCIPY_FITS[model.name]
    v = sample.values
    if model.name == "cauchy-2d":
        loc, scale = dist.fit(v)
        theta = (loc, scale)
    elif model.name == "gamma-2d":
        a, _, scale = dist.fit(v, **fixed)
        theta = (a, 1.0 / scale)
    else:
        a, b, _, _ = dist.fit(np.clip(v, 1e-300, 1.0 - 1e-16), **fixed)
        theta = (a, b)
    return model.theta_rect.clamp(np.asarray(theta, dtype=float))


@njit(cache=True)
def _loglik_argmax(kind, x, grid):
    best = -math.inf
    arg = 0
    for g in range(grid.shape[0]):
        s = 0.0
        for i in range(x.shape[0]):
            f = K.pdf(kind, x[i], grid[g], 0.0)
            if f <= 0.0:
                s = -math.inf
                break
            s += math.log(f)
        if s > best:
            best = s
            arg = g
    return arg, best


def mle_grid(model: ParametricModel, sample: Sample,
             spec: BaselineSpec | None = None, anchors=()) -> np.ndarray:
    """Grid-search MLE over windows of width 2 around each anchor.

    Each window ``[max(m, c - 1), min(M, c + 1)]`` holds
    ``spec.grid_points`` equally spaced points. The best log-likelihood over
    all windows wins; ties go to the smallest parameter.
    """
    if model.dim != 1:
        raise UnsupportedModelError("mle_grid handles one-parameter families")
    spec = spec or BaselineSpec("mle_grid")
    if len(anchors) == 0:
        anchors = [simple_stats(sample, "median", model)[0]]
    m, big_m = model.theta_rect.lower[0], model.theta_rect.upper[0]
    best_val, best_theta = -math.inf, None
    for c in anchors:
        c = float(np.atleast_1d(c)[0])
        grid = np.linspace(max(m, c - 1.0), min(big_m, c + 1.0), spec.grid_points)
        arg, val = _loglik_argmax(model.kind, sample.values, grid)
        theta = float(grid[arg])
        if val > best_val or (val == best_val and best_theta is not None
                              and theta < best_theta):
            best_val, best_theta = val, theta
    if best_theta is None:
        best_theta = float(np.atleast_1d(anchors[0])[0])
    return model.theta_rect.clamp(best_theta)


def mspe(model: ParametricModel, sample: Sample,
         spec: BaselineSpec | None = None, chunk: int = 4096) -> np.ndarray:
    """Maximum spacing product estimate on a regular grid of the interval.

    Maximizes ``sum_{i=0}^{n} log(F(X_(i+1)) - F(X_(i)))`` with
    ``F(X_(0)) = 0`` and ``F(X_(n+1)) = 1``. A spacing between tied
    observations is replaced by the density at the tie, so ties do not
    force the objective to minus infinity. Zero spacings otherwise give
    minus infinity. Ties in the objective go to the smallest parameter.

    Raises
    ------
    UnsupportedModelError
        If the family is multi-parameter or has no distribution function.
    """
    if model.dim != 1:
        raise UnsupportedModelError("mspe handles one-parameter families")
    if not model.has_cdf:
        raise UnsupportedModelError(f"{model.name} has no distribution function")
    spec = spec or BaselineSpec("mspe")
    xs = np.sort(sample.values)
    if xs.size < 2:
        raise ValueError("mspe needs at least two observations")
    tied = np.diff(xs) == 0.0
    grid = np.linspace(model.theta_rect.lower[0], model.theta_rect.upper[0],
                       spec.mspe_points)
    best_val, best_theta = -math.inf, float(grid[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        for start in range(0, grid.size, chunk):
            g = grid[start:start + chunk]
            # Shape (1, k, 1) so the family's ``t[0]`` is a column of k values.
            cdf = model.cdf(g[None, :, None], xs[None, :])
            cdf = np.concatenate([np.zeros((g.size, 1)), cdf,
                                  np.ones((g.size, 1))], axis=1)
            spac = np.diff(cdf, axis=1)
            if tied.any():
                inner = spac[:, 1:-1]
                for j in np.flatnonzero(tied):
                    inner[:, j] = [model.density(t, xs[j]) for t in g]
            obj = np.sum(np.log(np.where(spac > 0, spac, 0.0)), axis=1)
            obj = np.where(np.isnan(obj), -math.inf, obj)
            i = int(np.argmax(obj))
            if obj[i] > best_val:
                best_val, best_theta = float(obj[i]), float(g[i])
    return model.theta_rect.clamp(best_theta)


def simple_stats(sample: Sample, kind: str,
                 model: ParametricModel | None = None) -> np.ndarray:
    """Median (lower), mean, MVUB ``(n+1)/n max`` or midrange.

    Clamped to the model's rectangle when a model is given.
    """
    v = np.sort(sample.values)
    n = v.size
    if kind == "median":
        est = v[(n - 1) // 2]
    elif kind == "mean":
        est = float(np.mean(v))
    elif kind == "mvub":
        est = (n + 1) / n * v[-1]
    elif kind == "midrange":
        est = 0.5 * (v[0] + v[-1])
    else:
        raise ValueError(f"unknown statistic {kind!r}")
    out = np.array([float(est)])
    return model.theta_rect.clamp(out) if model is not None else out
