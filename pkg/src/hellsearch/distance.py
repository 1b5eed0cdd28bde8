"""Squared Hellinger distance, closed forms and the trigamma function."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hellsearch import _kernels as K
from hellsearch.models import ParametricModel

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "DEFAULT_QUAD",
    "hellinger_sq",
    "hellinger_sq_codes",
    "hellinger_sq_quadrature",
    "hellinger_affinity_closed",
    "trigamma",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach its tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances of the adaptive Gauss-Kronrod (G10/K21) integrator.

    The real line is first cut at each density's edges, kinks,
    singularities and centre. Finite pieces are integrated under a
    smoothstep substitution of degree 7, which tames endpoint singularities,
    with each density evaluated from the nearer piece end plus an offset.
    Unbounded pieces use ``x = lo - s log t`` for exponential tails and
    ``x = lo + s tan t`` for algebraic tails, ``s`` being the family's
    scale.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")

    @property
    def args(self) -> tuple[float, float, int]:
        return float(self.abs_tol), float(self.rel_tol), int(self.max_subdivisions)


DEFAULT_QUAD = QuadratureSpec()

# Families whose squared Hellinger distance has an exposed closed form.
_CLOSED = frozenset({
    "exp-rate", "gauss-loc", "rayleigh", "unif-scale", "unif-loc",
    "gauss-2d", "shiftexp-2d", "unif-locscale-2d",
})


def _pair(theta) -> tuple[float, float]:
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    return float(t[0]), (float(t[1]) if t.size > 1 else 0.0)


def hellinger_affinity_closed(name: str, theta, theta_prime) -> float | None:
    """Closed-form ``h^2(f_theta, f_theta')`` or ``None`` when not available.

    Available for exp-rate, gauss-loc, rayleigh, unif-scale, unif-loc,
    gauss-2d, shiftexp-2d and unif-locscale-2d. Every other family goes
    through quadrature.
    """
    if name not in _CLOSED:
        return None
    kind = _code_of(name)
    t0, t1 = _pair(theta)
    u0, u1 = _pair(theta_prime)
    return float(K.hsq_closed(kind, t0, t1, u0, u1))


def _code_of(name: str) -> int:
    from hellsearch.models import catalog_lookup
    return catalog_lookup(name).kind


def hellinger_sq(model: ParametricModel, theta, theta_prime,
                 quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Squared Hellinger distance ``(1/2) int (sqrt f - sqrt g)^2``.

    Uses the family's closed form when there is one, quadrature otherwise.

    Raises
    ------
    QuadratureError
        If quadrature does not converge within ``quad.max_subdivisions``.
    """
    t0, t1 = _pair(theta)
    u0, u1 = _pair(theta_prime)
    v, status = K.hsq(model.kind, t0, t1, u0, u1, *quad.args)
    if status != K.OK:
        raise QuadratureError(
            f"h^2 quadrature for {model.name} at {theta}, {theta_prime} "
            f"did not converge")
    return float(v)


def hellinger_sq_quadrature(model: ParametricModel, theta, theta_prime,
                            quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Squared Hellinger distance by quadrature, ignoring any closed form.

    Raises
    ------
    QuadratureError
        If quadrature does not converge within ``quad.max_subdivisions``.
    """
    t0, t1 = _pair(theta)
    u0, u1 = _pair(theta_prime)
    if t0 == u0 and t1 == u1:
        return 0.0
    v, _, status = K.integrate(K.HSQ, model.kind, t0, t1, model.kind, u0, u1,
                               *quad.args)
    if status != K.OK:
        raise QuadratureError(
            f"h^2 quadrature for {model.name} at {theta}, {theta_prime} "
            "did not converge")
    return float(min(max(v, 0.0), 1.0))


def hellinger_sq_codes(kind_a: int, params_a, kind_b: int, params_b,
                       quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Squared Hellinger distance between densities of two different codes.

    Used to measure the distance from a truth density that need not belong
    to the model.
    """
    a0, a1 = _pair(params_a)
    b0, b1 = _pair(params_b)
    if kind_a == kind_b:
        v, status = K.hsq(kind_a, a0, a1, b0, b1, *quad.args)
    else:
        v, _, status = K.integrate(K.HSQ, kind_a, a0, a1, kind_b, b0, b1,
                                   *quad.args)
        v = min(max(v, 0.0), 1.0)
    if status != K.OK:
        raise QuadratureError("h^2 quadrature did not converge")
    return float(v)


# Bernoulli-number coefficients B_{2k} of the asymptotic trigamma series.
_TRIGAMMA_SERIES = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0)
_TRIGAMMA_SHIFT = 10.0


def _trigamma_scalar(x: float) -> float:
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"trigamma is defined for positive finite x, got {x}")
    acc = 0.0
    while x < _TRIGAMMA_SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for b in reversed(_TRIGAMMA_SERIES):
        series = series * inv2 + b
    return acc + inv + 0.5 * inv2 + inv * inv2 * series


def trigamma(x):
    """Trigamma function, the derivative of the digamma function.

    Upward recurrence to ``x >= 10`` followed by the asymptotic series
    ``1/x + 1/(2x^2) + sum_k B_2k / x^(2k+1)``.

    Raises
    ------
    ValueError
        If any ``x <= 0``.
    """
    if np.ndim(x) == 0:
        return _trigamma_scalar(float(x))
    arr = np.asarray(x, dtype=float)
    return np.vectorize(_trigamma_scalar, otypes=[float])(arr)
