"""The robust pairwise test statistic and the parameter discretization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hellsearch import _kernels as K
from hellsearch.distance import DEFAULT_QUAD, QuadratureError, QuadratureSpec
from hellsearch.models import ParametricModel, Sample

__all__ = [
    "GridSpec",
    "TestValue",
    "project_to_grid",
    "baraud_statistic",
    "test_T",
    "grid_epsilon",
]


def grid_epsilon(t, r_upper, alpha, n: int) -> tuple[float, ...]:
    """Mesh ``eps_j = t_j (R_upper_j n)^(-1/alpha_j)``; zero when ``t_j = 0``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    r = np.atleast_1d(np.asarray(r_upper, dtype=float))
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    return tuple(float(tj * (rj * n) ** (-1.0 / aj)) if tj > 0 else 0.0
                 for tj, rj, aj in zip(t, r, a))


@dataclass(frozen=True)
class GridSpec:
    """Discretization lattice ``origin + eps * Z^d``.

    ``t_j = 0`` disables the lattice in coordinate j.
    """

    t: tuple[float, ...]
    epsilon: tuple[float, ...]
    origin: tuple[float, ...]

    def __post_init__(self):
        for name in ("t", "epsilon", "origin"):
            object.__setattr__(self, name, tuple(
                float(v) for v in np.atleast_1d(getattr(self, name))))
        if not len(self.t) == len(self.epsilon) == len(self.origin):
            raise ValueError("grid vectors must share one length")
        for tj, ej in zip(self.t, self.epsilon):
            if tj < 0 or ej < 0:
                raise ValueError("t and epsilon must be nonnegative")
            if (tj == 0) != (ej == 0):
                raise ValueError("epsilon_j must vanish exactly when t_j does")

    @classmethod
    def for_model(cls, model: ParametricModel, t, n: int) -> "GridSpec":
        t = np.broadcast_to(np.atleast_1d(np.asarray(t, dtype=float)),
                            (model.dim,))
        eps = grid_epsilon(t, model.constants.r_upper, model.constants.alpha, n)
        return cls(tuple(t), eps, model.theta_rect.lower)

    @classmethod
    def identity(cls, d: int) -> "GridSpec":
        return cls((0.0,) * d, (0.0,) * d, (0.0,) * d)

    def theory_mode_ok(self, alpha) -> bool:
        """Whether every ``t_j`` lies in ``(0, d^(1/alpha_j)]``, the range
        covered by the risk bounds."""
        d = len(self.t)
        a = np.broadcast_to(np.atleast_1d(np.asarray(alpha, dtype=float)), (d,))
        return all(0 < tj <= d ** (1.0 / aj) for tj, aj in zip(self.t, a))


@dataclass(frozen=True)
class TestValue:
    """A test value with the projected parameters it was computed at."""

    value: float
    f_theta_used: tuple[float, ...]
    f_theta_prime_used: tuple[float, ...]


TestValue.__test__ = False


def project_to_grid(x, grid: GridSpec) -> np.ndarray:
    """Componentwise ``m_j + floor((x_j - m_j) / eps_j) eps_j``.

    Components with ``eps_j = 0`` are returned unchanged.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.array([K.project(float(v), m, e)
                     for v, m, e in zip(x, grid.origin, grid.epsilon)])


def _pair(theta):
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    return float(t[0]), (float(t[1]) if t.size > 1 else 0.0)


def baraud_statistic(model: ParametricModel, theta, theta_prime,
                     sample: Sample, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Pairwise test statistic between ``g = f_theta`` and ``g' = f_theta'``.

    ``(1/n) sum_i (sqrt g'(X_i) - sqrt g(X_i)) / sqrt(g(X_i) + g'(X_i))
    + (1/2) int sqrt(g + g') (sqrt g' - sqrt g)``, with ``0/0 = 0``.
    A positive value favours ``theta'``.

    The pair is evaluated in lexicographic order and the result negated
    when swapped, so exchanging the arguments negates the value exactly.
    The integral vanishes for even location families and is then skipped.

    Raises
    ------
    QuadratureError
        If the integral term does not converge.
    """
    t0, t1 = _pair(theta)
    u0, u1 = _pair(theta_prime)
    v, status = K.tbar(model.kind, sample.values, t0, t1, u0, u1, *quad.args)
    if status != K.OK:
        raise QuadratureError(
            f"integral term for {model.name} at {theta}, {theta_prime} "
            "did not converge")
    return float(v)


def test_T(model: ParametricModel, theta, theta_prime, sample: Sample,
           grid: GridSpec | None = None,
           quad: QuadratureSpec = DEFAULT_QUAD) -> TestValue:
    """Discretized test: the statistic at the grid projections of both points."""
    grid = grid or GridSpec.identity(model.dim)
    pt = project_to_grid(theta, grid)
    pu = project_to_grid(theta_prime, grid)
    value = baraud_statistic(model, pt, pu, sample, quad)
    return TestValue(value, tuple(float(v) for v in pt),
                     tuple(float(v) for v in pu))


test_T.__test__ = False
