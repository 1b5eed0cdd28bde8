"""Rectangle-shrinking estimation for multi-parameter families.

Each outer step picks a coordinate ``k`` and sweeps two probes across the
face ``theta_k = a_k`` and the face ``theta'_k = b_k`` of the current
rectangle. Every test removes a box around the probe it disfavours; when a
sweep has covered its whole face, the matching side of the rectangle moves
inwards along ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hellsearch import _kernels as K
from hellsearch.distance import DEFAULT_QUAD, QuadratureError, QuadratureSpec, trigamma
from hellsearch.models import ParameterRect, ParametricModel, Sample
from hellsearch.search1d import Estimate, IterationCapError, kappa_bar
from hellsearch.testing import GridSpec

__all__ = [
    "RADIUS_RULES_MD",
    "EstimatorConfigMD",
    "RectangleState",
    "RectRadiusConstants",
    "SearchTraceMD",
    "UnsupportedRuleError",
    "default_sweep_maps",
    "rect_constants",
    "select_coordinate",
    "annexe_radii",
    "radius_vector_md",
    "step_rectangle",
    "estimate_md",
    "test_count_bound_md",
]

RADIUS_RULES_MD = ("annexe_geometry", "hellinger_based", "parametric")
RECT_CONSTANT_MODES = ("global", "per_rectangle")


class UnsupportedRuleError(ValueError):
    """The requested radius rule has no implementation for this family."""


def default_sweep_maps(d: int) -> tuple[tuple[int, ...], ...]:
    """For each ``k``, the other coordinates in increasing order."""
    return tuple(tuple(j for j in range(d) if j != k) for k in range(d))


@dataclass(frozen=True)
class EstimatorConfigMD:
    """Settings of the multi-dimensional search.

    Attributes
    ----------
    kappa : float
        Shrink parameter in ``(0, kappa_bar())``.
    t : tuple of float or None
        Grid thinness per coordinate; ``None`` means no discretization.
    eta : tuple of float or None
        Stopping widths; ``None`` means ``(M_j - m_j) * 1e-6``.
    radius_rule : str
        ``annexe_geometry``, ``hellinger_based`` or ``parametric``.
    sweep_maps : tuple of tuples or None
        ``sweep_maps[k]`` orders the coordinates other than ``k``.
    rect_constants_mode : str
        ``global`` uses the model's lower constants on every rectangle;
        ``per_rectangle`` recomputes them on the current rectangle where an
        explicit formula exists.
    max_outer_steps : int
        Cap on the number of rectangle updates.
    max_inner_tests : int
        Cap on the number of tests within one rectangle update.
    quad : QuadratureSpec
        Tolerances for every integral computed during the search.
    """

    kappa: float = field(default_factory=lambda: 0.9 * kappa_bar())
    t: tuple[float, ...] | None = None
    eta: tuple[float, ...] | None = None
    radius_rule: str = "annexe_geometry"
    sweep_maps: tuple[tuple[int, ...], ...] | None = None
    rect_constants_mode: str = "global"
    max_outer_steps: int = 10 ** 6
    max_inner_tests: int = 10 ** 6
    quad: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self):
        kb = kappa_bar()
        if not 0.0 < self.kappa < kb:
            raise ValueError(
                f"kappa={self.kappa} must lie in (0, kappa_bar) with "
                f"kappa_bar = {kb:.7f}")
        if self.radius_rule not in RADIUS_RULES_MD:
            raise ValueError(f"unknown radius rule {self.radius_rule!r}; "
                             f"choose one of {RADIUS_RULES_MD}")
        if self.rect_constants_mode not in RECT_CONSTANT_MODES:
            raise ValueError("rect_constants_mode must be one of "
                             f"{RECT_CONSTANT_MODES}")
        if self.eta is not None and any(not e > 0 for e in self.eta):
            raise ValueError("eta must be positive")
        if self.t is not None and any(v < 0 for v in self.t):
            raise ValueError("t must be nonnegative")
        if self.sweep_maps is not None:
            d = len(self.sweep_maps)
            for k, psi in enumerate(self.sweep_maps):
                if sorted(psi) != [j for j in range(d) if j != k]:
                    raise ValueError(
                        f"sweep_maps[{k}] must enumerate every index but {k}")

    def resolved_eta(self, model: ParametricModel) -> np.ndarray:
        if self.eta is not None:
            return np.broadcast_to(np.asarray(self.eta, dtype=float),
                                   (model.dim,)).copy()
        return model.theta_rect.widths * 1e-6

    def resolved_sweeps(self, d: int) -> tuple[tuple[int, ...], ...]:
        maps = self.sweep_maps or default_sweep_maps(d)
        if len(maps) != d:
            raise ValueError(f"need {d} sweep maps, got {len(maps)}")
        return maps


@dataclass(frozen=True)
class RectRadiusConstants:
    """Sandwich constants valid on a sub-rectangle."""

    r_lower_C: np.ndarray
    r_upper_C: np.ndarray


@dataclass
class RectangleState:
    """Bookkeeping of one rectangle update.

    ``theta`` and ``theta_prime`` are the probes; ``eps`` and ``eps_prime``
    the running step sizes; ``inner_count`` the tests computed so far.
    """

    rect: ParameterRect
    k: int
    theta: np.ndarray
    theta_prime: np.ndarray
    eps: np.ndarray
    eps_prime: np.ndarray
    inner_count: int = 0


@dataclass(frozen=True)
class SearchTraceMD:
    """Per-step record of the multi-dimensional search.

    ``lower`` and ``upper`` have one row per rectangle, starting with the
    parameter rectangle; ``coordinates[i]`` and ``inner_counts[i]`` describe
    the update from row ``i`` to row ``i + 1``. ``probes`` holds
    ``(theta, theta', T)`` rows when recorded.
    """

    lower: np.ndarray
    upper: np.ndarray
    coordinates: np.ndarray
    inner_counts: np.ndarray
    test_count: int
    probes: np.ndarray | None = None


# ---------------------------------------------------------------------------
# Constants on rectangles and coordinate choice
# ---------------------------------------------------------------------------

def _gauss_lower_on(a, b):
    length = b[0] - a[0]
    s_lo, s_hi = a[1], b[1]
    ratio = math.sqrt(2.0 * s_hi * s_lo / (s_hi * s_hi + s_lo * s_lo))
    return np.array([ratio * -math.expm1(-length * length / (8.0 * s_hi * s_hi))
                     / length ** 2, 1.0 / (4.0 * s_hi * s_hi)])


def _shiftexp_lower_on(a, b):
    length = b[0] - a[0]
    l_lo, l_hi = a[1], b[1]
    ratio = 2.0 * math.sqrt(l_hi * l_lo) / (l_hi + l_lo)
    return np.array([ratio * -math.expm1(-l_lo * length / 2.0) / length,
                     1.0 / (8.0 * l_hi * l_hi)])


_RECT_LOWER = {K.GAUSS_2D: _gauss_lower_on, K.SHIFTEXP_2D: _shiftexp_lower_on}


def rect_constants(model: ParametricModel, rect: ParameterRect,
                   mode: str = "global") -> RectRadiusConstants:
    """Lower and upper constants to use on ``rect``.

    In ``per_rectangle`` mode the explicit lower bounds of the Gaussian and
    shifted-exponential families are evaluated on ``rect`` (never below the
    global values); other families keep their global constants.
    """
    c = model.constants
    lower = np.asarray(c.r_lower, dtype=float)
    if mode == "per_rectangle" and model.kind in _RECT_LOWER:
        a, b = np.asarray(rect.lower), np.asarray(rect.upper)
        lower = np.maximum(lower, _RECT_LOWER[model.kind](a, b))
    elif mode not in RECT_CONSTANT_MODES:
        raise ValueError(f"unknown rect_constants_mode {mode!r}")
    return RectRadiusConstants(lower, np.asarray(c.r_upper, dtype=float))


def select_coordinate(rect: ParameterRect, constants: RectRadiusConstants,
                      alpha) -> int:
    """Index maximizing ``R_lower_C_j (b_j - a_j)^alpha_j``; ties go to the
    smallest index."""
    score = (np.asarray(constants.r_lower_C)
             * rect.widths ** np.asarray(alpha, dtype=float))
    return int(np.argmax(score))


# ---------------------------------------------------------------------------
# Radius rules
# ---------------------------------------------------------------------------

def _annexe_gauss(theta, xi, a, b):
    s = theta[1]
    w = math.sqrt(2.0 * xi - xi * xi)
    om = 1.0 - xi
    rm = 2.0 * (1.0 - w) / om * math.sqrt(-math.log1p(-xi)) * s
    return np.array([rm, s * (w - xi) / om]), np.array([rm, s * (xi + w) / om])


def _annexe_cauchy(theta, xi, a, b):
    s = theta[1]
    rq = 2.0 * math.sqrt(xi)
    rm = s * rq
    return (np.array([rm, -s * math.expm1(-rq)]),
            np.array([rm, s * math.expm1(rq)]))


def _annexe_gamma(theta, xi, a, b):
    sa, sb = theta
    down_a = math.sqrt(2.0 * xi / trigamma(a[0]))
    up_a = math.sqrt(2.0 * xi / trigamma(sa))
    # xi' = (1 - xi/4)^(1/a); 1 - xi'^2 via expm1/log1p for accuracy.
    one_minus = -math.expm1(2.0 / sa * math.log1p(-xi / 4.0))
    xp2 = 1.0 - one_minus
    wp = math.sqrt(one_minus)
    return (np.array([down_a, sb * 2.0 * wp * (1.0 - wp) / xp2]),
            np.array([up_a, sb * 2.0 * wp * (1.0 + wp) / xp2]))


def _annexe_beta(theta, xi, a, b):
    sa, sb = theta
    a1, b1, b2 = a[0], a[1], b[1]
    down_a = math.sqrt(2.0 * xi / (trigamma(a1) - trigamma(a1 + b2)))
    up_a = math.sqrt(2.0 * xi / (trigamma(sa) - trigamma(sa + b2)))
    down_b = math.sqrt(2.0 * xi / (trigamma(b1) - trigamma(sa + b1)))
    up_b = math.sqrt(2.0 * xi / (trigamma(sb) - trigamma(sa + sb)))
    return np.array([down_a, down_b]), np.array([up_a, up_b])


def _annexe_shiftexp(theta, xi, a, b):
    lam = theta[1]
    rx = math.sqrt(xi)
    lg = -math.log1p(-xi)
    om = 1.0 - xi
    down_m = om / (1.0 + xi + 2.0 * rx) * lg / lam
    up_m = lg / lam
    return (np.array([down_m, lam * (2.0 * rx - 2.0 * xi) / om]),
            np.array([up_m, lam * (2.0 * xi + 2.0 * rx) / om]))


def _annexe_unif_locscale(theta, xi, a, b):
    r = theta[1]
    q = 1.0 - 0.5 * xi
    # Downward location radius: the sufficient condition evaluated at the
    # smallest admissible scale (q^2 r) gives (xi/2) q r.
    return (np.array([0.5 * xi * q * r, r * (1.0 - q * q)]),
            np.array([xi / (2.0 - xi) * r, r * (1.0 / (q * q) - 1.0)]))


_ANNEXE = {
    K.GAUSS_2D: _annexe_gauss,
    K.CAUCHY_2D: _annexe_cauchy,
    K.GAMMA_2D: _annexe_gamma,
    K.BETA_2D: _annexe_beta,
    K.SHIFTEXP_2D: _annexe_shiftexp,
    K.UNIF_LOCSCALE_2D: _annexe_unif_locscale,
}


def annexe_radii(model: ParametricModel, rect: ParameterRect, theta,
                 xi: float) -> tuple[np.ndarray, np.ndarray]:
    """Downward and upward radii of a box around ``theta`` whose
    intersection with ``rect`` lies in ``{u : h^2(f_theta, f_u) <= xi}``.

    Raises
    ------
    UnsupportedRuleError
        If the family has no explicit box geometry.
    """
    fn = _ANNEXE.get(model.kind)
    if fn is None:
        raise UnsupportedRuleError(
            f"{model.name} has no explicit box geometry")
    return fn(np.asarray(theta, dtype=float), float(xi),
              np.asarray(rect.lower), np.asarray(rect.upper))


def _pair(theta):
    return float(theta[0]), (float(theta[1]) if len(theta) > 1 else 0.0)


def _hsq(model, theta, theta_prime, quad):
    t0, t1 = _pair(theta)
    u0, u1 = _pair(theta_prime)
    v, status = K.hsq(model.kind, t0, t1, u0, u1, *quad.args)
    if status != K.OK:
        raise QuadratureError(f"h^2 quadrature failed for {model.name}")
    return v


def radius_vector_md(model: ParametricModel, rect: ParameterRect, theta,
                     theta_prime, kappa: float, rule: str,
                     constants: RectRadiusConstants | None = None,
                     quad: QuadratureSpec = DEFAULT_QUAD,
                     h2: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Radii ``(r_bar, r_under)`` of a box around ``theta``.

    ``rect`` intersected with ``prod_j [theta_j - r_under_j,
    theta_j + r_bar_j]`` lies in the Hellinger ball of radius
    ``sqrt(kappa) h(f_theta, f_theta')`` around ``theta``.

    * ``hellinger_based``: ``((kappa / R_upper_C_j) h^2)^(1/alpha_j)``.
    * ``parametric``: ``(kappa / R_upper_C_j * max_k R_lower_C_k
      |theta'_k - theta_k|^alpha_k)^(1/alpha_j)``.
    * ``annexe_geometry``: the family's explicit box at ``xi = kappa h^2``.

    ``h2`` may be passed to reuse an already computed distance.
    """
    theta = np.asarray(theta, dtype=float)
    theta_prime = np.asarray(theta_prime, dtype=float)
    constants = constants or rect_constants(model, rect)
    alpha = np.asarray(model.constants.alpha)
    if rule == "parametric":
        delta = np.abs(theta_prime - theta)
        lead = float(np.max(constants.r_lower_C * delta ** alpha))
        r = (kappa / constants.r_upper_C * lead) ** (1.0 / alpha)
        return r, r.copy()
    if h2 is None:
        h2 = _hsq(model, theta, theta_prime, quad)
    if rule == "hellinger_based":
        r = (kappa / constants.r_upper_C * h2) ** (1.0 / alpha)
        return r, r.copy()
    if rule == "annexe_geometry":
        down, up = annexe_radii(model, rect, theta, kappa * h2)
        return up, down
    raise ValueError(f"unknown radius rule {rule!r}")


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

class _Tester:
    """Evaluates the projected test statistic on a fixed sample."""

    def __init__(self, model, sample, grid, quad, record):
        self.kind = model.kind
        self.x = sample.values
        self.origin = grid.origin
        self.eps = grid.epsilon
        self.quad_args = quad.args
        self.probes = [] if record else None

    def __call__(self, theta, theta_prime):
        t0, t1 = _pair(theta)
        u0, u1 = _pair(theta_prime)
        if self.eps[0] > 0:
            t0 = K.project(t0, self.origin[0], self.eps[0])
            u0 = K.project(u0, self.origin[0], self.eps[0])
        if len(self.eps) > 1 and self.eps[1] > 0:
            t1 = K.project(t1, self.origin[1], self.eps[1])
            u1 = K.project(u1, self.origin[1], self.eps[1])
        v, status = K.tbar(self.kind, self.x, t0, t1, u0, u1, *self.quad_args)
        if status != K.OK:
            raise QuadratureError("integral term did not converge")
        if self.probes is not None:
            self.probes.append((*theta, *theta_prime, v))
        return v


def _shared_h2(model, theta, theta_prime, rule, quad):
    """h^2 of a probe pair, shared by the radii around either probe."""
    return None if rule == "parametric" else _hsq(model, theta, theta_prime, quad)


def step_rectangle(model: ParametricModel, sample: Sample,
                   rect: ParameterRect, config: EstimatorConfigMD,
                   grid: GridSpec | None = None,
                   tester=None) -> tuple[ParameterRect, RectangleState]:
    """One rectangle update; returns the new rectangle and the final state.

    The probe ``theta`` starts at the lower corner and ``theta'`` at the
    lower corner with coordinate ``k`` raised to ``b_k``. After each test
    the favoured side's probe advances along the sweep order of ``k``,
    odometer style, by the running minimum of the radii seen so far. When a
    probe has covered its face, ``a_k`` (or ``b_k``) moves inwards by the
    running minimum of the radii along ``k``. A zero test advances both
    probes.

    Raises
    ------
    IterationCapError
        If ``config.max_inner_tests`` tests did not finish the sweep.
    """
    d = model.dim
    grid = grid or GridSpec.identity(d)
    if tester is None:
        tester = _Tester(model, sample, grid, config.quad, False)
    kappa = float(config.kappa)
    rule = config.radius_rule
    quad = config.quad
    consts = rect_constants(model, rect, config.rect_constants_mode)
    k = select_coordinate(rect, consts, model.constants.alpha)
    psi = config.resolved_sweeps(d)[k]
    a = np.asarray(rect.lower, dtype=float)
    b = np.asarray(rect.upper, dtype=float)

    def radii(p, q, h2):
        return radius_vector_md(model, rect, p, q, kappa, rule, consts, quad, h2)

    theta = a.copy()
    theta_p = a.copy()
    theta_p[k] = b[k]
    h2 = _shared_h2(model, theta, theta_p, rule, quad)
    eps = radii(theta, theta_p, h2)[0]
    eps_p = radii(theta_p, theta, h2)[0]
    eps[k] = eps_p[k] = 0.5 * (b[k] - a[k])
    state = RectangleState(rect, k, theta, theta_p, eps, eps_p, 0)

    lower_done = upper_done = False
    while True:
        if state.inner_count >= config.max_inner_tests:
            raise IterationCapError(
                f"{model.name}: {state.inner_count} tests in one rectangle "
                "update without finishing the sweep")
        test = tester(theta, theta_p)
        state.inner_count += 1
        h2 = None
        new_theta = theta.copy()
        new_theta_p = theta_p.copy()
        if test >= 0.0:
            h2 = _shared_h2(model, theta, theta_p, rule, quad)
            r_bar = radii(theta, theta_p, h2)[0]
            eps[psi[0]] = r_bar[psi[0]]
            for j in psi[1:]:
                eps[j] = min(eps[j], r_bar[j])
            eps[k] = min(eps[k], r_bar[k])
            lower_done = _advance(psi, theta, new_theta, eps, a, b)
        if test <= 0.0:
            if h2 is None:
                h2 = _shared_h2(model, theta, theta_p, rule, quad)
            r_bar_p, r_under_p = radii(theta_p, theta, h2)
            eps_p[psi[0]] = r_bar_p[psi[0]]
            for j in psi[1:]:
                eps_p[j] = min(eps_p[j], r_bar_p[j])
            eps_p[k] = min(eps_p[k], r_under_p[k])
            upper_done = _advance(psi, theta_p, new_theta_p, eps_p, a, b)
        theta, theta_p = new_theta, new_theta_p
        state.theta, state.theta_prime = theta, theta_p
        if lower_done or upper_done:
            break

    new_a, new_b = a.copy(), b.copy()
    if lower_done:
        new_a[k] = a[k] + eps[k]
    if upper_done:
        new_b[k] = b[k] - eps_p[k]
    return ParameterRect(tuple(new_a), tuple(new_b)), state


def _advance(psi, probe, new_probe, eps, a, b) -> bool:
    """Odometer step of a probe; returns True when its face is covered."""
    for idx, j in enumerate(psi):
        if probe[j] + eps[j] < b[j]:
            for jj in psi[:idx]:
                new_probe[jj] = a[jj]
            new_probe[j] = probe[j] + eps[j]
            return False
    return True


def estimate_md(model: ParametricModel, sample: Sample,
                config: EstimatorConfigMD | None = None,
                record_trace: bool = False) -> Estimate:
    """Repeat rectangle updates until every side is at most ``eta_j``.

    Returns the centre of the final rectangle.

    Raises
    ------
    IterationCapError
        If ``config.max_outer_steps`` updates did not suffice.
    """
    if model.dim < 2:
        raise ValueError(f"{model.name} is a one-parameter family")
    config = config or EstimatorConfigMD()
    if config.radius_rule == "annexe_geometry" and model.kind not in _ANNEXE:
        raise UnsupportedRuleError(f"{model.name} has no explicit box geometry")
    eta = config.resolved_eta(model)
    t = config.t if config.t is not None else (0.0,) * model.dim
    grid = GridSpec.for_model(model, t, sample.n)
    tester = _Tester(model, sample, grid, config.quad, record_trace)
    rect = model.theta_rect
    lowers, uppers, ks, counts = [rect.lower], [rect.upper], [], []
    while np.any(rect.widths > eta):
        if len(ks) >= config.max_outer_steps:
            raise IterationCapError(
                f"{model.name}: {len(ks)} rectangle updates without reaching "
                "the stopping widths")
        rect, state = step_rectangle(model, sample, rect, config, grid, tester)
        lowers.append(rect.lower)
        uppers.append(rect.upper)
        ks.append(state.k)
        counts.append(state.inner_count)
    total = int(sum(counts))
    probes = (np.asarray(tester.probes, dtype=float).reshape(-1, 2 * model.dim + 1)
              if record_trace else None)
    trace = SearchTraceMD(np.asarray(lowers), np.asarray(uppers),
                          np.asarray(ks, dtype=int),
                          np.asarray(counts, dtype=int), total, probes)
    return Estimate(rect.center, np.asarray(rect.lower), np.asarray(rect.upper),
                    total, trace, config, False)


def test_count_bound_md(model: ParametricModel, kappa: float, eta) -> float:
    """Upper bound on the number of tests of :func:`estimate_md`.

    ``4 prod_j (1 + (R_upper_j / (kappa R_lower_j))^(1/alpha_j))
    * sum_j max{1, log((M_j - m_j) / eta_j)}``.
    """
    c = model.constants
    alpha = np.asarray(c.alpha)
    ratio = (np.asarray(c.r_upper) / (kappa * np.asarray(c.r_lower))) ** (1.0 / alpha)
    eta = np.broadcast_to(np.asarray(eta, dtype=float), alpha.shape)
    logs = np.maximum(1.0, np.log(model.theta_rect.widths / eta))
    return float(4.0 * np.prod(1.0 + ratio) * np.sum(logs))


test_count_bound_md.__test__ = False
