"""Compiled numerical core shared by every public module.

All routines dispatch on an integer family code, so a single compiled
function serves the whole catalog and can be cached on disk by numba.
Parameters are passed as two scalars ``(p0, p1)``; one-parameter families
ignore ``p1``.
"""

import math

import numpy as np
from numba import njit

# Family codes. Values 0-13 are catalog models, 20+ are truth densities
# used by the simulation laboratory.
EXP_RATE = 0
GAUSS_LOC = 1
RAYLEIGH = 2
CAUCHY_LOC = 3
UNIF_SCALE = 4
PARETO_SHIFT = 5
UNIF_LOC = 6
SQRT_SINGULAR = 7
GAUSS_2D = 8
CAUCHY_2D = 9
GAMMA_2D = 10
BETA_2D = 11
SHIFTEXP_2D = 12
UNIF_LOCSCALE_2D = 13
UNIF_CONTAM = 20
UNIF_MIXTURE = 21
GAUSS_MIXTURE = 22

# Integrands.
HSQ = 0  # (1/2)(sqrt f - sqrt g)^2
TBAR = 1  # (1/2) sqrt(f + g) (sqrt g - sqrt f)
AFFINITY = 2  # sqrt(f g)

# Tail behaviour used to pick the substitution on unbounded pieces.
TAIL_NONE = 0
TAIL_EXP = 1
TAIL_ALG = 2

# Radius rules (1-D).
RULE_OPTIMAL = 0
RULE_HELLINGER = 1
RULE_PARAMETRIC = 2

# Status codes.
OK = 0
ITERATION_CAP = 1
QUAD_FAILURE = 2

INV_SQRT_2PI = 0.3989422804014327
INV_PI = 0.3183098861837907
HALF_PI = 0.5 * math.pi

_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208034825409, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])


# ---------------------------------------------------------------------------
# Densities and their geometry
# ---------------------------------------------------------------------------

@njit(cache=True)
def pdf(kind, x, p0, p1):
    """Density of family ``kind`` with parameters ``(p0, p1)`` at ``x``."""
    if kind == GAUSS_LOC:
        d = x - p0
        return INV_SQRT_2PI * math.exp(-0.5 * d * d)
    if kind == SQRT_SINGULAR:
        d = abs(x - p0)
        if d == 0.0 or d > 1.0:
            return 0.0
        return 0.25 / math.sqrt(d)
    if kind == EXP_RATE:
        if x < 0.0:
            return 0.0
        return p0 * math.exp(-p0 * x)
    if kind == RAYLEIGH:
        if x < 0.0:
            return 0.0
        return x / (p0 * p0) * math.exp(-x * x / (2.0 * p0 * p0))
    if kind == CAUCHY_LOC:
        d = x - p0
        return INV_PI / (1.0 + d * d)
    if kind == UNIF_SCALE:
        if x < 0.0 or x > p0:
            return 0.0
        return 1.0 / p0
    if kind == PARETO_SHIFT:
        if x < p0:
            return 0.0
        u = x - p0 + 1.0
        return 1.0 / (u * u)
    if kind == UNIF_LOC:
        if x < p0 - 0.5 or x > p0 + 0.5:
            return 0.0
        return 1.0
    if kind == GAUSS_2D:
        z = (x - p0) / p1
        return INV_SQRT_2PI / p1 * math.exp(-0.5 * z * z)
    if kind == CAUCHY_2D:
        d = x - p0
        return INV_PI * p1 / (d * d + p1 * p1)
    if kind == GAMMA_2D:
        if x <= 0.0:
            if x == 0.0 and p0 == 1.0:
                return p1
            return 0.0
        return math.exp(p0 * math.log(p1) - math.lgamma(p0)
                        + (p0 - 1.0) * math.log(x) - p1 * x)
    if kind == BETA_2D:
        if x <= 0.0 or x >= 1.0:
            return 0.0
        lbeta = math.lgamma(p0) + math.lgamma(p1) - math.lgamma(p0 + p1)
        return math.exp((p0 - 1.0) * math.log(x)
                        + (p1 - 1.0) * math.log1p(-x) - lbeta)
    if kind == SHIFTEXP_2D:
        if x < p0:
            return 0.0
        return p1 * math.exp(-p1 * (x - p0))
    if kind == UNIF_LOCSCALE_2D:
        if x < p0 or x > p0 + p1:
            return 0.0
        return 1.0 / p1
    if kind == UNIF_CONTAM:
        if 0.0 <= x <= 0.1:
            return 10.0 * (1.0 - p0)
        if 0.9 <= x <= 1.0:
            return 10.0 * p0
        return 0.0
    if kind == UNIF_MIXTURE:
        v = 0.0
        if 0.0 <= x <= 1.0:
            v += 1.0 - p0
        if 0.0 <= x <= 2.0:
            v += 0.5 * p0
        return v
    if kind == GAUSS_MIXTURE:
        a = x + 5.0
        b = x - 5.0
        return INV_SQRT_2PI * ((1.0 - p0) * math.exp(-0.5 * a * a)
                               + p0 * math.exp(-0.5 * b * b))
    return math.nan


@njit(cache=True)
def pdf_array(kind, x, p0, p1):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = pdf(kind, x[i], p0, p1)
    return out


@njit(cache=True)
def support(kind, p0, p1):
    """Closed interval outside of which the density vanishes."""
    inf = math.inf
    if kind == EXP_RATE or kind == RAYLEIGH or kind == GAMMA_2D:
        return 0.0, inf
    if kind == UNIF_SCALE:
        return 0.0, p0
    if kind == PARETO_SHIFT or kind == SHIFTEXP_2D:
        return p0, inf
    if kind == UNIF_LOC:
        return p0 - 0.5, p0 + 0.5
    if kind == SQRT_SINGULAR:
        return p0 - 1.0, p0 + 1.0
    if kind == BETA_2D or kind == UNIF_CONTAM:
        return 0.0, 1.0
    if kind == UNIF_LOCSCALE_2D:
        return p0, p0 + p1
    if kind == UNIF_MIXTURE:
        return 0.0, 2.0
    return -inf, inf


@njit(cache=True)
def anchors(kind, p0, p1, out):
    """Write split points (edges, kinks, singularities, a centre) to ``out``.

    Returns the number of points written (at most 4).
    """
    if kind == EXP_RATE:
        out[0] = 0.0
        out[1] = 1.0 / p0
        return 2
    if kind == GAUSS_LOC or kind == CAUCHY_LOC:
        out[0] = p0
        return 1
    if kind == RAYLEIGH:
        out[0] = 0.0
        out[1] = p0
        return 2
    if kind == UNIF_SCALE:
        out[0] = 0.0
        out[1] = p0
        return 2
    if kind == PARETO_SHIFT:
        out[0] = p0
        out[1] = p0 + 1.0
        return 2
    if kind == UNIF_LOC:
        out[0] = p0 - 0.5
        out[1] = p0 + 0.5
        return 2
    if kind == SQRT_SINGULAR:
        out[0] = p0 - 1.0
        out[1] = p0
        out[2] = p0 + 1.0
        return 3
    if kind == GAUSS_2D or kind == CAUCHY_2D:
        out[0] = p0
        return 1
    if kind == GAMMA_2D:
        out[0] = 0.0
        out[1] = p0 / p1
        return 2
    if kind == BETA_2D:
        out[0] = 0.0
        out[1] = p0 / (p0 + p1)
        out[2] = 1.0
        return 3
    if kind == SHIFTEXP_2D:
        out[0] = p0
        out[1] = p0 + 1.0 / p1
        return 2
    if kind == UNIF_LOCSCALE_2D:
        out[0] = p0
        out[1] = p0 + p1
        return 2
    if kind == UNIF_CONTAM:
        out[0] = 0.0
        out[1] = 0.1
        out[2] = 0.9
        out[3] = 1.0
        return 4
    if kind == UNIF_MIXTURE:
        out[0] = 0.0
        out[1] = 1.0
        out[2] = 2.0
        return 3
    if kind == GAUSS_MIXTURE:
        out[0] = -5.0
        out[1] = 5.0
        return 2
    return 0


@njit(cache=True)
def tail_kind(kind):
    if kind == CAUCHY_LOC or kind == CAUCHY_2D or kind == PARETO_SHIFT:
        return TAIL_ALG
    if (kind == EXP_RATE or kind == GAUSS_LOC or kind == RAYLEIGH
            or kind == GAUSS_2D or kind == GAMMA_2D or kind == SHIFTEXP_2D
            or kind == GAUSS_MIXTURE):
        return TAIL_EXP
    return TAIL_NONE


@njit(cache=True)
def tail_scale(kind, p0, p1):
    """Length scale of the tail, used by the unbounded-domain maps."""
    if kind == EXP_RATE:
        return 1.0 / p0
    if kind == RAYLEIGH:
        return p0
    if kind == GAUSS_2D or kind == CAUCHY_2D:
        return p1
    if kind == GAMMA_2D or kind == SHIFTEXP_2D:
        return 1.0 / p1
    return 1.0


@njit(cache=True)
def piecewise_constant(kind):
    return (kind == UNIF_SCALE or kind == UNIF_LOC or kind == UNIF_LOCSCALE_2D
            or kind == UNIF_CONTAM or kind == UNIF_MIXTURE)


@njit(cache=True)
def even_location(kind):
    """Pure location family with an even density: the integral term of the
    test statistic vanishes identically."""
    return (kind == GAUSS_LOC or kind == CAUCHY_LOC or kind == UNIF_LOC
            or kind == SQRT_SINGULAR)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

@njit(cache=True)
def _pdf_rel(kind, anchor, off, p0, p1):
    """Density at ``anchor + off`` with the distance to a singular abscissa
    formed as ``(anchor - p0) + off``, which is exact when ``anchor == p0``.
    """
    if kind == SQRT_SINGULAR:
        d = abs((anchor - p0) + off)
        if d == 0.0 or d > 1.0:
            return 0.0
        return 0.25 / math.sqrt(d)
    return pdf(kind, anchor + off, p0, p1)


@njit(cache=True)
def _integrand(which, ka, a0, a1, kb, b0, b1, anchor, off):
    fa = _pdf_rel(ka, anchor, off, a0, a1)
    fb = _pdf_rel(kb, anchor, off, b0, b1)
    if which == HSQ:
        d = math.sqrt(fa) - math.sqrt(fb)
        return 0.5 * d * d
    if which == TBAR:
        s = fa + fb
        if s == 0.0:
            return 0.0
        return 0.5 * math.sqrt(s) * (math.sqrt(fb) - math.sqrt(fa))
    return math.sqrt(fa * fb)


# Piece types: finite piece under a degree-7 smoothstep map whose
# derivative vanishes to third order at both ends, and the four tail maps
# (exponential tails via a logarithm, algebraic tails via tan). The finite
# map turns endpoint singularities like |x - a|^(-1/2) and |x - a|^(-1/4)
# into polynomial behaviour in t.
SEG_FINITE = 0
SEG_EXP_RIGHT = 1
SEG_EXP_LEFT = 2
SEG_ALG_RIGHT = 3
SEG_ALG_LEFT = 4


@njit(cache=True)
def _smoothstep7(t):
    t2 = t * t
    return t2 * t2 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))


@njit(cache=True)
def _mapped(which, ka, a0, a1, kb, b0, b1, seg, lo, hi, s, t):
    if seg == SEG_FINITE:
        w = hi - lo
        u = 1.0 - t
        jac = 140.0 * w * (t * u) ** 3
        # Measure from the nearer end so offsets stay exact there.
        if t <= 0.5:
            anchor = lo
            off = w * _smoothstep7(t)
        else:
            anchor = hi
            off = -w * _smoothstep7(u)
    elif seg == SEG_EXP_RIGHT:
        anchor = lo
        off = -s * math.log(t)
        jac = s / t
    elif seg == SEG_EXP_LEFT:
        anchor = lo
        off = s * math.log(t)
        jac = s / t
    elif seg == SEG_ALG_RIGHT:
        c = math.cos(t)
        anchor = lo
        off = s * math.tan(t)
        jac = s / (c * c)
    else:
        c = math.cos(t)
        anchor = lo
        off = -s * math.tan(t)
        jac = s / (c * c)
    if jac == 0.0:
        return 0.0
    v = _integrand(which, ka, a0, a1, kb, b0, b1, anchor, off)
    if v == 0.0:
        return 0.0
    return v * jac


@njit(cache=True)
def _gk21(which, ka, a0, a1, kb, b0, b1, seg, lo, hi, s, ta, tb):
    c = 0.5 * (ta + tb)
    h = 0.5 * (tb - ta)
    fc = _mapped(which, ka, a0, a1, kb, b0, b1, seg, lo, hi, s, c)
    resk = fc * _WGK[10]
    resg = 0.0
    for j in range(10):
        dx = h * _XGK[j]
        f1 = _mapped(which, ka, a0, a1, kb, b0, b1, seg, lo, hi, s, c - dx)
        f2 = _mapped(which, ka, a0, a1, kb, b0, b1, seg, lo, hi, s, c + dx)
        resk += _WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += _WG[j // 2] * (f1 + f2)
    return resk * h, abs((resk - resg) * h)


@njit(cache=True)
def _pieces(ka, a0, a1, kb, b0, b1):
    """Split points for the union of both supports, sorted and unique."""
    buf = np.empty(10)
    na = anchors(ka, a0, a1, buf)
    tmp = np.empty(4)
    nb = anchors(kb, b0, b1, tmp)
    for i in range(nb):
        buf[na + i] = tmp[i]
    pts = np.sort(buf[:na + nb])
    out = np.empty(pts.shape[0])
    m = 0
    for i in range(pts.shape[0]):
        if m == 0 or pts[i] > out[m - 1]:
            out[m] = pts[i]
            m += 1
    return out[:m]


@njit(cache=True)
def integrate(which, ka, a0, a1, kb, b0, b1, abs_tol, rel_tol, limit):
    """Integrate a pairwise integrand over the union of both supports.

    Returns ``(value, error_estimate, status)`` where status 0 means the
    tolerance ``max(abs_tol, rel_tol * |value|)`` was met and status 2 means
    ``limit`` bisections were exhausted first.
    """
    pts = _pieces(ka, a0, a1, kb, b0, b1)
    lo_a, hi_a = support(ka, a0, a1)
    lo_b, hi_b = support(kb, b0, b1)
    lo = min(lo_a, lo_b)
    hi = max(hi_a, hi_b)
    npts = pts.shape[0]

    if piecewise_constant(ka) and piecewise_constant(kb):
        total = 0.0
        for i in range(npts - 1):
            mid = 0.5 * (pts[i] + pts[i + 1])
            total += (pts[i + 1] - pts[i]) * _integrand(
                which, ka, a0, a1, kb, b0, b1, mid, 0.0)
        return total, 0.0, OK

    tk = max(tail_kind(ka), tail_kind(kb))
    s = max(tail_scale(ka, a0, a1), tail_scale(kb, b0, b1))
    if tk == TAIL_EXP:
        s *= 2.0

    cap = npts + 1 + limit
    seg = np.empty(cap, dtype=np.int64)
    slo = np.empty(cap)
    shi = np.empty(cap)
    ta = np.empty(cap)
    tb = np.empty(cap)
    val = np.empty(cap)
    err = np.empty(cap)
    m = 0
    if lo == -math.inf:
        seg[m] = SEG_ALG_LEFT if tk == TAIL_ALG else SEG_EXP_LEFT
        slo[m] = pts[0]
        shi[m] = pts[0]
        ta[m] = 0.0
        tb[m] = HALF_PI if tk == TAIL_ALG else 1.0
        m += 1
    for i in range(npts - 1):
        seg[m] = SEG_FINITE
        slo[m] = pts[i]
        shi[m] = pts[i + 1]
        ta[m] = 0.0
        tb[m] = 1.0
        m += 1
    if hi == math.inf:
        seg[m] = SEG_ALG_RIGHT if tk == TAIL_ALG else SEG_EXP_RIGHT
        slo[m] = pts[npts - 1]
        shi[m] = pts[npts - 1]
        ta[m] = 0.0
        tb[m] = HALF_PI if tk == TAIL_ALG else 1.0
        m += 1

    for i in range(m):
        val[i], err[i] = _gk21(which, ka, a0, a1, kb, b0, b1,
                               seg[i], slo[i], shi[i], s, ta[i], tb[i])

    status = OK
    splits = 0
    while True:
        total = 0.0
        toterr = 0.0
        worst = 0
        for i in range(m):
            total += val[i]
            toterr += err[i]
            if err[i] > err[worst]:
                worst = i
        if toterr <= max(abs_tol, rel_tol * abs(total)):
            break
        if splits >= limit:
            status = QUAD_FAILURE
            break
        a = ta[worst]
        b = tb[worst]
        c = 0.5 * (a + b)
        if not (a < c < b):
            # Interval at machine resolution: accept its estimate.
            err[worst] = 0.0
            continue
        seg[m] = seg[worst]
        slo[m] = slo[worst]
        shi[m] = shi[worst]
        ta[m] = c
        tb[m] = b
        tb[worst] = c
        val[worst], err[worst] = _gk21(which, ka, a0, a1, kb, b0, b1,
                                       seg[worst], slo[worst], shi[worst],
                                       s, a, c)
        val[m], err[m] = _gk21(which, ka, a0, a1, kb, b0, b1,
                               seg[m], slo[m], shi[m], s, c, b)
        m += 1
        splits += 1
    return total, toterr, status


# ---------------------------------------------------------------------------
# Closed-form squared Hellinger distances
# ---------------------------------------------------------------------------

@njit(cache=True)
def hsq_closed(kind, t0, t1, u0, u1):
    """Closed-form squared Hellinger distance, or NaN when none is coded."""
    if kind == GAUSS_LOC:
        d = u0 - t0
        return -math.expm1(-d * d / 8.0)
    if kind == EXP_RATE:
        d = math.sqrt(u0) - math.sqrt(t0)
        return d * d / (t0 + u0)
    if kind == RAYLEIGH:
        d = u0 - t0
        return d * d / (t0 * t0 + u0 * u0)
    if kind == UNIF_SCALE:
        return abs(u0 - t0) / ((math.sqrt(t0) + math.sqrt(u0))
                               * math.sqrt(max(t0, u0)))
    if kind == UNIF_LOC:
        return min(abs(u0 - t0), 1.0)
    if kind == PARETO_SHIFT:
        d = abs(u0 - t0)
        if d < 1e-4:
            return d * (0.5 + d * (-1.0 / 3.0 + d * (0.25 - 0.2 * d)))
        return 1.0 - math.log1p(d) / d
    if kind == GAUSS_2D:
        ss = t1 * t1 + u1 * u1
        root = math.sqrt(ss)
        ds = u1 - t1
        one_minus_a = ds * ds / ((root + math.sqrt(2.0 * t1 * u1)) * root)
        a = 1.0 - one_minus_a
        dm = u0 - t0
        return one_minus_a - a * math.expm1(-dm * dm / (4.0 * ss))
    if kind == SHIFTEXP_2D:
        dl = math.sqrt(u1) - math.sqrt(t1)
        one_minus_a = dl * dl / (t1 + u1)
        a = 1.0 - one_minus_a
        rate = t1 if u0 >= t0 else u1
        return one_minus_a - a * math.expm1(-0.5 * rate * abs(u0 - t0))
    if kind == UNIF_LOCSCALE_2D:
        overlap = min(t0 + t1, u0 + u1) - max(t0, u0)
        if overlap <= 0.0:
            return 1.0
        return 1.0 - overlap / math.sqrt(t1 * u1)
    return math.nan


@njit(cache=True)
def hsq(kind, t0, t1, u0, u1, abs_tol, rel_tol, limit):
    """Squared Hellinger distance: closed form when coded, else quadrature."""
    if t0 == u0 and t1 == u1:
        return 0.0, OK
    v = hsq_closed(kind, t0, t1, u0, u1)
    if not math.isnan(v):
        return v, OK
    v, _, status = integrate(HSQ, kind, t0, t1, kind, u0, u1,
                             abs_tol, rel_tol, limit)
    return min(max(v, 0.0), 1.0), status


# ---------------------------------------------------------------------------
# Test statistic
# ---------------------------------------------------------------------------

@njit(cache=True)
def empirical_term(kind, x, t0, t1, u0, u1):
    s = 0.0
    for i in range(x.shape[0]):
        g = pdf(kind, x[i], t0, t1)
        gp = pdf(kind, x[i], u0, u1)
        tot = g + gp
        if tot > 0.0:
            s += (math.sqrt(gp) - math.sqrt(g)) / math.sqrt(tot)
    return s / x.shape[0]


@njit(cache=True)
def integral_term(kind, t0, t1, u0, u1, abs_tol, rel_tol, limit):
    if even_location(kind) or (t0 == u0 and t1 == u1):
        return 0.0, OK
    v, _, status = integrate(TBAR, kind, t0, t1, kind, u0, u1,
                             abs_tol, rel_tol, limit)
    return v, status


@njit(cache=True)
def _ordered(t0, t1, u0, u1):
    return t0 < u0 or (t0 == u0 and t1 <= u1)


@njit(cache=True)
def tbar(kind, x, t0, t1, u0, u1, abs_tol, rel_tol, limit):
    """Test statistic for the pair (f_t, f_u) on sample ``x``.

    The pair is put in lexicographic order first and the result negated when
    swapped, so swapping the arguments negates the value bit for bit.
    """
    if _ordered(t0, t1, u0, u1):
        e = empirical_term(kind, x, t0, t1, u0, u1)
        i, status = integral_term(kind, t0, t1, u0, u1,
                                  abs_tol, rel_tol, limit)
        return e + i, status
    e = empirical_term(kind, x, u0, u1, t0, t1)
    i, status = integral_term(kind, u0, u1, t0, t1, abs_tol, rel_tol, limit)
    return -(e + i), status


@njit(cache=True)
def project(v, origin, eps):
    if eps <= 0.0:
        return v
    return origin + math.floor((v - origin) / eps) * eps


# ---------------------------------------------------------------------------
# One-dimensional radius rules and search
# ---------------------------------------------------------------------------

@njit(cache=True)
def has_optimal_geometry(kind):
    return (kind == GAUSS_LOC or kind == EXP_RATE or kind == RAYLEIGH
            or kind == UNIF_SCALE or kind == UNIF_LOC)


@njit(cache=True)
def _optimal_radii(kind, t, u, xi):
    """Largest radii with h^2(f_t, f_{t+r}) <= xi and h^2(f_u, f_{u-r}) <= xi."""
    if kind == GAUSS_LOC:
        r = math.sqrt(-8.0 * math.log1p(-xi))
        return r, r
    if kind == UNIF_LOC:
        return xi, xi
    if kind == UNIF_SCALE:
        up = t * xi * (2.0 - xi) / ((1.0 - xi) * (1.0 - xi))
        down = u * xi * (2.0 - xi)
        return up, down
    w = math.sqrt(xi * (2.0 - xi))
    if kind == RAYLEIGH:
        return t * (w + xi) / (1.0 - xi), u * (w - xi) / (1.0 - xi)
    # EXP_RATE: solve 2 sqrt(s) / (1 + s) = 1 - xi for the ratio s.
    q = (1.0 - xi) * (1.0 - xi)
    up = t * (2.0 * w + 4.0 * xi - 2.0 * xi * xi) / q
    down = u * (2.0 * w - 4.0 * xi + 2.0 * xi * xi) / q
    return up, down


@njit(cache=True)
def radius_1d(kind, rule, t, u, kappa, alpha, r_low, r_up,
              abs_tol, rel_tol, limit):
    """Radii ``(r_bar, r_under, fell_back, status)`` for the pair t < u."""
    if rule == RULE_PARAMETRIC:
        r = (kappa * r_low / r_up) ** (1.0 / alpha) * (u - t)
        return r, r, False, OK
    h2, status = hsq(kind, t, 0.0, u, 0.0, abs_tol, rel_tol, limit)
    xi = kappa * h2
    if rule == RULE_OPTIMAL and has_optimal_geometry(kind):
        up, down = _optimal_radii(kind, t, u, xi)
        return up, down, False, status
    r = (xi / r_up) ** (1.0 / alpha)
    return r, r, rule == RULE_OPTIMAL, status


@njit(cache=True)
def _grow(buf, size):
    out = np.empty(2 * buf.shape[0])
    out[:size] = buf[:size]
    return out


@njit(cache=True)
def _fill(kind, x, p, f, rf):
    for i in range(x.shape[0]):
        v = pdf(kind, x[i], p, 0.0)
        f[i] = v
        rf[i] = math.sqrt(v)


@njit(cache=True)
def search_1d(kind, x, m, big_m, eta, kappa, rule, alpha, r_low, r_up, eps,
              abs_tol, rel_tol, limit, max_iter, record):
    """Interval-shrinking search on [m, big_m].

    Returns ``(lo, hi, count, status, fell_back, trace_lo, trace_hi,
    trace_t)``. Traces hold the interval before each test and the test
    value; they are empty unless ``record`` is set.

    Density values at the two (projected) endpoints are cached between
    iterations; the arithmetic is identical to :func:`tbar`, so each test
    value equals ``tbar(kind, x, pi(lo), 0, pi(hi), 0, ...)`` bit for bit.
    """
    n = x.shape[0]
    lo = m
    hi = big_m
    count = 0
    status = OK
    fell_back = False
    cap = 64 if record else 1
    tr_lo = np.empty(cap)
    tr_hi = np.empty(cap)
    tr_t = np.empty(cap)
    g = np.empty(n)
    rg = np.empty(n)
    gp = np.empty(n)
    rgp = np.empty(n)
    cached_t = math.nan
    cached_u = math.nan
    while hi - lo > eta:
        if count >= max_iter:
            status = ITERATION_CAP
            break
        rb, ru, fb, st = radius_1d(kind, rule, lo, hi, kappa, alpha,
                                   r_low, r_up, abs_tol, rel_tol, limit)
        fell_back = fell_back or fb
        half = 0.5 * (hi - lo)
        r = min(rb, half)
        rp = min(ru, half)
        pt = project(lo, m, eps)
        pu = project(hi, m, eps)
        if pt != cached_t:
            _fill(kind, x, pt, g, rg)
            cached_t = pt
        if pu != cached_u:
            _fill(kind, x, pu, gp, rgp)
            cached_u = pu
        s = 0.0
        for i in range(n):
            tot = g[i] + gp[i]
            if tot > 0.0:
                s += (rgp[i] - rg[i]) / math.sqrt(tot)
        test = s / n
        if pt == pu:
            test = 0.0
        else:
            it, st2 = integral_term(kind, pt, 0.0, pu, 0.0,
                                    abs_tol, rel_tol, limit)
            test = test + it
            if st2 != OK:
                st = st2
        if st != OK:
            status = QUAD_FAILURE
            break
        if record:
            if count >= tr_lo.shape[0]:
                tr_lo = _grow(tr_lo, count)
                tr_hi = _grow(tr_hi, count)
                tr_t = _grow(tr_t, count)
            tr_lo[count] = lo
            tr_hi[count] = hi
            tr_t[count] = test
        count += 1
        if test >= 0.0:
            lo = lo + r
        if test <= 0.0:
            hi = hi - rp
    n_rec = count if record else 0
    return (lo, hi, count, status, fell_back,
            tr_lo[:n_rec].copy(), tr_hi[:n_rec].copy(), tr_t[:n_rec].copy())
