"""Random parameter configurations shared by the radius and acceptance tests."""

import numpy as np

from hellsearch.models import ParameterRect


def random_pairs_1d(model, count, seed):
    """Ordered pairs ``t < u``: half spread over the interval, half close."""
    rng = np.random.default_rng(seed)
    lo, hi = model.theta_rect.lower[0], model.theta_rect.upper[0]
    for i in range(count):
        if i % 2:
            t = lo + (hi - lo) * rng.random()
            u = min(hi, t + (hi - lo) * 10.0 ** rng.uniform(-6, -1))
        else:
            t, u = sorted(lo + (hi - lo) * rng.random(2))
        if t < u:
            yield t, u


def random_state_md(model, rng):
    """A sub-rectangle of the parameter set and two probes inside it."""
    lo = np.asarray(model.theta_rect.lower)
    hi = np.asarray(model.theta_rect.upper)
    c = np.sort(lo + (hi - lo) * rng.random((2, model.dim)), axis=0)
    rect = ParameterRect(tuple(c[0]), tuple(c[1]))
    a, b = c
    theta = a + (b - a) * rng.random(model.dim)
    if rng.random() < 0.5:
        theta_p = a + (b - a) * rng.random(model.dim)
    else:
        step = (b - a) * 10.0 ** rng.uniform(-4, -1, model.dim)
        theta_p = np.clip(theta + step * rng.choice([-1, 1], model.dim), a, b)
    return rect, theta, theta_p


def box_points(rect, theta, r_bar, r_under, k=5):
    """A ``k^d`` lattice on the box around ``theta`` clipped to ``rect``."""
    lo = np.maximum(np.asarray(rect.lower), theta - r_under)
    hi = np.minimum(np.asarray(rect.upper), theta + r_bar)
    axes = [np.linspace(a, b, k) for a, b in zip(lo, hi)]
    return np.array(np.meshgrid(*axes)).reshape(len(axes), -1).T
