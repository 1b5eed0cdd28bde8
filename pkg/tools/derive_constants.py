"""Derive the numeric lower sandwich constants frozen in ``models.py``.

For each coordinate j the lower constant must satisfy
``R_j |t_j - u_j|**alpha_j <= h^2(f_t, f_u)`` for every pair in the
rectangle. Two candidates are computed and the smaller is kept:

* the infimum of ``h^2 / |t_j - u_j|**alpha_j`` over all pairs of a
  regular grid (captures large separations);
* for regular families, one eighth of the infimum over the rectangle of
  the Schur complement of the Fisher information with respect to the
  other coordinate (the small-separation limit the grid cannot reach).

Families declared with equal constants across coordinates use the minimum
over coordinates. A 0.9 safety margin is applied to every value.

Usage: ``python tools/derive_constants.py [--grid 40]``.
"""

from __future__ import annotations

import argparse
import math

import numpy as np
from numba import njit
from scipy import special

from hellsearch import _kernels as K
from hellsearch.models import catalog_lookup

MARGIN = 0.9


@njit(cache=True)
def _pair_ratios(kind, pts, alpha, abs_tol, rel_tol, limit):
    """Return per-coordinate infima of h^2 / |delta_j|^alpha_j over pairs."""
    d = pts.shape[1]
    best = np.full(d, np.inf)
    for i in range(pts.shape[0]):
        t0 = pts[i, 0]
        t1 = pts[i, 1] if d > 1 else 0.0
        for j in range(i + 1, pts.shape[0]):
            u0 = pts[j, 0]
            u1 = pts[j, 1] if d > 1 else 0.0
            h2, _ = K.hsq(kind, t0, t1, u0, u1, abs_tol, rel_tol, limit)
            for c in range(d):
                delta = abs(pts[i, c] - pts[j, c])
                if delta > 0.0:
                    r = h2 / delta ** alpha[c]
                    if r < best[c]:
                        best[c] = r
    return best


def _grid(model, per_dim):
    axes = [np.linspace(lo, hi, per_dim)
            for lo, hi in zip(model.theta_rect.lower, model.theta_rect.upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.ascontiguousarray(np.stack([g.ravel() for g in mesh], axis=1))


def _schur_min(fisher, rect, per_dim=200):
    """Minimum over the rectangle of each coordinate's Schur complement."""
    a = np.linspace(rect.lower[0], rect.upper[0], per_dim)
    b = np.linspace(rect.lower[1], rect.upper[1], per_dim)
    A, B = np.meshgrid(a, b, indexing="ij")
    i11, i22, i12 = fisher(A, B)
    return (float(np.min(i11 - i12 ** 2 / i22)),
            float(np.min(i22 - i12 ** 2 / i11)))


def _fisher_cauchy(m, s):
    return 1 / (2 * s ** 2), 1 / (2 * s ** 2), 0 * m


def _fisher_gamma(a, b):
    return special.polygamma(1, a), a / b ** 2, -1 / b


def _fisher_beta(a, b):
    ab = special.polygamma(1, a + b)
    return special.polygamma(1, a) - ab, special.polygamma(1, b) - ab, -ab


FISHER = {"cauchy-2d": _fisher_cauchy, "gamma-2d": _fisher_gamma,
          "beta-2d": _fisher_beta}


def derive(name: str, per_dim: int) -> float:
    model = catalog_lookup(name)
    alpha = np.asarray(model.constants.alpha)
    pts = _grid(model, per_dim if model.dim > 1 else 4001)
    grid_inf = _pair_ratios(model.kind, pts, alpha, 1e-10, 1e-10, 2000)
    cands = list(grid_inf)
    if name in FISHER:
        cands += [s / 8.0 for s in _schur_min(FISHER[name], model.theta_rect)]
    value = MARGIN * min(cands)
    print(f"{name:18s} grid={np.array2string(grid_inf, precision=5)} "
          f"candidates_min={min(cands):.6g} frozen={value:.5g}")
    return value


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--grid", type=int, default=40)
    args = p.parse_args(argv)
    for name in ("cauchy-loc", "cauchy-2d", "gamma-2d", "beta-2d",
                 "unif-locscale-2d"):
        derive(name, args.grid)


if __name__ == "__main__":
    main()
