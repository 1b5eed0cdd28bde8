"""Acceptance criteria, run at their stated tolerances with base seed 0.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are repeated in
the terminal summary.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from hellsearch.distance import hellinger_sq, hellinger_sq_quadrature
from hellsearch.models import CATALOG_NAMES, catalog_lookup, draw_sample, verify_assumption1
from hellsearch.search1d import (
    RADIUS_RULES_1D,
    EstimatorConfig1D,
    estimate_1d,
    kappa_bar,
    radius_pair_1d,
    test_count_bound_1d,
)
from hellsearch.searchmd import (
    RADIUS_RULES_MD,
    EstimatorConfigMD,
    estimate_md,
    radius_vector_md,
    rect_constants,
    test_count_bound_md,
)
from hellsearch.simlab import (
    mixture_hellinger_to_model,
    run_agreement_study,
    run_risk_study,
    run_uniform_contamination,
    scenario_by_name,
)
from hellsearch.testing import baraud_statistic

from oracles import uniform_mixture_h2_grid
from states import box_points, random_pairs_1d, random_state_md

pytestmark = pytest.mark.slow

SEED = 0
ONE_D = [n for n in CATALOG_NAMES if catalog_lookup(n).dim == 1]
TWO_D = [n for n in CATALOG_NAMES if catalog_lookup(n).dim == 2]
CLOSED = [n for n in CATALOG_NAMES if catalog_lookup(n).has_closed_hellinger]
OPTIMAL = ["exp-rate", "gauss-loc", "rayleigh", "unif-scale", "unif-loc"]


@pytest.fixture(scope="module")
def gauss_loc_100():
    """gauss-loc at n = 100 with N = 10^4, timed."""
    sc = scenario_by_name("table4-ex2", (100,), 10 ** 4, SEED)
    start = time.perf_counter()
    report = run_risk_study(sc)
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def gauss_loc_small():
    """gauss-loc at n = 25 and 50 with N = 10^4."""
    return run_risk_study(scenario_by_name("table4-ex2", (25, 50), 10 ** 4, SEED))


def test_c1_gauss_loc_risk(gauss_loc_100, verdict):
    report, seconds = gauss_loc_100
    row = report.row("ours", 100)
    ok = abs(row.risk_hat - 0.0012) <= 2e-4 and seconds < 300 and row.failures == 0
    verdict("C1 gauss-loc n=100 N=1e4", ok,
            f"R={row.risk_hat:.5f} (target 0.0012 +/- 2e-4), "
            f"{seconds:.1f} s (limit 300 s), failures={row.failures}")


def test_c2_exp_rate_risk(verdict):
    sc = scenario_by_name("table4-ex1", (50,), 10 ** 4, SEED)
    row = run_risk_study(sc).row("ours", 50)
    ok = abs(row.risk_hat - 0.0025) <= 3e-4 and row.failures == 0
    verdict("C2 exp-rate n=50 N=1e4", ok,
            f"R={row.risk_hat:.5f} (target 0.0025 +/- 3e-4), failures={row.failures}")


def test_c3_sqrt_singular_ordering(verdict):
    sc = replace(scenario_by_name("table4-ex8", (100,), 10 ** 3, SEED),
                 estimators=("ours", "median", "mean"))
    rep = run_risk_study(sc)
    r = {e: rep.row(e, 100).risk_hat for e in sc.estimators}
    fails = sum(rep.row(e, 100).failures for e in sc.estimators)
    ok = (abs(r["ours"] - 0.006) <= 0.002 and r["ours"] < r["median"] < r["mean"]
          and fails == 0)
    verdict("C3 sqrt-singular n=100 N=1e3", ok,
            f"R(ours)={r['ours']:.5f} (target 0.006 +/- 0.002), "
            f"R(median)={r['median']:.5f}, R(mean)={r['mean']:.5f}")


def test_c4_contaminated_uniform(verdict):
    rep = run_uniform_contamination((100,), N=10 ** 3, base_seed=SEED)
    ours, mle = rep.row("ours", 100), rep.row("mle", 100)
    ok = ours.risk_hat <= 0.03 and mle.risk_hat >= 0.4 and ours.failures == 0
    verdict("C4 contaminated uniform n=100 N=1e3", ok,
            f"R(ours)={ours.risk_hat:.4f} (<= 0.03), R(mle)={mle.risk_hat:.4f} (>= 0.4)")


def test_c5_agreement_with_mle(verdict):
    sc = replace(scenario_by_name("table4-ex2", (100,), 10 ** 3, SEED),
                 config=EstimatorConfig1D(eta=2e-6))
    row = run_agreement_study(sc)[0]
    ok = row.q_99 <= 1e-5
    verdict("C5 gauss-loc n=100 N=1e3 eta=2e-6", ok,
            f"q_0.99={row.q_99:.3g} (<= 1e-5), q_0.999={row.q_999:.3g}, q_1={row.q_1:.3g}")


def test_c6_gauss_loc_test_count(gauss_loc_100, verdict):
    row = gauss_loc_100[0].row("ours", 100)
    m = catalog_lookup("gauss-loc")
    cfg = EstimatorConfig1D()
    bound = test_count_bound_1d(m, cfg.kappa, cfg.resolved_eta(m))
    ok = abs(row.tests_mean / 294 - 1) <= 0.10 and row.tests_mean <= bound
    verdict("C6 gauss-loc test count", ok,
            f"mean={row.tests_mean:.1f} (294 +/- 10%), max={row.tests_max:.0f}, "
            f"bound={bound:.1f}")


def test_c7_gauss_2d(verdict):
    sc = scenario_by_name("table6-ex1", (100,), 10 ** 3, SEED)
    row = run_risk_study(sc).row("ours", 100)
    m = catalog_lookup("gauss-2d")
    bound = test_count_bound_md(m, sc.config.kappa, sc.config.resolved_eta(m))
    ok = (abs(row.risk_hat - 0.0025) <= 5e-4 and abs(row.tests_mean / 1567 - 1) <= 0.15
          and row.tests_mean <= bound and row.failures == 0)
    verdict("C7 gauss-2d n=100 N=1e3", ok,
            f"R={row.risk_hat:.5f} (0.0025 +/- 5e-4), tests mean={row.tests_mean:.1f} "
            f"(1567 +/- 15%), bound={bound:.4g}")


def _excess(h2, budget):
    """Relative overshoot of ``h2`` past ``budget``, with an absolute floor."""
    return (h2 - budget) / max(budget, 1e-7)


class TestC8Properties:
    def test_a_antisymmetry(self, verdict):
        rng = np.random.default_rng(SEED)
        bad = 0
        for i in range(1000):
            m = catalog_lookup(CATALOG_NAMES[i % len(CATALOG_NAMES)])
            lo = np.asarray(m.theta_rect.lower)
            hi = np.asarray(m.theta_rect.upper)
            t, u = lo + (hi - lo) * rng.random((2, m.dim))
            s = draw_sample(m, m.reference_theta, int(rng.integers(1, 31)), i)
            bad += baraud_statistic(m, t, u, s) != -baraud_statistic(m, u, t, s)
        verdict("C8a antisymmetry", bad == 0, f"{bad} of 1000 tuples not bit-exact")

    def test_b_closed_forms(self, verdict):
        worst = {}
        for name in CLOSED:
            m = catalog_lookup(name)
            rng = np.random.default_rng(SEED)
            lo = np.asarray(m.theta_rect.lower)
            hi = np.asarray(m.theta_rect.upper)
            err = 0.0
            for i in range(100):
                a = lo + (hi - lo) * rng.random(m.dim)
                if i % 2:
                    b = np.clip(a + 0.05 * (hi - lo) * rng.standard_normal(m.dim), lo, hi)
                else:
                    b = lo + (hi - lo) * rng.random(m.dim)
                err = max(err, abs(m.closed_hellinger(a, b)
                                   - hellinger_sq_quadrature(m, a, b)))
            worst[name] = err
        top = max(worst.values())
        verdict("C8b closed form vs quadrature", top <= 1e-7,
                f"max |diff|={top:.2g} over {len(CLOSED)} models x 100 pairs (<= 1e-7)")

    def test_c_sandwich(self, verdict):
        viol = {n: verify_assumption1(catalog_lookup(n), 20).violations
                for n in CATALOG_NAMES}
        total = sum(viol.values())
        verdict("C8c sandwich on 20x20 grids", total == 0,
                f"{total} violations over {len(viol)} models"
                + ("" if total == 0 else f" {viol}"))

    def test_d_nesting_and_termination(self, verdict):
        problems = []
        for name in CATALOG_NAMES:
            m = catalog_lookup(name)
            if m.dim == 1:
                cfg = EstimatorConfig1D()
                eta = cfg.resolved_eta(m)
                bound = test_count_bound_1d(m, cfg.kappa, eta)
            else:
                cfg = EstimatorConfigMD()
                eta = cfg.resolved_eta(m)
                bound = test_count_bound_md(m, cfg.kappa, eta)
            for r in range(100):
                s = draw_sample(m, m.reference_theta, 50, SEED + r)
                if m.dim == 1:
                    est = estimate_1d(m, s, cfg)
                    iv = est.trace.intervals
                    lo, hi = iv[:, :1], iv[:, 1:]
                else:
                    est = estimate_md(m, s, cfg, record_trace=True)
                    lo, hi = est.trace.lower, est.trace.upper
                nested = (np.all(lo[1:] >= lo[:-1]) and np.all(hi[1:] <= hi[:-1])
                          and np.all(est.final_lower >= lo[-1])
                          and np.all(est.final_upper <= hi[-1]))
                done = np.all(est.final_upper - est.final_lower <= eta)
                if not (nested and done and est.test_count <= bound):
                    problems.append((name, r))
        verdict("C8d nesting and termination", not problems,
                f"{len(problems)} bad runs of {100 * len(CATALOG_NAMES)}"
                + ("" if not problems else f" {problems[:5]}"))

    def test_e_kappa_bar(self, verdict):
        v = kappa_bar()
        verdict("C8e kappa_bar", abs(v - 0.08578643762690485) <= 1e-15, f"{v!r}")

    def test_f_mixture(self, verdict):
        m = catalog_lookup("unif-scale")
        grid = np.linspace(m.theta_rect.lower[0], m.theta_rect.upper[0], 10 ** 6 + 1)
        err = max(abs(mixture_hellinger_to_model(p) - uniform_mixture_h2_grid(p, grid).min())
                  for p in np.linspace(0.0, 1.0, 21))
        verdict("C8f mixture distance vs grid oracle", err <= 1e-4,
                f"max |diff|={err:.2g} on 21 values of p (<= 1e-4)")

    def test_g_ball_inclusion(self, verdict):
        worst, checked = -math.inf, 0
        for name in ONE_D:
            m = catalog_lookup(name)
            kappa = kappa_bar() / 2
            rules = [r for r in RADIUS_RULES_1D if r != "optimal" or name in OPTIMAL]
            for rule in rules:
                for t, u in random_pairs_1d(m, 100, SEED):
                    h2 = hellinger_sq(m, t, u)
                    rb, ru = radius_pair_1d(m, t, u, kappa, rule)
                    for a, b in ((t, min(t + rb, u)), (u, max(u - ru, t))):
                        worst = max(worst, _excess(hellinger_sq(m, a, b), kappa * h2))
                        checked += 1
        for name in TWO_D:
            m = catalog_lookup(name)
            kappa = 0.9 * kappa_bar()
            for rule in RADIUS_RULES_MD:
                rng = np.random.default_rng(SEED)
                for _ in range(100):
                    rect, theta, theta_p = random_state_md(m, rng)
                    consts = rect_constants(m, rect, "per_rectangle")
                    h2 = hellinger_sq(m, theta, theta_p)
                    if h2 == 0.0:
                        continue
                    r_bar, r_under = radius_vector_md(m, rect, theta, theta_p, kappa,
                                                      rule, consts)
                    for pt in box_points(rect, theta, r_bar, r_under):
                        worst = max(worst, _excess(hellinger_sq(m, theta, pt), kappa * h2))
                        checked += 1
        verdict("C8g ball inclusion", worst <= 1e-8,
                f"max relative excess over kappa h^2(theta, theta')={worst:.2g} "
                f"on {checked} points (<= 1e-8)")


def test_c9_rate(gauss_loc_100, gauss_loc_small, verdict):
    r = {n: gauss_loc_small.row("ours", n).risk_hat for n in (25, 50)}
    r[100] = gauss_loc_100[0].row("ours", 100).risk_hat
    ratios = (r[25] / r[50], r[50] / r[100])
    ok = all(abs(q / 2 - 1) <= 0.25 for q in ratios)
    verdict("C9 risk halves per doubling of n", ok,
            f"R(25)/R(50)={ratios[0]:.3f}, R(50)/R(100)={ratios[1]:.3f} (2 +/- 25%)")
