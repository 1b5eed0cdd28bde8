"""Estimate a Gaussian location from one sample and inspect the search.

Run with ``python demos/one_sample.py``.
"""

from hellsearch.baselines import mle_closed
from hellsearch.distance import hellinger_sq
from hellsearch.models import catalog_lookup, draw_sample
from hellsearch.search1d import EstimatorConfig1D, estimate_1d, test_count_bound_1d


def main():
    model = catalog_lookup("gauss-loc")
    sample = draw_sample(model, 0.3, 100, seed=7)
    cfg = EstimatorConfig1D()
    est = estimate_1d(model, sample, cfg)
    mle = mle_closed(model, sample)

    print(f"estimate      {est.theta_hat[0]:+.6f}")
    print(f"MLE           {mle[0]:+.6f}")
    print(f"h2(truth, estimate) {hellinger_sq(model, 0.3, est.theta_hat[0]):.2e}")
    print(f"final interval width {est.final_upper[0] - est.final_lower[0]:.2e}")
    bound = test_count_bound_1d(model, cfg.kappa, cfg.resolved_eta(model))
    print(f"tests used {est.test_count} (bound {bound:.0f})")

    # The first few intervals show how quickly the search narrows.
    for lo, hi in est.trace.intervals[:: max(1, est.test_count // 8)]:
        print(f"  [{lo:+.5f}, {hi:+.5f}]")


if __name__ == "__main__":
    main()
