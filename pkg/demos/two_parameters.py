"""Fit a Gaussian location and scale, then print the theory constants.

Run with ``python demos/two_parameters.py``.
"""

from hellsearch.baselines import mle_closed
from hellsearch.diagnostics import compute_theory_bundle, max_thinness
from hellsearch.models import catalog_lookup, draw_sample
from hellsearch.searchmd import EstimatorConfigMD, estimate_md


def main():
    model = catalog_lookup("gauss-2d")
    sample = draw_sample(model, (1.0, 2.0), 100, seed=3)
    cfg = EstimatorConfigMD(rect_constants_mode="per_rectangle")
    est = estimate_md(model, sample, cfg)
    print(f"estimate (mean, sd) {est.theta_hat.round(5)}")
    print(f"MLE                 {mle_closed(model, sample).round(5)}")
    print(f"tests used          {est.test_count}")

    # The dimension term needs a positive thinness; the largest allowed is used.
    theory = EstimatorConfigMD(t=max_thinness(model.constants.alpha))
    b = compute_theory_bundle(model, theory)
    print(f"alpha_bar {b.alpha_bar:g}  D_F {b.d_f:.3f}  test bound {b.bound_md:.3g}")


if __name__ == "__main__":
    main()
