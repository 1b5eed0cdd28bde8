"""Compare our estimator with the MLE when the uniform model is wrong.

A few points near 1 sit outside the bulk on [0, 0.1]. The MLE of the
uniform scale must cover them; our estimator mostly ignores them.
Run with ``python demos/robustness.py``.
"""

import numpy as np

from hellsearch.simlab import run_mixture_sweep, run_uniform_contamination


def main():
    rep = run_uniform_contamination((25, 100), N=200, base_seed=0)
    print(rep.summary_table())

    print("\nmixture of U[0,1] and U[0,2] with weight p on the wider one")
    print(f"{'p':>5} {'R(ours)':>9} {'R(mle)':>9} {'dist to model':>14}")
    for row in run_mixture_sweep("uniform_1d", np.linspace(0.0, 1.0, 6), n=100, N=100):
        print(f"{row.p:5.2f} {row.risk_ours:9.4f} {row.risk_mle:9.4f} {row.h2_model:14.4f}")


if __name__ == "__main__":
    main()
