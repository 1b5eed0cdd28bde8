"""Monte Carlo studies: risk tables, MLE agreement, robustness sweeps.

Replication ``r`` of every study draws its sample from a PCG64 stream seeded
with ``base_seed + r``, so serial and parallel runs give identical reports.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import optimize

from hellsearch import _kernels as K
from hellsearch.baselines import (
    BaselineSpec,
    mle_grid,
    mle_numeric,
    mspe,
    simple_stats,
)
from hellsearch.distance import QuadratureError, hellinger_sq, hellinger_sq_codes
from hellsearch.models import (
    ParameterRect,
    ParametricModel,
    Sample,
    catalog_lookup,
    draw_sample,
    gauss_2d_model,
)
from hellsearch.search1d import (
    EstimatorConfig1D,
    IterationCapError,
    estimate_1d,
    test_count_bound_1d,
)
from hellsearch.searchmd import EstimatorConfigMD, estimate_md, test_count_bound_md

__all__ = [
    "TRUTH_KINDS",
    "ESTIMATORS",
    "CSV_COLUMNS",
    "SWEEP_COLUMNS",
    "Truth",
    "Scenario",
    "ReportRow",
    "SimulationReport",
    "QuantileRow",
    "SweepRow",
    "UnknownScenarioError",
    "SCENARIO_NAMES",
    "scenario_by_name",
    "empirical_quantiles",
    "run_risk_study",
    "run_agreement_study",
    "run_uniform_contamination",
    "mixture_hellinger_to_model",
    "gaussian_mixture_hellinger_to_model",
    "run_mixture_sweep",
    "write_sweep_csv",
]

TRUTH_KINDS = ("in_model", "uniform_contaminated", "uniform_mixture",
               "gaussian_mixture")
ESTIMATORS = ("ours", "mle", "mspe", "median", "mean", "mvub", "midrange")
QUANTILE_LEVELS = (0.99, 0.999, 1.0)
CSV_COLUMNS = ("scenario", "model", "estimator", "n", "replications",
               "failures", "risk_hat", "std_hat", "rel_risk", "q_0.99",
               "q_0.999", "q_1", "tests_mean", "tests_std", "tests_max",
               "tests_bound")
SWEEP_COLUMNS = ("p", "risk_ours", "risk_mle", "h2_model")


class UnknownScenarioError(KeyError):
    """The scenario name is not in the catalog."""


# ---------------------------------------------------------------------------
# Truth densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Truth:
    """Distribution the observations are drawn from.

    Attributes
    ----------
    kind : str
        ``in_model``: ``f_theta`` of the scenario's model.
        ``uniform_contaminated``: density ``10(1 - w)`` on ``[0, 0.1]`` and
        ``10 w`` on ``[0.9, 1]`` with ``w = 2/n``.
        ``uniform_mixture``: ``(1 - p) U[0, 1] + p U[0, 2]``.
        ``gaussian_mixture``: ``(1 - p) N(-5, 1) + p N(5, 1)``.
    theta : tuple of float or None
        True parameter for ``in_model``.
    p : float
        Mixture weight for the two mixture kinds.
    """

    kind: str = "in_model"
    theta: tuple[float, ...] | None = None
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in TRUTH_KINDS:
            raise ValueError(f"unknown truth kind {self.kind!r}")
        if self.kind == "in_model" and self.theta is None:
            raise ValueError("an in-model truth needs theta")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.theta is not None:
            object.__setattr__(self, "theta", tuple(
                float(v) for v in np.atleast_1d(self.theta)))

    def code(self, n: int) -> tuple[int, tuple[float, float]]:
        """Kernel density code and parameters of the truth for sample size n."""
        if self.kind == "uniform_contaminated":
            return K.UNIF_CONTAM, (2.0 / n, 0.0)
        if self.kind == "uniform_mixture":
            return K.UNIF_MIXTURE, (self.p, 0.0)
        if self.kind == "gaussian_mixture":
            return K.GAUSS_MIXTURE, (self.p, 0.0)
        raise ValueError("in-model truths use the model's own code")

    def draw(self, model: ParametricModel, n: int, seed: int) -> Sample:
        """Draw ``n`` observations with the PCG64 stream of ``seed``."""
        if self.kind == "in_model":
            return draw_sample(model, self.theta, n, seed)
        rng = np.random.default_rng(seed)
        if self.kind == "uniform_contaminated":
            # Each point is an outlier with probability 2/n.
            outlier = rng.random(n) < 2.0 / n
            u = rng.random(n)
            x = np.where(outlier, 0.9 + 0.1 * u, 0.1 * u)
        elif self.kind == "uniform_mixture":
            second = rng.random(n) < self.p
            x = rng.random(n) * np.where(second, 2.0, 1.0)
        else:
            second = rng.random(n) < self.p
            x = np.where(second, 5.0, -5.0) + rng.standard_normal(n)
        return Sample(x, provenance=f"seed:{seed}")

    def h2(self, model: ParametricModel, theta, n: int) -> float:
        """Squared Hellinger distance from the truth to ``f_theta``."""
        if self.kind == "in_model":
            return hellinger_sq(model, self.theta, theta)
        kind, params = self.code(n)
        return hellinger_sq_codes(kind, params, model.kind, theta)


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """A Monte Carlo design.

    Attributes
    ----------
    name : str
        Label used in reports.
    model : str
        Catalog identifier.
    truth : Truth
        Distribution of the observations.
    n_list : tuple of int
        Sample sizes.
    replications : int
        Number of samples per sample size.
    base_seed : int
        Replication ``r`` uses seed ``base_seed + r``.
    estimators : tuple of str
        Subset of ``ESTIMATORS``; ``ours`` is always run.
    config : EstimatorConfig1D, EstimatorConfigMD or None
        Search settings; ``None`` uses the defaults for the dimension.
    rect : tuple or None
        ``(lower, upper)`` replacing the parameter rectangle; only the
        Gaussian location-scale family supports this.
    baseline : BaselineSpec
        Grid sizes for the grid-based baselines.
    """

    name: str
    model: str
    truth: Truth
    n_list: tuple[int, ...] = (100,)
    replications: int = 1000
    base_seed: int = 0
    estimators: tuple[str, ...] = ("ours", "mle")
    config: object | None = None
    rect: tuple | None = None
    baseline: BaselineSpec = field(default_factory=BaselineSpec)

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("every sample size must be at least 1")
        for e in self.estimators:
            if e not in ESTIMATORS:
                raise ValueError(f"unknown estimator {e!r}")
        if "ours" not in self.estimators:
            object.__setattr__(self, "estimators", ("ours",) + tuple(self.estimators))
        if self.rect is not None and self.model != "gauss-2d":
            raise ValueError("only gauss-2d accepts a replacement rectangle")

    def resolved_model(self) -> ParametricModel:
        if self.rect is not None:
            lo, hi = self.rect
            return gauss_2d_model(ParameterRect(tuple(lo), tuple(hi)))
        return catalog_lookup(self.model)

    def resolved_config(self, model: ParametricModel):
        if self.config is not None:
            return self.config
        return EstimatorConfig1D() if model.dim == 1 else EstimatorConfigMD()


_T4 = (
    ("exp-rate", (1.0,), ("ours", "mle")),
    ("gauss-loc", (0.0,), ("ours", "mle")),
    ("rayleigh", (1.0,), ("ours", "mle")),
    ("cauchy-loc", (0.0,), ("ours", "mle")),
    ("unif-scale", (1.0,), ("ours", "mle", "mvub")),
    ("pareto-shift", (0.0,), ("ours", "mle")),
    ("unif-loc", (0.0,), ("ours", "midrange")),
    ("sqrt-singular", (0.0,), ("ours", "mean", "median", "mspe")),
)
_T6 = (
    ("gauss-2d", (0.0, 1.0)),
    ("cauchy-2d", (0.0, 1.0)),
    ("gamma-2d", (2.0, 3.0)),
    ("beta-2d", (3.0, 4.0)),
    ("shiftexp-2d", (0.0, 1.0)),
    ("unif-locscale-2d", (0.0, 1.0)),
)
# Sub-rectangle lower constants reproduce the published test counts.
_MD_CONFIG = EstimatorConfigMD(rect_constants_mode="per_rectangle")

SCENARIO_NAMES = (tuple(f"table4-ex{i}" for i in range(1, 9))
                  + tuple(f"table6-ex{i}" for i in range(1, 7))
                  + ("contam-uniform", "mixture-uniform", "mixture-gauss2d"))

MIXTURE_RECT = ((-10.0, 0.5), (10.0, 10.0))


def scenario_by_name(name: str, n_list=None, replications: int | None = None,
                     base_seed: int | None = None) -> Scenario:
    """Catalog scenario ``name`` with optional overrides.

    The two mixture names return the scenario at ``p = 0``; sweeps replace
    the truth for each ``p``.

    Raises
    ------
    UnknownScenarioError
        If ``name`` is not in ``SCENARIO_NAMES``.
    """
    if name.startswith("table4-ex") and name in SCENARIO_NAMES:
        model, theta, ests = _T4[int(name[-1]) - 1]
        sc = Scenario(name, model, Truth("in_model", theta),
                      (10, 25, 50, 75, 100), estimators=ests)
    elif name.startswith("table6-ex") and name in SCENARIO_NAMES:
        model, theta = _T6[int(name[-1]) - 1]
        sc = Scenario(name, model, Truth("in_model", theta), (25, 50, 75, 100),
                      config=_MD_CONFIG)
    elif name == "contam-uniform":
        sc = Scenario(name, "unif-scale", Truth("uniform_contaminated"),
                      (10, 25, 50, 75, 100))
    elif name == "mixture-uniform":
        sc = Scenario(name, "unif-scale", Truth("uniform_mixture"), (100,))
    elif name == "mixture-gauss2d":
        sc = Scenario(name, "gauss-2d", Truth("gaussian_mixture"), (100,),
                      config=_MD_CONFIG, rect=MIXTURE_RECT)
    else:
        raise UnknownScenarioError(
            f"unknown scenario {name!r}; choose one of {', '.join(SCENARIO_NAMES)}")
    updates = {}
    if n_list is not None:
        updates["n_list"] = tuple(n_list)
    if replications is not None:
        updates["replications"] = replications
    if base_seed is not None:
        updates["base_seed"] = base_seed
    return replace(sc, **updates) if updates else sc


# ---------------------------------------------------------------------------
# Replications
# ---------------------------------------------------------------------------

_FAILURES = (IterationCapError, QuadratureError)


def _run_ours(model, sample, config):
    if model.dim == 1:
        return estimate_1d(model, sample, config, record_trace=False)
    return estimate_md(model, sample, config)


def _baseline(name, model, sample, ours_theta, spec):
    if name == "mle":
        if model.has_closed_mle:
            return model.closed_mle(sample.values)
        if model.dim > 1:
            return mle_numeric(model, sample)
        anchors = [simple_stats(sample, "median", model)[0]]
        if ours_theta is not None:
            anchors.insert(0, float(ours_theta[0]))
        return mle_grid(model, sample, spec, anchors)
    if name == "mspe":
        return mspe(model, sample, spec)
    return simple_stats(sample, name, model)


def _replicate(job):
    """Run every estimator on replication ``r`` at sample size ``n``."""
    scenario, n, r = job
    model = scenario.resolved_model()
    config = scenario.resolved_config(model)
    sample = scenario.truth.draw(model, n, scenario.base_seed + r)
    thetas, h2s, count = {}, {}, -1
    ours_theta = None
    for est in scenario.estimators:
        try:
            if est == "ours":
                res = _run_ours(model, sample, config)
                theta, count = res.theta_hat, res.test_count
                ours_theta = theta
            else:
                theta = _baseline(est, model, sample, ours_theta, scenario.baseline)
            h2 = scenario.truth.h2(model, theta, n)
        except _FAILURES:
            theta, h2 = None, math.nan
        thetas[est] = None if theta is None else np.asarray(theta, dtype=float)
        h2s[est] = h2
    return thetas, h2s, count


def _map(jobs, threads):
    if threads is None or threads <= 1 or len(jobs) < 2:
        return [_replicate(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_replicate, jobs,
                             chunksize=max(1, len(jobs) // (8 * threads))))


def default_threads() -> int:
    """Available parallelism, as reported by the operating system."""
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def empirical_quantiles(values, levels=QUANTILE_LEVELS) -> tuple[float, ...]:
    """``inf{x : F_N(x) >= c}`` for each level ``c``; NaN for no data."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return tuple(math.nan for _ in levels)
    return tuple(float(q) for q in np.quantile(v, levels, method="inverted_cdf"))


@dataclass(frozen=True)
class ReportRow:
    """Aggregates for one ``(estimator, n)`` pair.

    ``rel_risk`` is ``risk(ours) / risk(estimator) - 1`` and the quantiles
    are those of ``max_j |ours_j - estimator_j|``; both are NaN on the
    ``ours`` row. Test-count columns are NaN on baseline rows.
    """

    scenario: str
    model: str
    estimator: str
    n: int
    replications: int
    failures: int
    risk_hat: float
    std_hat: float
    rel_risk: float
    q_99: float
    q_999: float
    q_1: float
    tests_mean: float
    tests_std: float
    tests_max: float
    tests_bound: float

    def as_tuple(self) -> tuple:
        return (self.scenario, self.model, self.estimator, self.n,
                self.replications, self.failures, self.risk_hat, self.std_hat,
                self.rel_risk, self.q_99, self.q_999, self.q_1,
                self.tests_mean, self.tests_std, self.tests_max,
                self.tests_bound)


@dataclass
class SimulationReport:
    """Rows plus the per-replication values they were computed from.

    ``h2[(estimator, n)]`` holds ``h^2(s, f_estimate)`` per replication (NaN
    on failure); ``estimates[(estimator, n)]`` the estimates, shape
    ``(N, d)``; ``test_counts[n]`` the test counts of ``ours``.
    """

    scenario: Scenario
    rows: list[ReportRow]
    h2: dict
    estimates: dict
    test_counts: dict

    def row(self, estimator: str, n: int) -> ReportRow:
        for r in self.rows:
            if r.estimator == estimator and r.n == n:
                return r
        raise KeyError((estimator, n))

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in self.rows:
                w.writerow([_fmt(v) for v in r.as_tuple()])
        return path

    def summary_table(self) -> str:
        """Plain-text table: one block per estimator, one column per n."""
        ns = self.scenario.n_list
        head = f"{self.scenario.name} ({self.scenario.model}, N={self.scenario.replications})"
        lines = [head, f"{'':>22}" + "".join(f"{'n=' + str(n):>12}" for n in ns)]
        for est in self.scenario.estimators:
            rows = [self.row(est, n) for n in ns]
            lines.append(f"{'R(' + est + ')':>22}" + "".join(
                f"{r.risk_hat:>12.4g}" for r in rows))
            if est != "ours":
                lines.append(f"{'Rrel(' + est + ')':>22}" + "".join(
                    f"{r.rel_risk:>12.3g}" for r in rows))
            lines.append(f"{'std(' + est + ')':>22}" + "".join(
                f"{r.std_hat:>12.4g}" for r in rows))
        lines.append(f"{'tests':>22}" + "".join(
            f"{self.row('ours', n).tests_mean:>12.1f}" for n in ns))
        fails = sum(r.failures for r in self.rows)
        if fails:
            lines.append(f"failed replications: {fails}")
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def _bound(model, config):
    if model.dim == 1:
        return test_count_bound_1d(model, config.kappa, config.resolved_eta(model))
    return test_count_bound_md(model, config.kappa, config.resolved_eta(model))


def _aggregate(scenario, model, config, n, results):
    rows, h2d, estd = [], {}, {}
    d = model.dim
    counts = np.array([c for _, _, c in results], dtype=float)
    counts_ok = counts[counts >= 0]
    h2_ours = np.array([h[1]["ours"] for h in results], dtype=float)
    risk_ours = _mean(h2_ours)
    ours_est = np.array([t["ours"] if t["ours"] is not None else np.full(d, np.nan)
                         for t, _, _ in results])
    for est in scenario.estimators:
        h2 = np.array([h[1][est] for h in results], dtype=float)
        th = np.array([t[est] if t[est] is not None else np.full(d, np.nan)
                       for t, _, _ in results])
        h2d[(est, n)], estd[(est, n)] = h2, th
        ok = np.isfinite(h2)
        risk = _mean(h2)
        std = float(np.std(h2[ok], ddof=1)) if ok.sum() > 1 else math.nan
        if est == "ours":
            rel, qs = math.nan, (math.nan,) * 3
            tm = float(np.mean(counts_ok)) if counts_ok.size else math.nan
            ts = float(np.std(counts_ok, ddof=1)) if counts_ok.size > 1 else 0.0
            tx = float(np.max(counts_ok)) if counts_ok.size else math.nan
            tb = _bound(model, config)
        else:
            rel = risk_ours / risk - 1.0 if risk > 0 else math.nan
            qs = empirical_quantiles(np.max(np.abs(ours_est - th), axis=1))
            tm = ts = tx = tb = math.nan
        rows.append(ReportRow(scenario.name, model.name, est, n, len(results),
                              int((~ok).sum()), risk, std, rel, *qs,
                              tm, ts, tx, tb))
    return rows, h2d, estd, counts


def _mean(values) -> float:
    v = values[np.isfinite(values)]
    return float(np.sum(v) / v.size) if v.size else math.nan


def run_risk_study(scenario: Scenario, threads: int | None = 1) -> SimulationReport:
    """Estimate ``E h^2(s, f_estimate)`` for every estimator and sample size.

    Each row holds ``R_N = mean h^2``, its standard deviation with ``N - 1``
    in the denominator, the relative risk of ``ours`` against the row's
    estimator and the agreement quantiles. Replications where an estimator
    fails are counted in ``failures`` and left out of that estimator's
    aggregates.
    """
    model = scenario.resolved_model()
    config = scenario.resolved_config(model)
    rows, h2, ests, counts = [], {}, {}, {}
    for n in scenario.n_list:
        jobs = [(scenario, n, r) for r in range(scenario.replications)]
        results = _map(jobs, threads)
        r_, h_, e_, c_ = _aggregate(scenario, model, config, n, results)
        rows += r_
        h2.update(h_)
        ests.update(e_)
        counts[n] = c_
    return SimulationReport(scenario, rows, h2, ests, counts)


@dataclass(frozen=True)
class QuantileRow:
    """Empirical quantiles of ``max_j |ours_j - mle_j|`` at one n."""

    n: int
    q_99: float
    q_999: float
    q_1: float


def run_agreement_study(scenario: Scenario,
                        threads: int | None = 1) -> list[QuantileRow]:
    """Quantiles of the distance between our estimate and the MLE.

    Raises
    ------
    ValueError
        If the model has no MLE.
    """
    model = scenario.resolved_model()
    if not model.has_closed_mle and model.name not in (
            "cauchy-loc", "cauchy-2d", "gamma-2d", "beta-2d"):
        raise ValueError(f"{model.name} has no MLE to compare with")
    report = run_risk_study(replace(scenario, estimators=("ours", "mle")), threads)
    return [QuantileRow(n, *(getattr(report.row("mle", n), a)
                             for a in ("q_99", "q_999", "q_1")))
            for n in scenario.n_list]


def run_uniform_contamination(n_list=(10, 25, 50, 75, 100), N: int = 1000,
                              base_seed: int = 0,
                              threads: int | None = 1) -> SimulationReport:
    """Uniform scale model fitted to the two-block contaminated density."""
    sc = scenario_by_name("contam-uniform", n_list, N, base_seed)
    return run_risk_study(sc, threads)


# ---------------------------------------------------------------------------
# Mixture sweeps
# ---------------------------------------------------------------------------

def mixture_hellinger_to_model(p: float) -> float:
    """Distance from ``(1 - p) U[0, 1] + p U[0, 2]`` to the uniform scale family.

    With ``p0 = 1 - 1/sqrt2`` the closest member is ``U[0, 1]`` for
    ``p <= p0`` and ``U[0, 2]`` otherwise, giving ``1 - sqrt(2 - p)/sqrt2``
    and ``1 - (sqrt(2 - p) + sqrt p)/2`` respectively.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    p0 = 1.0 - 1.0 / math.sqrt(2.0)
    if p <= p0:
        return 1.0 - math.sqrt(2.0 - p) / math.sqrt(2.0)
    return 1.0 - (math.sqrt(2.0 - p) + math.sqrt(p)) / 2.0


def gaussian_mixture_hellinger_to_model(p: float,
                                        rect=MIXTURE_RECT) -> float:
    """Distance from ``(1 - p) N(-5, 1) + p N(5, 1)`` to the Gaussian family.

    Minimizes quadrature ``h^2`` over ``rect`` with Nelder-Mead started at
    both components and at the pooled fit.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    lo, hi = np.asarray(rect[0], float), np.asarray(rect[1], float)

    def obj(v):
        t = np.clip(v, lo, hi)
        return hellinger_sq_codes(K.GAUSS_MIXTURE, (p, 0.0), K.GAUSS_2D, t)

    pooled = (10.0 * p - 5.0, math.sqrt(1.0 + 100.0 * p * (1.0 - p)))
    best = math.inf
    for start in ((-5.0, 1.0), (5.0, 1.0), pooled):
        res = optimize.minimize(obj, np.clip(start, lo, hi), method="Nelder-Mead",
                                options={"xatol": 1e-8, "fatol": 1e-12})
        best = min(best, float(res.fun))
    return best


@dataclass(frozen=True)
class SweepRow:
    """Risks of ours and the MLE at one mixture weight."""

    p: float
    risk_ours: float
    risk_mle: float
    h2_model: float


def run_mixture_sweep(kind: str, p_grid, n: int = 100, N: int = 1000,
                      base_seed: int = 0,
                      threads: int | None = 1) -> list[SweepRow]:
    """Risk of ours and the MLE as the mixture weight ``p`` varies.

    ``kind`` is ``uniform_1d`` (uniform scale model) or ``gaussian_2d``
    (Gaussian model on ``[-10, 10] x [0.5, 10]``).
    """
    if kind == "uniform_1d":
        base, ref = scenario_by_name("mixture-uniform"), mixture_hellinger_to_model
    elif kind == "gaussian_2d":
        base, ref = (scenario_by_name("mixture-gauss2d"),
                     gaussian_mixture_hellinger_to_model)
    else:
        raise ValueError("kind must be 'uniform_1d' or 'gaussian_2d'")
    out = []
    for p in p_grid:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError("every p must lie in [0, 1]")
        sc = replace(base, truth=Truth(base.truth.kind, None, p), n_list=(n,),
                     replications=N, base_seed=base_seed)
        rep = run_risk_study(sc, threads)
        out.append(SweepRow(p, rep.row("ours", n).risk_hat,
                            rep.row("mle", n).risk_hat, ref(p)))
    return out


def write_sweep_csv(rows, path) -> Path:
    """Write sweep rows with columns ``p, risk_ours, risk_mle, h2_model``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([repr(r.p), _fmt(r.risk_ours), _fmt(r.risk_mle),
                        _fmt(r.h2_model)])
    return path
