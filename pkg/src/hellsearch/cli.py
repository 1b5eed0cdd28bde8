"""Command-line front end: ``estimate``, ``simulate`` and ``theory``.

Exit codes: 0 on success, 2 on invalid input or configuration, 3 when the
estimator itself fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from hellsearch import __version__
from hellsearch.diagnostics import TheoryModeRequired, compute_theory_bundle
from hellsearch.distance import QuadratureError
from hellsearch.models import Sample, UnknownModelError, catalog_lookup
from hellsearch.search1d import (
    RADIUS_RULES_1D,
    EstimatorConfig1D,
    IterationCapError,
    estimate_1d,
)
from hellsearch.searchmd import (
    RADIUS_RULES_MD,
    RECT_CONSTANT_MODES,
    EstimatorConfigMD,
    UnsupportedRuleError,
    estimate_md,
)
from hellsearch.simlab import (
    SCENARIO_NAMES,
    Scenario,
    Truth,
    UnknownScenarioError,
    default_threads,
    run_mixture_sweep,
    run_risk_study,
    scenario_by_name,
    write_sweep_csv,
)

SEED_ENV = "HELLSEARCH_SEED"
EXIT_OK, EXIT_CONFIG, EXIT_FAILURE = 0, 2, 3
CONFIG_KEYS = ("kappa", "eta", "t", "radius_rule", "rect_constants_mode",
               "max_iterations")


class ConfigError(ValueError):
    """Invalid user input; reported with exit status 2."""


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _load_json(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {p} must hold a JSON object")
    return data


def _merged_settings(args) -> dict:
    """Config file values overridden by any flags given."""
    settings = _load_json(args.config) if args.config else {}
    unknown = set(settings) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def build_config(model, settings: dict):
    """Estimator configuration for ``model`` from a settings mapping.

    Raises
    ------
    ConfigError
        If a value violates a configuration constraint.
    """
    s = dict(settings)
    try:
        if model.dim == 1:
            for key in ("eta", "t"):
                if isinstance(s.get(key), (list, tuple)):
                    if len(s[key]) != 1:
                        raise ValueError(f"{key} takes one value for {model.name}")
                    s[key] = s[key][0]
            if "rect_constants_mode" in s:
                raise ValueError("rect_constants_mode applies to two-parameter models")
            return EstimatorConfig1D(**s)
        for key in ("eta", "t"):
            if key in s and s[key] is not None:
                s[key] = tuple(np.broadcast_to(np.atleast_1d(
                    np.asarray(s[key], dtype=float)), (model.dim,)))
        if "max_iterations" in s:
            s["max_outer_steps"] = s.pop("max_iterations")
        s.setdefault("radius_rule", model.default_rule)
        return EstimatorConfigMD(**s)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _config_echo(config) -> dict:
    out = {}
    for f in dataclasses.fields(config):
        v = getattr(config, f.name)
        if dataclasses.is_dataclass(v):
            v = dataclasses.asdict(v)
        out[f.name] = v
    return out


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_ready(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return None if math.isnan(obj) else float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def cmd_estimate(args) -> int:
    try:
        model = catalog_lookup(args.model)
    except UnknownModelError as exc:
        raise ConfigError(exc.args[0]) from None
    path = Path(args.data)
    if not path.is_file():
        raise ConfigError(f"data file not found: {path}")
    try:
        sample = Sample.from_file(path)
    except ValueError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    config = build_config(model, _merged_settings(args))
    seed = args.seed if args.seed is not None else _default_seed()
    echo = {"model": model.name, "data": str(path), "n": sample.n, "seed": seed,
            "config": _config_echo(config)}
    print("# " + json.dumps(_json_ready(echo), sort_keys=True))
    try:
        if model.dim == 1:
            est = estimate_1d(model, sample, config, record_trace=False)
        else:
            est = estimate_md(model, sample, config)
    except UnsupportedRuleError as exc:
        raise ConfigError(str(exc)) from None
    except (IterationCapError, QuadratureError) as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    result = {"theta_hat": est.theta_hat, "lower": est.final_lower,
              "upper": est.final_upper, "test_count": est.test_count}
    print("theta_hat  " + " ".join(f"{v:.10g}" for v in est.theta_hat))
    print("final      " + " x ".join(f"[{a:.10g}, {b:.10g}]" for a, b in
                                    zip(est.final_lower, est.final_upper)))
    print(f"tests      {est.test_count}")
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(_json_ready({**echo, "result": result}),
                                  indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _scenario_from_file(path, args) -> Scenario:
    data = _load_json(path)
    try:
        truth = Truth(**data.pop("truth"))
        model = catalog_lookup(data["model"])
        cfg = data.pop("config", None)
        if cfg is not None:
            data["config"] = build_config(model, cfg)
        if "rect" in data and data["rect"] is not None:
            data["rect"] = tuple(tuple(v) for v in data["rect"])
        for key in ("n_list", "estimators"):
            if key in data:
                data[key] = tuple(data[key])
        return Scenario(truth=truth, **data)
    except UnknownModelError as exc:
        raise ConfigError(exc.args[0]) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid scenario file {path}: {exc}") from None


def cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    threads = args.threads or default_threads()
    out = Path(args.out)
    if args.scenario.endswith(".json"):
        sc = _scenario_from_file(args.scenario, args)
        name = sc.name
        updates = {k: v for k, v in (("n_list", args.n), ("replications", args.reps))
                   if v is not None}
        if args.seed is not None or os.environ.get(SEED_ENV) is not None:
            updates["base_seed"] = seed
        sc = dataclasses.replace(sc, **updates) if updates else sc
    else:
        try:
            sc = scenario_by_name(args.scenario, args.n, args.reps, seed)
        except UnknownScenarioError as exc:
            raise ConfigError(exc.args[0]) from None
        name = sc.name
    echo = {"scenario": name, "n_list": sc.n_list, "replications": sc.replications,
            "base_seed": sc.base_seed, "threads": threads}
    if name in ("mixture-uniform", "mixture-gauss2d"):
        p_grid = args.p_grid or tuple(np.round(np.linspace(0, 1, 21), 10))
        echo["p_grid"] = p_grid
        print("# " + json.dumps(_json_ready(echo), sort_keys=True))
        kind = "uniform_1d" if name == "mixture-uniform" else "gaussian_2d"
        try:
            rows = run_mixture_sweep(kind, p_grid, sc.n_list[0], sc.replications,
                                     sc.base_seed, threads)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        path = write_sweep_csv(rows, out / f"{name}.csv")
        print(f"{'p':>8}{'risk_ours':>14}{'risk_mle':>14}{'h2_model':>14}")
        for r in rows:
            print(f"{r.p:>8.3f}{r.risk_ours:>14.5g}{r.risk_mle:>14.5g}"
                  f"{r.h2_model:>14.5g}")
        print(f"wrote {path}")
        return EXIT_OK
    print("# " + json.dumps(_json_ready(echo), sort_keys=True))
    report = run_risk_study(sc, threads)
    path = report.to_csv(out / f"{name}.csv")
    print(report.summary_table())
    print(f"wrote {path}")
    return EXIT_FAILURE if any(r.failures for r in report.rows) else EXIT_OK


def cmd_theory(args) -> int:
    try:
        model = catalog_lookup(args.model)
    except UnknownModelError as exc:
        raise ConfigError(exc.args[0]) from None
    config = build_config(model, _merged_settings(args))
    try:
        bundle = compute_theory_bundle(model, config, args.c)
    except TheoryModeRequired as exc:
        raise ConfigError(f"{exc}; pass --t with positive values") from None
    print(json.dumps(_json_ready(dataclasses.asdict(bundle)), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hellsearch",
        description="Robust parametric estimation by pairwise Hellinger tests.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_config_flags(sp):
        sp.add_argument("--config", help="JSON file with estimator settings")
        sp.add_argument("--kappa", type=float, help="shrink parameter")
        sp.add_argument("--eta", type=_floats, help="stopping width(s)")
        sp.add_argument("--t", type=_floats, help="grid thinness per coordinate")
        sp.add_argument("--radius-rule", dest="radius_rule",
                        choices=sorted(set(RADIUS_RULES_1D) | set(RADIUS_RULES_MD)))
        sp.add_argument("--rect-mode", dest="rect_constants_mode",
                        choices=RECT_CONSTANT_MODES,
                        help="lower constants per rectangle (2-D only)")
        sp.add_argument("--max-iterations", dest="max_iterations", type=int)

    e = sub.add_parser("estimate", help="estimate a parameter from a data file")
    e.add_argument("--model", required=True, help="catalog identifier")
    e.add_argument("--data", required=True, help="one observation per line")
    e.add_argument("--seed", type=int, help="recorded in the output")
    e.add_argument("--out", help="write the result as JSON")
    add_config_flags(e)
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("simulate", help="run a catalog or JSON scenario")
    s.add_argument("--scenario", required=True,
                   help=f"one of {', '.join(SCENARIO_NAMES)} or a .json file")
    s.add_argument("--n", type=_ints, help="sample sizes, comma-separated")
    s.add_argument("--reps", type=int, help="replications per sample size")
    s.add_argument("--seed", type=int,
                   help=f"base seed (default: ${SEED_ENV} or 0)")
    s.add_argument("--p-grid", dest="p_grid", type=_floats,
                   help="mixture weights for the mixture sweeps")
    s.add_argument("--threads", type=int, help="worker processes")
    s.add_argument("--out", default="results", help="output directory")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("theory", help="theory constants for a model")
    t.add_argument("--model", required=True)
    t.add_argument("--c", type=float, default=1.0,
                   help="unspecified constant of the risk bound (default 1)")
    add_config_flags(t)
    t.set_defaults(func=cmd_theory)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
