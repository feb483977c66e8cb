"""Command-line entry point.

fracspace <experiment> --config cfg.json [--theta ...] [--size ...]
          [--seed N] [--out DIR] [--format csv|json|both]
fracspace list

Exit codes: 0 all checks passed, 1 a verification cell failed (or a
runtime verification error), 2 unknown experiment or invalid config.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import FracspaceError, InvalidConfig, UnknownExperiment
from .experiments import EXPERIMENTS
from .reporting import make_run_config, write_report

# experiments that want positional grid sizes get them prefilled so a
# bare `fracspace <name>` runs the documented default sweep
_DEFAULT_SIZES = {
    "lemma41": [256],
    "reiteration": [256],
    "criticality": [2**14],
    "weight": [20],
    "intersection": [16, 12],
    "halft1": [8, 12, 16],
    "stokes-retraction": [8, 16, 24],
    "stokes-equivalence": [8, 12, 16],
    "higher-power": [128],
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fracspace",
        description="Verification experiments for fractional power spaces "
        "and real-interpolation norms.",
    )
    p.add_argument("experiment", help="experiment name, or 'list'")
    p.add_argument("--config", help="JSON config file", default=None)
    p.add_argument("--theta", nargs="+", type=float, default=None)
    p.add_argument("--size", nargs="+", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output directory", default=None)
    p.add_argument("--format", choices=("csv", "json", "both"), default=None)
    return p


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidConfig("config root must be a JSON object")
    return doc


def _env_seed() -> int | None:
    raw = os.environ.get("FRACSPACE_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidConfig(f"FRACSPACE_SEED must be an integer, got {raw!r}") from exc


def _emit_error(exc: Exception) -> None:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.experiment == "list":
        for name, (_, doc) in EXPERIMENTS.items():
            print(f"{name:20s} {doc}")
        return 0
    try:
        doc = _load_config(args.config)
        doc["experiment"] = args.experiment
        if args.size is not None:
            doc["sizes"] = args.size
        elif "sizes" not in doc and args.experiment in _DEFAULT_SIZES:
            doc["sizes"] = _DEFAULT_SIZES[args.experiment]
        if args.theta is not None:
            doc["thetas"] = args.theta
        if args.seed is not None:  # precedence: flag > env > config file
            doc["seed"] = args.seed
        else:
            env = _env_seed()
            if env is not None:
                doc["seed"] = env
        if args.out is not None:
            doc["output_dir"] = args.out
        if args.format is not None:
            doc["format"] = args.format
        config = make_run_config(doc, EXPERIMENTS)
        runner, _ = EXPERIMENTS[config.experiment]
        report = runner(config)
        paths = write_report(report, config)
    except (UnknownExperiment, InvalidConfig) as exc:
        _emit_error(exc)
        return 2
    except FracspaceError as exc:
        _emit_error(exc)
        return 1
    n_pass = report.summary["n_pass"]
    n_cells = report.summary["n_cells"]
    status = "PASS" if report.passed else "FAIL"
    print(f"{config.experiment}: {status} {n_pass}/{n_cells} checks -> "
          + ", ".join(paths))
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
