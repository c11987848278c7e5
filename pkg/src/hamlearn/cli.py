"""Command-line interface: run sweeps from a config, recover from an
externally supplied constraint CSV, list model families.

Exit codes are a stable contract: 0 success, 2 usage or config error,
3 resource cap exceeded, 4 numerical failure or degenerate kernel.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import ConfigError, parse_config
from .errors import NumericalError, ResourceLimitError
from .experiments import (
    SWEEP_KINDS,
    ExperimentConfig,
    run_sweep,
    sweep_csv_text,
)
from .models import ModelFamily
from .recovery import ConstraintMatrix, error_estimate, recover
from .states import MAX_SITES_DENSE, MAX_SITES_SPARSE
from .version import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4

# Per-sweep site caps: anything needing a full dense spectrum or dense
# propagation stops earlier than sparse ground-state work.
_SITE_CAPS = {
    "groundstate-sweep": MAX_SITES_SPARSE,
    "xy-gap-scan": MAX_SITES_SPARSE,
    "gibbs-sweep": MAX_SITES_DENSE,
    "multistate": MAX_SITES_DENSE,
    "quench": MAX_SITES_DENSE,
    "driven": MAX_SITES_DENSE,
}


@dataclasses.dataclass(frozen=True)
class RunManifest:
    config_path: str
    config: dict
    out_dir: str
    csv_paths: tuple[str, ...]
    seed: int
    version: str
    created_utc: str

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2)


def _config_echo(cfg: ExperimentConfig) -> dict:
    out = {}
    for f in dataclasses.fields(cfg):
        val = getattr(cfg, f.name)
        if isinstance(val, ModelFamily):
            val = val.value
        elif isinstance(val, tuple):
            val = list(val)
        out[f.name] = val
    return out


def cmd_run(
    config_path: str,
    out_dir: str,
    seed_override: Optional[int] = None,
    jobs_override: Optional[int] = None,
    trials_override: Optional[int] = None,
    epsilon_override: Optional[float] = None,
) -> RunManifest:
    cfg, prefix = parse_config(config_path)
    overrides = {}
    if seed_override is not None:
        overrides["seed"] = seed_override
    if jobs_override is not None:
        overrides["jobs"] = jobs_override
    if trials_override is not None:
        overrides["trials"] = trials_override
    if epsilon_override is not None:
        overrides["epsilon"] = epsilon_override
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    cap = _SITE_CAPS[cfg.kind]
    if cfg.n_sites > cap:
        raise ResourceLimitError(
            f"{cfg.kind} capped at {cap} sites, requested {cfg.n_sites}")
    records = run_sweep(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{prefix}.csv"
    csv_path.write_text(sweep_csv_text(cfg, records))
    manifest = RunManifest(
        config_path=str(config_path),
        config=_config_echo(cfg),
        out_dir=str(out),
        csv_paths=(str(csv_path),),
        seed=cfg.seed,
        version=__version__,
        created_utc=datetime.now(timezone.utc).isoformat(),
    )
    (out / "manifest.json").write_text(manifest.to_json())
    return manifest


def cmd_recover(
    k_matrix_csv: str,
    terms_csv: Optional[str] = None,
    epsilon: float = 0.0,
) -> dict:
    """Offline recovery from a constraint CSV; returns the report dict."""
    path = Path(k_matrix_csv)
    if not path.is_file():
        raise ConfigError(f"{path}: constraint CSV not found")
    k = ConstraintMatrix.from_csv_text(path.read_text())
    if terms_csv is not None:
        labels = _read_term_labels(terms_csv)
        if labels != list(k.term_labels):
            raise ConfigError(
                f"{terms_csv}: term labels do not match the constraint CSV header")
    got = recover(k)
    est = error_estimate(got.lambdas, epsilon)
    return {
        "terms": list(k.term_labels),
        "extended": k.extended,
        "coefficients": [float(c) for c in got.coeffs],
        "lambda0": got.lambda0,
        "lambda1": got.lambda1,
        "gap": got.gap,
        "degenerate_kernel": got.degenerate_kernel_flag,
        "epsilon": epsilon,
        "delta_est": est.value,
        "lambdas": [float(v) for v in got.lambdas],
    }


def _read_term_labels(path: str) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{p}: terms file not found")
    labels = []
    for line in p.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        labels.extend(tok.strip() for tok in line.split(",") if tok.strip())
    if not labels:
        raise ConfigError(f"{p}: no term labels found")
    return labels


def list_models() -> dict:
    return {
        "models": [fam.value for fam in ModelFamily],
        "experiments": list(SWEEP_KINDS),
        "constraint_localities": "any k >= 1 (enumerated over contiguous windows)",
        "site_caps": dict(_SITE_CAPS),
        "version": __version__,
    }


def _print_recover_report(report: dict) -> None:
    print(f"terms ({len(report['terms'])}):")
    for lab, c in zip(report["terms"], report["coefficients"]):
        print(f"  {lab}  {c:+.12e}")
    if report["extended"]:
        for lab, c in zip(report["terms"], report["coefficients"][len(report["terms"]):]):
            print(f"  {lab}:drive  {c:+.12e}")
    print(f"lambda0 = {report['lambda0']:.6e}")
    print(f"lambda1 = {report['lambda1']:.6e}")
    print(f"gap     = {report['gap']:.6e}")
    print(f"degenerate_kernel = {report['degenerate_kernel']}")
    print(f"delta_est(epsilon={report['epsilon']:g}) = {report['delta_est']:.6e}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamlearn",
        description="Recover local Hamiltonians from local expectation values",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a configured experiment sweep")
    run_p.add_argument("--config", required=True, help="config file path")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the global seed")
    run_p.add_argument("--jobs", type=int, default=None, help="parallel trial workers")
    run_p.add_argument("--trials", type=int, default=None, help="override trial count")
    run_p.add_argument("--epsilon", type=float, default=None, help="override noise scale")

    rec_p = sub.add_parser("recover", help="recover coefficients from a constraint CSV")
    rec_p.add_argument("matrix", help="constraint matrix CSV (header row = term labels)")
    rec_p.add_argument("--terms", default=None,
                       help="optional term-label file to validate against the header")
    rec_p.add_argument("--epsilon", type=float, default=0.0,
                       help="noise scale for the error estimate")
    rec_p.add_argument("--json", dest="json_out", default=None,
                       help="also write the full report to this JSON file")

    lm_p = sub.add_parser("list-models", help="list model families and experiment kinds")
    lm_p.add_argument("--json", action="store_true", help="machine-readable output")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            manifest = cmd_run(
                args.config, args.out,
                seed_override=args.seed,
                jobs_override=args.jobs,
                trials_override=args.trials,
                epsilon_override=args.epsilon,
            )
            for path in manifest.csv_paths:
                print(f"wrote {path}")
            print(f"wrote {Path(manifest.out_dir) / 'manifest.json'}")
            return EXIT_OK
        if args.command == "recover":
            if args.epsilon < 0:
                raise ConfigError("--epsilon must be >= 0")
            report = cmd_recover(args.matrix, args.terms, args.epsilon)
            _print_recover_report(report)
            if args.json_out:
                Path(args.json_out).write_text(json.dumps(report, indent=2))
            if report["degenerate_kernel"]:
                print("warning: degenerate kernel, coefficients not unique",
                      file=sys.stderr)
                return EXIT_NUMERICAL
            return EXIT_OK
        if args.command == "list-models":
            info = list_models()
            if args.json:
                print(json.dumps(info, indent=2))
            else:
                print("model families:")
                for name in info["models"]:
                    print(f"  {name}")
                print("experiments:")
                for name in info["experiments"]:
                    print(f"  {name}")
                print(f"site caps: {info['site_caps']}")
            return EXIT_OK
        parser.error(f"unknown command {args.command!r}")
        return EXIT_USAGE
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
