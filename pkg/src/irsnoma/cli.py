"""Command-line front end.

Exit status: 0 on success, 1 when a validation check fails, 2 on a usage
error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .experiments import PRESETS, power_grid, run_preset, run_sweep, write_csv
from .montecarlo import SCHEMES, STRATEGIES, USERS, SchemeSpec
from .scenario import ConfigError, ScenarioConfig
from .validation import run_validation

DEFAULT_GRID = (20.0, 50.0, 2.0)
DEFAULT_TRIALS = 10**6


class UsageError(ValueError):
    pass


@dataclass
class RunManifest:
    command: str
    config_path: str | None = None
    preset: str | None = None
    scheme: str = "irs_noma"
    strategy: str | None = None
    user: str = "u1"
    n_elements: tuple | None = None
    q: int | None = None
    start_dbm: float | None = None
    stop_dbm: float | None = None
    step_db: float | None = None
    trials: int = DEFAULT_TRIALS
    seed: int = 1
    out: str | None = None
    n_jobs: int = 1

    def validate(self) -> None:
        if self.preset is not None and self.preset not in PRESETS:
            raise UsageError(f"--preset: unknown preset {self.preset!r}")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.n_jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.step_db is not None and self.step_db <= 0:
            raise UsageError("--power-step must be > 0")
        if self.start_dbm is not None and self.stop_dbm is not None and self.start_dbm > self.stop_dbm:
            raise UsageError("--power-start must not exceed --power-stop")
        if self.command != "sweep":
            return
        if self.scheme == "relay" and self.strategy is not None:
            raise UsageError("--strategy: the relay scheme takes no phase-shift strategy")
        if self.n_elements is not None and len(self.n_elements) != 1:
            raise UsageError("--n-elements: a sweep takes exactly one value")

    def grid(self, default) -> list[float] | None:
        parts = (self.start_dbm, self.stop_dbm, self.step_db)
        if all(p is None for p in parts):
            return None if default is None else power_grid(*default)
        start, stop, step = (d if p is None else p for p, d in zip(parts, default or DEFAULT_GRID))
        try:
            return power_grid(start, stop, step)
        except ValueError as exc:
            raise UsageError(f"--power-start/--power-stop/--power-step: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsnoma",
        description="Outage simulation of IRS-assisted NOMA/OMA downlinks versus relaying.",
    )
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--preset", choices=sorted(PRESETS), help="reproduce one figure's data set")
    mode.add_argument("--validate", action="store_true", help="run the validation battery")
    parser.add_argument("--config", help="JSON scenario file (keys as in ScenarioConfig)")
    parser.add_argument("--scheme", choices=SCHEMES, default="irs_noma")
    parser.add_argument("--strategy", choices=STRATEGIES, default=None,
                        help="phase design for IRS schemes (default: coherent)")
    parser.add_argument("--user", choices=USERS, default="u1")
    parser.add_argument("--n-elements", type=int, nargs="+", help="IRS size N (presets accept several)")
    parser.add_argument("--q", type=int, help="number of pilot phase sets Q for select_q")
    parser.add_argument("--power-start", type=float, dest="start_dbm")
    parser.add_argument("--power-stop", type=float, dest="stop_dbm")
    parser.add_argument("--power-step", type=float, dest="step_db")
    parser.add_argument("--trials", type=int, default=None,
                        help=f"Monte Carlo trials per point (default {DEFAULT_TRIALS})")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--jobs", type=int, default=1, dest="n_jobs", help="worker threads")
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    return parser


def manifest_from_args(args) -> RunManifest:
    command = "preset" if args.preset else "validate" if args.validate else "sweep"
    return RunManifest(
        command=command,
        config_path=args.config,
        preset=args.preset,
        scheme=args.scheme,
        strategy=args.strategy,
        user=args.user,
        n_elements=tuple(args.n_elements) if args.n_elements else None,
        q=args.q,
        start_dbm=args.start_dbm,
        stop_dbm=args.stop_dbm,
        step_db=args.step_db,
        trials=DEFAULT_TRIALS if args.trials is None else args.trials,
        seed=args.seed,
        out=args.out,
        n_jobs=args.n_jobs,
    )


def _load_config(manifest: RunManifest) -> ScenarioConfig:
    cfg = ScenarioConfig.load(manifest.config_path) if manifest.config_path else ScenarioConfig()
    changes = {}
    if manifest.command == "sweep" and manifest.n_elements:
        changes["N"] = manifest.n_elements[0]
    if manifest.q is not None:
        changes["Q"] = manifest.q
    return cfg.replace(**changes) if changes else cfg


def _emit(rows, out) -> None:
    text = write_csv(rows, out)
    if out is None:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    manifest = manifest_from_args(args)
    try:
        manifest.validate()
        cfg = _load_config(manifest)
        if manifest.command == "validate":
            reports = run_validation(manifest.trials, manifest.seed)
            for r in reports:
                print(r.to_text())
            failed = [r.name for r in reports if not r.passed]
            print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
            return 1 if failed else 0
        if manifest.command == "preset":
            rows = run_preset(
                manifest.preset, cfg, manifest.trials, manifest.seed, manifest.n_jobs,
                n_values=manifest.n_elements, powers=manifest.grid(PRESETS[manifest.preset].grid),
            )
        else:
            strategy = manifest.strategy
            if manifest.scheme != "relay" and strategy is None:
                strategy = "coherent"
            spec = SchemeSpec(manifest.scheme, strategy, manifest.user)
            rows = run_sweep(spec, cfg, manifest.grid(DEFAULT_GRID), manifest.trials, manifest.seed, manifest.n_jobs)
        _emit(rows, manifest.out)
    except (UsageError, ConfigError, OSError) as exc:
        parser.error(str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
