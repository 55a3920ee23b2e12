"""Figure presets, power grids and the CSV output format."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from . import analysis
from .montecarlo import OutageEstimate, SchemeSpec, analytic_comparators, count_outages, sweep
from .scenario import ScenarioConfig, derive_thresholds

CSV_COLUMNS = (
    "curve",
    "scheme",
    "strategy",
    "user",
    "N",
    "Q",
    "power_dbm",
    "trials",
    "outage_count",
    "p_hat",
    "ci_low",
    "ci_high",
    "analytic_value",
    "analytic_kind",
    "seed",
)


def power_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid ``start, start + step, ..., <= stop``."""
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise ValueError("power grid bounds must be finite")
    if step <= 0:
        raise ValueError("power step must be > 0")
    if start > stop:
        raise ValueError("power start must not exceed power stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 9) for i in range(count)]


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def sim_row(curve: str, spec: SchemeSpec, cfg: ScenarioConfig, power: float, est: OutageEstimate) -> dict:
    irs = spec.scheme != "relay"
    return {
        "curve": curve,
        "scheme": spec.scheme,
        "strategy": spec.strategy or "",
        "user": spec.user,
        "N": cfg.N if irs else "",
        "Q": cfg.Q if spec.strategy == "select_q" else "",
        "power_dbm": power,
        "trials": est.trials,
        "outage_count": est.outage_count,
        "p_hat": est.p_hat,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "analytic_value": "",
        "analytic_kind": "",
        "seed": est.seed,
    }


def analytic_row(curve: str, spec: SchemeSpec, cfg: ScenarioConfig, power: float, kind: str, raw: float) -> dict:
    """Analytic value, clamped to [0, 1]; a bound above one is tagged ``:vacuous``."""
    irs = spec.scheme != "relay"
    return {
        "curve": curve,
        "scheme": spec.scheme,
        "strategy": spec.strategy or "",
        "user": spec.user,
        "N": cfg.N if irs else "",
        "Q": cfg.Q if spec.strategy == "select_q" else "",
        "power_dbm": power,
        "trials": "",
        "outage_count": "",
        "p_hat": "",
        "ci_low": "",
        "ci_high": "",
        "analytic_value": min(max(raw, 0.0), 1.0),
        "analytic_kind": kind + (":vacuous" if raw > 1.0 else ""),
        "seed": "",
    }


def _curve_prefix(spec: SchemeSpec) -> str:
    return "_".join(p for p in (spec.scheme, spec.strategy, spec.user if spec.user != "u1" else None) if p)


def sweep_rows(spec: SchemeSpec, cfg: ScenarioConfig, points, kinds=None) -> list[dict]:
    """Simulated rows for the whole grid, then one block of rows per analytic kind."""
    prefix = _curve_prefix(spec)
    rows = [sim_row(prefix + "_sim", spec, cfg, p.power_dbm, p.estimate) for p in points]
    available = list(points[0].analytic) if points else []
    for kind in available:
        if kinds is not None and kind not in kinds:
            continue
        curve = "relay_closed_form" if kind == "relay_closed_form" else f"{prefix}_{kind}"
        rows.extend(analytic_row(curve, spec, cfg, p.power_dbm, kind, p.analytic[kind]) for p in points)
    return rows


def write_csv(rows, out=None) -> str:
    """Render rows in the fixed column order; also write them to ``out`` if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


@dataclass(frozen=True)
class Preset:
    name: str
    strategy: str
    n_values: tuple
    q_values: tuple
    grid: tuple
    kinds: frozenset
    description: str


PRESETS = {
    "fig1": Preset(
        "fig1", "coherent", (16, 64), (1,), (-10.0, 40.0, 2.0), frozenset({"clt", "upper_bound"}),
        "coherent phasing: IRS-NOMA and IRS-OMA against relaying, with CLT and bound",
    ),
    "fig2": Preset(
        "fig2", "random", (16, 64), (1,), (0.0, 50.0, 2.0), frozenset({"gaussian_approx"}),
        "random phasing against relaying, with the complex-Gaussian approximation",
    ),
    "fig3": Preset(
        "fig3", "select_q", (64,), (1, 2, 4), (0.0, 40.0, 1.0), frozenset(),
        "phase-set selection with Q pilot sets, N = 64",
    ),
}


def run_preset(
    name: str,
    cfg: ScenarioConfig | None = None,
    trials: int = 10**6,
    seed: int = 1,
    n_jobs: int = 1,
    n_values=None,
    powers=None,
) -> list[dict]:
    """CSV rows for one figure preset.

    For each N (and Q) the IRS-NOMA and IRS-OMA curves are simulated on the
    same draws; the relaying closed form closes the file.
    """
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    preset = PRESETS[name]
    base = cfg if cfg is not None else ScenarioConfig()
    powers = power_grid(*preset.grid) if powers is None else [float(p) for p in powers]
    rows: list[dict] = []
    for n in n_values or preset.n_values:
        jobs, tags = [], []
        for q in preset.q_values:
            for scheme in ("irs_noma", "irs_oma"):
                spec = SchemeSpec(scheme, preset.strategy, "u1")
                for p in powers:
                    c = base.replace(N=n, Q=q, tx_power_dbm=p)
                    jobs.append((spec, c, derive_thresholds(c)))
                    tags.append((spec, c, p))
        counts = count_outages(jobs, trials, seed, n_jobs)
        sims, analytic = [], []
        for (spec, c, p), (_, _, thr), k in zip(tags, jobs, counts):
            est = OutageEstimate.from_counts(k, trials, seed)
            prefix = _curve_prefix(spec) + (f"_q{c.Q}" if spec.strategy == "select_q" else "")
            sims.append(sim_row(prefix + "_sim", spec, c, p, est))
            for kind, raw in analytic_comparators(spec, c, thr).items():
                if kind in preset.kinds:
                    analytic.append((kind, analytic_row(f"{prefix}_{kind}", spec, c, p, kind, raw)))
        rows.extend(sims)
        for kind in sorted(preset.kinds):
            rows.extend(r for k, r in analytic if k == kind)
    relay = SchemeSpec("relay")
    for p in powers:
        c = base.replace(tx_power_dbm=p)
        raw = analysis.relay_outage_u1(c, derive_thresholds(c))
        rows.append(analytic_row("relay_closed_form", relay, c, p, "relay_closed_form", raw))
    return rows


def run_sweep(spec: SchemeSpec, cfg: ScenarioConfig, powers, trials: int, seed: int, n_jobs: int = 1) -> list[dict]:
    return sweep_rows(spec, cfg, sweep(spec, cfg, powers, trials, seed, n_jobs))
