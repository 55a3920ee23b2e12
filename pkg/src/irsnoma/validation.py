"""Validation battery: distribution fits plus formula-versus-simulation checks."""

from __future__ import annotations

import dataclasses
import math

from . import analysis, stats
from .montecarlo import SchemeSpec, estimate_outage
from .scenario import ScenarioConfig, derive_thresholds
from .stats import Check, FitReport


def _se(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 1.0 / trials) / trials)


def check_relay(trials: int, seed: int, power_dbm: float = 30.0) -> FitReport:
    cfg = ScenarioConfig(tx_power_dbm=power_dbm)
    thr = derive_thresholds(cfg)
    exact = analysis.relay_outage_u1(cfg, thr)
    est = estimate_outage(SchemeSpec("relay"), cfg, trials, seed, thr)
    checks = [Check("p_hat", est.p_hat, exact, 3.0 * _se(exact, trials))]
    return FitReport("relay_closed_form", f"two-hop relaying at {power_dbm:g} dBm", trials, seed, 0.0, checks)


def check_single_element(trials: int, seed: int, eps1: float = 1.0) -> FitReport:
    cfg = ScenarioConfig(N=1)
    thr = dataclasses.replace(derive_thresholds(cfg), eps1=eps1)
    exact = analysis.coherent_loose_bound(1, eps1).raw
    est = estimate_outage(SchemeSpec("irs_noma", "coherent"), cfg, trials, seed, thr)
    checks = [Check("p_hat", est.p_hat, exact, 3.0 * _se(exact, trials))]
    return FitReport("single_element_exact", f"N=1 coherent, eps1={eps1:g}", trials, seed, 0.0, checks)


def check_clt(trials: int, seed: int, n: int = 16, power_dbm: float = 8.0) -> FitReport:
    cfg = ScenarioConfig(N=n, tx_power_dbm=power_dbm)
    thr = derive_thresholds(cfg)
    est = estimate_outage(SchemeSpec("irs_noma", "coherent"), cfg, trials, seed, thr)
    approx = analysis.coherent_clt_outage(n, thr.eps1)
    rel = abs(approx - est.p_hat) / est.p_hat
    checks = [Check("relative_error", rel, 0.0, 0.15)]
    return FitReport("clt_low_snr", f"coherent N={n} at {power_dbm:g} dBm", trials, seed, 0.0, checks)


def check_gaussian_approx(trials: int, seed: int, n: int = 64, power_dbm: float = 24.0) -> FitReport:
    cfg = ScenarioConfig(N=n, tx_power_dbm=power_dbm)
    thr = derive_thresholds(cfg)
    est = estimate_outage(SchemeSpec("irs_noma", "random"), cfg, trials, seed, thr)
    approx = analysis.random_phase_outage(n, thr.eps1)
    rel = abs(approx - est.p_hat) / est.p_hat
    checks = [Check("relative_error", rel, 0.0, 0.05)]
    return FitReport("random_phase_approx", f"random N={n} at {power_dbm:g} dBm", trials, seed, 0.0, checks)


def check_upper_bound(trials: int, seed: int, n: int = 4, power_dbm: float = 30.0) -> FitReport:
    cfg = ScenarioConfig(N=n, tx_power_dbm=power_dbm)
    thr = derive_thresholds(cfg)
    est = estimate_outage(SchemeSpec("irs_noma", "coherent"), cfg, trials, seed, thr)
    bound = analysis.coherent_upper_bound(n, thr.eps1).raw
    checks = [Check("p_hat_below_bound", est.p_hat, bound, 0.0, one_sided=True)]
    return FitReport("upper_bound_envelope", f"coherent N={n} at {power_dbm:g} dBm", trials, seed, 0.0, checks)


def run_validation(trials: int = stats.DEFAULT_TRIALS, seed: int = 2024) -> list[FitReport]:
    """Run every check; each gets its own seed offset so none share draws."""
    return [
        stats.test_prop1(trials, seed),
        stats.test_lemma2(64, trials, seed + 1),
        stats.test_product_channel(trials, seed + 2),
        check_relay(trials, seed + 3),
        check_single_element(trials, seed + 4),
        check_clt(trials, seed + 5),
        check_gaussian_approx(trials, seed + 6),
        check_upper_bound(trials, seed + 7),
    ]
