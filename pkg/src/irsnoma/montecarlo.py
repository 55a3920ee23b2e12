"""Monte Carlo outage estimation for IRS-NOMA, IRS-OMA and relaying.

Trials are processed in fixed blocks of ``BLOCK_SIZE`` trials. Block ``b``
draws all of its randomness from ``RngStream(seed, b)``, so trial ``t`` is a pure
function of ``(seed, t)``: the same for any worker count, any evaluation
order, and any total trial count that includes it. Counting is exact
integer addition, so parallel and serial runs agree bit for bit.

Each trial is one coherence block: fresh fading and, for the random and
selection designs, fresh phases.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from . import analysis
from .channel import ChannelSampler, RngStream, block_sizes
from .phase import coherent_gain_sq, coherent_phases, random_phases, rotated_sum
from .scenario import ScenarioConfig, derive_thresholds

SCHEMES = ("irs_noma", "irs_oma", "relay")
STRATEGIES = ("coherent", "random", "select_q")
USERS = ("u1", "u2")


@dataclass(frozen=True)
class SchemeSpec:
    scheme: str
    strategy: str | None = None
    user: str = "u1"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.user not in USERS:
            raise ValueError(f"unknown user {self.user!r}; expected one of {USERS}")
        if self.scheme == "relay":
            if self.strategy is not None:
                raise ValueError("the relay scheme takes no phase-shift strategy")
        elif self.strategy not in STRATEGIES:
            raise ValueError(f"IRS schemes need a strategy from {STRATEGIES}, got {self.strategy!r}")

    @property
    def label(self) -> str:
        parts = [self.scheme] + ([self.strategy] if self.strategy else []) + [self.user]
        return "/".join(parts)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = successes / trials
    z2n = z * z / trials
    centre = (p + z2n / 2.0) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / (1.0 + z2n)
    # keep the point estimate inside the interval despite rounding at p = 0 or 1
    return min(max(centre - half, 0.0), p), max(min(centre + half, 1.0), p)


@dataclass(frozen=True)
class OutageEstimate:
    trials: int
    outage_count: int
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int
    confidence: float = 0.95

    @classmethod
    def from_counts(cls, outage_count: int, trials: int, seed: int, confidence: float = 0.95):
        lo, hi = wilson_interval(outage_count, trials, confidence)
        return cls(trials, outage_count, outage_count / trials, lo, hi, seed, confidence)

    def with_confidence(self, confidence: float) -> "OutageEstimate":
        return OutageEstimate.from_counts(self.outage_count, self.trials, self.seed, confidence)

    @property
    def std_error(self) -> float:
        return math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.trials)


def _strategy_phases(strategy, sampler, which, q):
    """Phases chosen on U1's or U2's cascade, with that user's ``xi``.

    Cached on the sampler so that several schemes or power levels evaluated
    on one block share the work.
    """
    key = ("phases", strategy, which, q if strategy == "select_q" else 1)
    if key in sampler.cache:
        return sampler.cache[key]
    g0 = sampler.g0
    g_sel = sampler.g1 if which == "u1" else sampler.g2
    prod = g0 * g_sel
    if strategy == "coherent":
        result = coherent_phases(g0, g_sel), np.sum(np.abs(prod), axis=-1).astype(complex)
    else:
        n_cand = 1 if strategy == "random" else q
        best_theta = best_xi = None
        for k in range(n_cand):
            theta = random_phases(sampler.n_elements, sampler.phase_generator(k), sampler.size)
            xi = rotated_sum(prod, theta)
            if best_xi is None:
                best_theta, best_xi = theta, xi
                continue
            # strict comparison: ties keep the lower candidate index
            better = np.abs(xi) > np.abs(best_xi)
            best_xi = np.where(better, xi, best_xi)
            best_theta = np.where(better[:, None], theta, best_theta)
        result = best_theta, best_xi
    sampler.cache[key] = result
    return result


def _u1_gain_sq(strategy, sampler, q):
    key = ("gain_u1", strategy, q if strategy == "select_q" else 1)
    if key not in sampler.cache:
        if strategy == "coherent":
            sampler.cache[key] = coherent_gain_sq(sampler.g0, sampler.g1)
        else:
            _, xi = _strategy_phases(strategy, sampler, "u1", q)
            sampler.cache[key] = xi.real**2 + xi.imag**2
    return sampler.cache[key]


def _direct_plus_reflected(cfg, sampler, xi2):
    return sampler.h2 / math.sqrt(cfg.d2**cfg.alpha) + xi2 / math.sqrt(cfg.reflect_loss_u2)


def outage_indicators(spec: SchemeSpec, cfg: ScenarioConfig, thresholds, sampler: ChannelSampler):
    """Boolean outage flag for every trial of ``sampler``'s block."""
    snr = thresholds.snr_linear
    if spec.scheme == "relay":
        if spec.user == "u1":
            a, b = analysis.relay_thresholds(cfg, snr)
            return (np.abs(sampler.h2) ** 2 < a) | (np.abs(sampler.h12) ** 2 < b)
        thr = cfg.d2**cfg.alpha * (2.0 ** (2.0 * cfg.R2) - 1.0) / snr
        return np.abs(sampler.h2) ** 2 < thr

    if spec.user == "u1":
        eps_i = thresholds.eps1 if spec.scheme == "irs_noma" else thresholds.eps2
        if math.isinf(eps_i):
            return np.ones(sampler.size, dtype=bool)
        return _u1_gain_sq(spec.strategy, sampler, cfg.Q) < eps_i

    if spec.scheme == "irs_noma":
        # one IRS configuration, chosen for U1; U2 sees it on its own cascade
        key = ("xi_u2_noma", spec.strategy, cfg.Q if spec.strategy == "select_q" else 1)
        if key not in sampler.cache:
            theta, _ = _strategy_phases(spec.strategy, sampler, "u1", cfg.Q)
            sampler.cache[key] = np.sum(np.exp(-1j * theta) * sampler.g0 * sampler.g2, axis=-1)
        gain = np.abs(_direct_plus_reflected(cfg, sampler, sampler.cache[key])) ** 2
        s1 = cfg.c1_sq * snr * gain
        s2 = cfg.c2_sq * snr * gain
        fail_sic = s1 / (s2 + 1.0) < thresholds.eps
        fail_own = s2 < 2.0**cfg.R2 - 1.0
        return fail_sic | fail_own

    # IRS-OMA serves U2 in its own phase, with the IRS configured for U2
    _, xi2 = _strategy_phases(spec.strategy, sampler, "u2", cfg.Q)
    gain = np.abs(_direct_plus_reflected(cfg, sampler, xi2)) ** 2
    return snr * gain < 2.0 ** (2.0 * cfg.R2) - 1.0


def trial_outage(spec: SchemeSpec, cfg: ScenarioConfig, thresholds, rng: RngStream) -> bool:
    """Outage indicator of a single trial drawn from ``rng``."""
    return bool(outage_indicators(spec, cfg, thresholds, ChannelSampler(rng, cfg.N, 1))[0])


def _check_trials(trials) -> int:
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")
    return int(trials)


def count_outages(jobs, trials: int, seed: int, n_jobs: int = 1) -> list[int]:
    """Outage counts for several ``(spec, cfg, thresholds)`` jobs on shared draws.

    All jobs see the same fading and candidate phases trial by trial, so a
    job's count equals what :func:`estimate_outage` gives for it alone. Every
    ``cfg`` must have the same number of elements.
    """
    trials = _check_trials(trials)
    jobs = list(jobs)
    if not jobs:
        return []
    sizes = {cfg.N for _, cfg, _ in jobs}
    if len(sizes) != 1:
        raise ValueError("jobs sharing draws need the same number of elements")
    n_elements = sizes.pop()

    def work(item):
        block, size = item
        sampler = ChannelSampler(RngStream(seed, block), n_elements, size)
        return [int(np.count_nonzero(outage_indicators(s, c, t, sampler))) for s, c, t in jobs]

    blocks = list(enumerate(block_sizes(trials)))
    totals = [0] * len(jobs)
    if n_jobs is None or n_jobs <= 1 or len(blocks) == 1:
        results = map(work, blocks)
        for counts in results:
            totals = [a + b for a, b in zip(totals, counts)]
        return totals
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        for counts in pool.map(work, blocks):
            totals = [a + b for a, b in zip(totals, counts)]
    return totals


def estimate_outage(
    spec: SchemeSpec,
    cfg: ScenarioConfig,
    trials: int,
    seed: int,
    thresholds=None,
    n_jobs: int = 1,
    confidence: float = 0.95,
) -> OutageEstimate:
    """Outage probability from ``trials`` Monte Carlo trials.

    ``thresholds`` defaults to :func:`derive_thresholds` of ``cfg``; passing
    them explicitly lets callers probe a chosen ``eps1``/``eps2`` directly.
    """
    trials = _check_trials(trials)
    if thresholds is None:
        thresholds = derive_thresholds(cfg)
    (count,) = count_outages([(spec, cfg, thresholds)], trials, seed, n_jobs)
    return OutageEstimate.from_counts(count, trials, seed, confidence)


def analytic_comparators(spec: SchemeSpec, cfg: ScenarioConfig, thresholds) -> dict[str, float]:
    """Every closed-form value that describes the same outage as ``spec``."""
    out: dict[str, float] = {}
    if spec.scheme == "relay":
        if spec.user == "u1":
            out["relay_closed_form"] = analysis.relay_outage_u1(cfg, thresholds)
        else:
            out["relay_closed_form"] = analysis.relay_outage_u2(cfg, thresholds.snr_linear)
        return out
    if spec.user != "u1":
        return out
    eps_i = thresholds.eps1 if spec.scheme == "irs_noma" else thresholds.eps2
    n = cfg.N
    if spec.strategy == "coherent":
        out["clt"] = analysis.coherent_clt_outage(n, eps_i)
        if math.isfinite(eps_i):
            if n % 2 == 0:
                out["upper_bound"] = analysis.coherent_upper_bound(n, eps_i).raw
                out["high_snr_bound"] = analysis.coherent_high_snr_approx(n, eps_i).raw
            out["loose_bound"] = analysis.coherent_loose_bound(n, eps_i).raw
    elif spec.strategy == "random":
        out["gaussian_approx"] = analysis.random_phase_outage(n, eps_i)
    return out


@dataclass(frozen=True)
class SweepPoint:
    power_dbm: float
    estimate: OutageEstimate
    analytic: dict = field(default_factory=dict)


def sweep(
    spec: SchemeSpec,
    cfg: ScenarioConfig,
    power_grid_dbm,
    trials: int,
    seed: int,
    n_jobs: int = 1,
    confidence: float = 0.95,
) -> list[SweepPoint]:
    """Estimate outage at every power of the grid, in grid order.

    Every point reuses ``seed``, so the fading draws are common across the
    grid and the simulated curve is monotone in power for U1.
    """
    grid = [float(p) for p in power_grid_dbm]
    if not grid:
        raise ValueError("power grid is empty")
    trials = _check_trials(trials)
    cfgs = [cfg.replace(tx_power_dbm=p) for p in grid]
    thrs = [derive_thresholds(c) for c in cfgs]
    counts = count_outages([(spec, c, t) for c, t in zip(cfgs, thrs)], trials, seed, n_jobs)
    return [
        SweepPoint(p, OutageEstimate.from_counts(k, trials, seed, confidence), analytic_comparators(spec, c, t))
        for p, k, c, t in zip(grid, counts, cfgs, thrs)
    ]
