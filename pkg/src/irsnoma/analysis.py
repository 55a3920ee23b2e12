"""Closed-form outage probabilities, approximations and bounds.

Thresholds ``eps_i`` are the values from :func:`irsnoma.scenario.derive_thresholds`:
outage of an IRS link happens when ``|xi_N|^2 < eps_i``. An infinite
threshold (infeasible NOMA power split) gives outage probability 1.

Probability-valued functions return a float in ``[0, 1]``. Bounds can exceed
one, so they return a :class:`BoundValue` carrying the raw number together
with a ``vacuous`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .numerics import bessel_k1, ln_gamma, phi_erf, reg_lower_gamma

# mean and variance of |g0_n * gi_n| for independent CN(0, 1) factors
PRODUCT_MEAN = math.pi / 4.0
PRODUCT_VAR = 1.0 - math.pi**2 / 16.0


class BoundValue(NamedTuple):
    raw: float
    vacuous: bool

    @property
    def clamped(self) -> float:
        return min(max(self.raw, 0.0), 1.0)


def _bound(raw: float) -> BoundValue:
    return BoundValue(raw, raw > 1.0)


@dataclass(frozen=True)
class AnalyticCurvePoint:
    """One analytic value on a power sweep (clamped to [0, 1] for reporting)."""

    power_dbm: float
    kind: str
    raw: float

    @property
    def value(self) -> float:
        return min(max(self.raw, 0.0), 1.0)

    @property
    def vacuous(self) -> bool:
        return self.raw > 1.0


def _clamp(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def _check_n(n: int, even: bool = False) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"number of elements must be a positive integer, got {n!r}")
    if even and n % 2:
        raise ValueError(f"this bound is stated for an even number of elements, got {n}")
    return int(n)


def _check_eps(eps: float) -> float:
    if math.isnan(eps) or eps < 0:
        raise ValueError(f"threshold must be >= 0, got {eps!r}")
    return float(eps)


def relay_thresholds(cfg, snr_linear: float) -> tuple[float, float]:
    """Outage thresholds on ``|h2|^2`` and ``|h12|^2`` for two-hop relaying of U1."""
    gap = 2.0 ** (4.0 * cfg.R1) - 1.0
    return cfg.d2**cfg.alpha * gap / snr_linear, cfg.d12**cfg.alpha * gap / snr_linear


def relay_outage_u1(cfg, thresholds) -> float:
    """Outage of U1 under conventional two-slot relaying through U2."""
    a, b = relay_thresholds(cfg, thresholds.snr_linear)
    # (1 - e^-a) + e^-a (1 - e^-b) == 1 - e^-(a+b)
    return _clamp(-math.expm1(-(a + b)))


def relay_outage_u2(cfg, snr_linear: float | None = None) -> float:
    """Outage of U2 served directly in its own half of the frame."""
    snr = cfg.snr_linear if snr_linear is None else snr_linear
    thr = cfg.d2**cfg.alpha * (2.0 ** (2.0 * cfg.R2) - 1.0) / snr
    return _clamp(-math.expm1(-thr))


def coherent_clt_outage(n: int, eps_i: float) -> float:
    """Gaussian (CLT) approximation of ``P(sum_n |g0_n gi_n| < sqrt(eps_i))``.

    The sum has mean ``n*pi/4`` and variance ``n*(1 - pi^2/16)``; the
    ``sqrt(2)`` in the erf argument converts the error function to the
    normal CDF.
    """
    n = _check_n(n)
    eps_i = _check_eps(eps_i)
    if math.isinf(eps_i):
        return 1.0
    arg = math.sqrt(n) * (math.sqrt(eps_i) / n - PRODUCT_MEAN) / (math.sqrt(2.0) * math.sqrt(PRODUCT_VAR))
    return _clamp(0.5 + 0.5 * phi_erf(arg))


def _log_bound_coefficient(n: int) -> float:
    # 2^n pi^(n/2) Gamma(3/2)^n 2^(-3n/2) collapses to (pi / (2 sqrt 2))^n
    return n * math.log(math.pi / (2.0 * math.sqrt(2.0)))


def coherent_upper_bound(n: int, eps1: float) -> BoundValue:
    """Upper bound on coherent-phasing outage for even ``n``.

    Evaluated as ``(pi/(2*sqrt(2)))^n * P(3n/2, 2*sqrt(eps1))`` so that the
    factorial in the coefficient cancels against the incomplete gamma
    function and nothing overflows for large ``n``.
    """
    n = _check_n(n, even=True)
    eps1 = _check_eps(eps1)
    if eps1 == 0.0:
        return _bound(0.0)
    p = reg_lower_gamma(1.5 * n, 2.0 * math.sqrt(eps1))
    if p == 0.0:
        return _bound(0.0)
    return _bound(math.exp(_log_bound_coefficient(n) + math.log(p)))


def coherent_high_snr_approx(n: int, eps1: float) -> BoundValue:
    """Small-threshold form of :func:`coherent_upper_bound`.

    ``pi^n * eps1^(3n/4) / Gamma(3n/2 + 1)``; the exponent ``3n/4`` is the
    diversity order it certifies.
    """
    n = _check_n(n, even=True)
    eps1 = _check_eps(eps1)
    if eps1 == 0.0:
        return _bound(0.0)
    if math.isinf(eps1):
        return _bound(math.inf)
    log_val = n * math.log(math.pi) + 0.75 * n * math.log(eps1) - ln_gamma(1.5 * n + 1.0)
    return _bound(math.exp(min(log_val, 700.0)))


def coherent_loose_bound(n: int, eps1: float) -> BoundValue:
    """``P(|g0 g1|^2 < eps1)^n``: the full-diversity bound, exact for ``n = 1``."""
    n = _check_n(n)
    eps1 = _check_eps(eps1)
    return _bound(product_cdf(eps1) ** n)


def product_cdf(x):
    """CDF of ``|g0_n gi_n|^2``, i.e. ``1 - 2 sqrt(x) K1(2 sqrt(x))``.

    Accepts a scalar or an array of nonnegative values.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise ValueError("product_cdf requires x >= 0")
    scalar = arr.ndim == 0
    z = 2.0 * np.sqrt(np.atleast_1d(arr))
    out = np.ones_like(z)
    out[z == 0] = 0.0
    # K1 underflows to 0 well before z = 700
    mid = (z > 0) & (z < 700.0)
    if np.any(mid):
        out[mid] = np.clip(1.0 - z[mid] * bessel_k1(z[mid]), 0.0, 1.0)
    return float(out[0]) if scalar else out


def loose_bound_asymptote(n: int, eps1: float) -> float:
    """``(-eps1 * log(eps1))^n``, the small-``eps1`` shape of the loose bound."""
    return (-eps1 * math.log(eps1)) ** n


def random_phase_outage(n: int, eps_i: float) -> float:
    """Outage with random phases, treating ``xi_N`` as CN(0, n)."""
    n = _check_n(n)
    eps_i = _check_eps(eps_i)
    if math.isinf(eps_i):
        return 1.0
    return _clamp(-math.expm1(-eps_i / n))
