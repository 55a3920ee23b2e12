"""Special functions used by the outage formulas.

Thin, domain-checked wrappers over :mod:`scipy.special`. Every function
accepts a scalar or an array and returns the same shape (a Python float for
scalar input). Arguments outside the documented domain raise
:class:`DomainError` instead of silently producing ``nan``/``inf``.
"""

from __future__ import annotations

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def _finite(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} requires finite arguments")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def bessel_k0(x):
    """Modified Bessel function of the second kind, order 0, for ``x > 0``."""
    arr = _finite(x, "bessel_k0")
    if np.any(arr <= 0):
        raise DomainError("bessel_k0 requires x > 0")
    return _out(special.k0(arr))


def bessel_k1(x):
    """Modified Bessel function of the second kind, order 1, for ``x > 0``."""
    arr = _finite(x, "bessel_k1")
    if np.any(arr <= 0):
        raise DomainError("bessel_k1 requires x > 0")
    return _out(special.k1(arr))


def bessel_k0_bound(x):
    """Elementary upper bound ``sqrt(pi) exp(-x) / sqrt(2x)`` on K0."""
    arr = _finite(x, "bessel_k0_bound")
    if np.any(arr <= 0):
        raise DomainError("bessel_k0_bound requires x > 0")
    return _out(np.sqrt(np.pi) * np.exp(-arr) / np.sqrt(2.0 * arr))


def reg_lower_gamma(s, x):
    """Regularized lower incomplete gamma ``P(s, x) = gamma(s, x) / Gamma(s)``.

    ``x = inf`` is accepted and gives 1.
    """
    s_arr = _finite(s, "reg_lower_gamma")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)):
        raise DomainError("reg_lower_gamma requires x to be a number")
    if np.any(s_arr <= 0):
        raise DomainError("reg_lower_gamma requires s > 0")
    if np.any(x_arr < 0):
        raise DomainError("reg_lower_gamma requires x >= 0")
    return _out(special.gammainc(s_arr, x_arr))


def ln_gamma(s):
    """Natural log of the gamma function for ``s > 0``."""
    arr = _finite(s, "ln_gamma")
    if np.any(arr <= 0):
        raise DomainError("ln_gamma requires s > 0")
    return _out(special.gammaln(arr))


def phi_erf(x):
    """Error function ``2/sqrt(pi) * int_0^x exp(-t^2) dt``."""
    return _out(special.erf(_finite(x, "phi_erf")))
