"""scikit-learn style front end.

The feature matrix is a single column of transmit powers in dBm. ``fit``
runs the simulation on those powers; ``predict`` returns outage
probabilities. Parameters follow the scikit-learn conventions, so the
estimators work with ``get_params``/``set_params``, ``clone`` and friends.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import analysis
from .montecarlo import SchemeSpec, sweep
from .scenario import ScenarioConfig, derive_thresholds


def check_power_grid(X) -> np.ndarray:
    """Validate a power grid given as a 1-D array or a single-column matrix.

    Returns a 1-D float array of powers in dBm.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    arr = check_array(arr, ensure_2d=True, dtype=float)
    if arr.shape[1] != 1:
        raise ValueError(f"expected a single column of powers in dBm, got {arr.shape[1]} columns")
    return arr[:, 0]


class OutageSimulator(BaseEstimator):
    """Monte Carlo outage probability versus transmit power.

    Parameters
    ----------
    scheme, strategy, user : str
        Transmission scheme (``irs_noma``, ``irs_oma``, ``relay``), phase
        design (``coherent``, ``random``, ``select_q``; ``None`` for relay)
        and the user whose outage is estimated.
    n_elements, n_candidates : int
        IRS size N and number of pilot phase sets Q.
    trials : int
        Monte Carlo trials per power point.
    seed : int
        Seed shared by every power point.
    n_jobs : int
        Worker threads. Results do not depend on it.
    scenario : ScenarioConfig, optional
        Geometry, rates and power split; defaults to ``ScenarioConfig()``.

    Attributes
    ----------
    power_dbm_ : ndarray
        Fitted powers, sorted ascending.
    outage_ : ndarray
        Point estimates at ``power_dbm_``.
    ci_ : ndarray of shape (n_points, 2)
        95% Wilson intervals.
    analytic_ : dict of str -> ndarray
        Closed-form comparators available for this scheme.
    """

    def __init__(
        self,
        scheme="irs_noma",
        strategy="coherent",
        user="u1",
        n_elements=16,
        n_candidates=1,
        trials=100_000,
        seed=0,
        n_jobs=1,
        scenario=None,
    ):
        self.scheme = scheme
        self.strategy = strategy
        self.user = user
        self.n_elements = n_elements
        self.n_candidates = n_candidates
        self.trials = trials
        self.seed = seed
        self.n_jobs = n_jobs
        self.scenario = scenario

    def _config(self) -> ScenarioConfig:
        base = self.scenario if self.scenario is not None else ScenarioConfig()
        return base.replace(N=self.n_elements, Q=self.n_candidates)

    def fit(self, X, y=None):
        powers = np.sort(check_power_grid(X))
        spec = SchemeSpec(self.scheme, self.strategy, self.user)
        points = sweep(spec, self._config(), powers, self.trials, self.seed, self.n_jobs)
        self.power_dbm_ = powers
        self.estimates_ = [p.estimate for p in points]
        self.outage_ = np.array([e.p_hat for e in self.estimates_])
        self.ci_ = np.array([[e.ci_low, e.ci_high] for e in self.estimates_])
        kinds = points[0].analytic.keys()
        self.analytic_ = {k: np.array([p.analytic[k] for p in points]) for k in kinds}
        return self

    def predict(self, X):
        """Outage at the given powers, interpolated in log-probability.

        Powers outside the fitted range are rejected rather than
        extrapolated.
        """
        check_is_fitted(self, "outage_")
        powers = check_power_grid(X)
        lo, hi = self.power_dbm_[0], self.power_dbm_[-1]
        if np.any(powers < lo) or np.any(powers > hi):
            raise ValueError(f"powers must lie in the fitted range [{lo}, {hi}] dBm")
        if len(self.power_dbm_) == 1:
            return np.full(powers.shape, self.outage_[0])
        # zero counts are floored at half a trial so the log stays finite
        floor = 0.5 / self.trials
        log_p = np.log10(np.maximum(self.outage_, floor))
        out = 10.0 ** np.interp(powers, self.power_dbm_, log_p)
        return np.where(out <= floor, 0.0, out)


class AnalyticOutage(BaseEstimator):
    """Closed-form outage curve with the estimator interface.

    ``kind`` selects the formula: ``relay_u1``, ``relay_u2``, ``clt``,
    ``upper_bound``, ``high_snr_bound``, ``loose_bound`` or ``gaussian_approx``.
    ``scheme`` picks the NOMA (``irs_noma``) or OMA (``irs_oma``) threshold
    for the IRS formulas. Bounds are returned unclamped.
    """

    _KINDS = ("relay_u1", "relay_u2", "clt", "upper_bound", "high_snr_bound", "loose_bound", "gaussian_approx")

    def __init__(self, kind="clt", scheme="irs_noma", n_elements=16, scenario=None):
        self.kind = kind
        self.scheme = scheme
        self.n_elements = n_elements
        self.scenario = scenario

    def fit(self, X=None, y=None):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {self._KINDS}")
        if self.scheme not in ("irs_noma", "irs_oma"):
            raise ValueError("scheme must be irs_noma or irs_oma")
        base = self.scenario if self.scenario is not None else ScenarioConfig()
        self.config_ = base.replace(N=self.n_elements)
        return self

    def _value(self, power):
        cfg = self.config_.replace(tx_power_dbm=float(power))
        thr = derive_thresholds(cfg)
        eps_i = thr.eps1 if self.scheme == "irs_noma" else thr.eps2
        n = cfg.N
        if self.kind == "relay_u1":
            return analysis.relay_outage_u1(cfg, thr)
        if self.kind == "relay_u2":
            return analysis.relay_outage_u2(cfg)
        if self.kind == "clt":
            return analysis.coherent_clt_outage(n, eps_i)
        if self.kind == "gaussian_approx":
            return analysis.random_phase_outage(n, eps_i)
        if eps_i == float("inf"):
            return 1.0
        if self.kind == "upper_bound":
            return analysis.coherent_upper_bound(n, eps_i).raw
        if self.kind == "high_snr_bound":
            return analysis.coherent_high_snr_approx(n, eps_i).raw
        return analysis.coherent_loose_bound(n, eps_i).raw

    def predict(self, X):
        check_is_fitted(self, "config_")
        return np.array([self._value(p) for p in check_power_grid(X)])
