"""Outage simulation and analysis of IRS-assisted NOMA downlinks."""

from .montecarlo import OutageEstimate, SchemeSpec, estimate_outage, sweep
from .scenario import DerivedThresholds, ScenarioConfig, derive_thresholds, paper_default_scenario

__all__ = [
    "DerivedThresholds",
    "OutageEstimate",
    "ScenarioConfig",
    "SchemeSpec",
    "derive_thresholds",
    "estimate_outage",
    "paper_default_scenario",
    "sweep",
]

__version__ = "0.1.0"
