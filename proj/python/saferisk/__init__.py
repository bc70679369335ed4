"""Construction safety risk analysis: attribute risk, smoothed-bootstrap
simulation, kernel densities, copulas and risk escalation."""

from ._core import (
    InsufficientSupport,
    IoError,
    SafeRiskError,
    ValidationError,
    classify,
    copula_density,
    demo_catalog_csv,
    demo_report_risks,
    escalate,
    escalation_deltas,
    kde,
    kendall_tau,
    quantile,
    relative_risks,
    report_risks,
    return_period_quantile,
    risk_ranges,
    silverman_bandwidth,
    simulate,
    simulate_pairs,
    situation_risk,
)

__all__ = [
    "InsufficientSupport",
    "IoError",
    "SafeRiskError",
    "ValidationError",
    "classify",
    "copula_density",
    "demo_catalog_csv",
    "demo_report_risks",
    "escalate",
    "escalation_deltas",
    "kde",
    "kendall_tau",
    "quantile",
    "relative_risks",
    "report_risks",
    "return_period_quantile",
    "risk_ranges",
    "silverman_bandwidth",
    "simulate",
    "simulate_pairs",
    "situation_risk",
]
