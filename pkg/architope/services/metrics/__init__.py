from .diagnostics import (
    DiagnosticResult,
    DiagnosticStep,
    Verdict,
    limits_agree,
    strict_convergence_diagnostic,
)
from .families import build_family, known_families
from .metrics_service import (
    direct_sum_norm,
    error_report,
    ess_support_index,
    local_metric,
    local_metric_series,
    local_metric_tail_bound,
    lp_distance,
    lp_distance_over,
    lp_metric,
    power_error,
    region_errors,
    region_masses,
    strict_norm,
)

__all__ = [
    "DiagnosticResult",
    "DiagnosticStep",
    "Verdict",
    "limits_agree",
    "build_family",
    "known_families",
    "strict_convergence_diagnostic",
    "direct_sum_norm",
    "error_report",
    "ess_support_index",
    "local_metric",
    "local_metric_series",
    "local_metric_tail_bound",
    "lp_distance",
    "lp_distance_over",
    "lp_metric",
    "power_error",
    "region_errors",
    "region_masses",
    "strict_norm",
]
