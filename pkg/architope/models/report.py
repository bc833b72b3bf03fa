"""
Report Data Models
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass(frozen=True)
class ErrorReport:
    """Error functionals of one (model, target, measure) triple over K_1..K_N."""
    per_region: Tuple[Tuple[int, float], ...]  # (n, (int_{K_n} |f-g|^p dmu)^(1/p))
    lp_total: float
    lp_power_sum: float  # the un-rooted series sum_n int_{K_n} |f-g|^p dmu
    strict_norm_n: float
    local_metric: float
    local_metric_tail: float  # bound on the dropped terms of the local metric series
    p: float
    truncation: int
    label: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "p": self.p,
            "truncation": self.truncation,
            "per_region": [{"region": n, "value": value} for n, value in self.per_region],
            "lp_total": self.lp_total,
            "lp_power_sum": self.lp_power_sum,
            "strict_norm": self.strict_norm_n,
            "local_metric": self.local_metric,
            "local_metric_tail": self.local_metric_tail,
        }

    def rows(self) -> List[Tuple[str, Optional[int], float]]:
        """(row, region, value) rows: one per region, then the aggregates."""
        out: List[Tuple[str, Optional[int], float]] = [(str(n), n, value) for n, value in self.per_region]
        out.extend(
            [
                ("lp_total", None, self.lp_total),
                ("lp_power_sum", None, self.lp_power_sum),
                ("strict_norm", None, self.strict_norm_n),
                ("local_metric", None, self.local_metric),
                ("local_metric_tail", None, self.local_metric_tail),
            ]
        )
        return out


@dataclass
class Summary:
    """Headline numbers of an upgrade run."""
    lp_total: float
    strict_norm: float
    local_metric: float
    ess_support_index: Optional[int]
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "lp_total": self.lp_total,
            "strict_norm": self.strict_norm,
            "local_metric": self.local_metric,
            "ess_support_index": "unbounded" if self.ess_support_index is None else self.ess_support_index,
        }
        data.update(self.extra)
        return data


__all__ = ["ErrorReport", "Summary"]
