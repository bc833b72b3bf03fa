from .gap_demo import GAP_REGIONS, GapRow, gap_demo, global_fit
from .upgrade_service import (
    UpgradeResult,
    as_function,
    containment_architope,
    evaluate,
    factor_scales,
    rescale,
    scale_models,
    upgrade,
)

__all__ = [
    "GAP_REGIONS",
    "GapRow",
    "gap_demo",
    "global_fit",
    "UpgradeResult",
    "as_function",
    "containment_architope",
    "evaluate",
    "factor_scales",
    "rescale",
    "scale_models",
    "upgrade",
]
