"""
Upgrade Configuration
"""

from architope.services.config import FIT_WORKERS

# Scale given to every fitted term; the fitted models absorb the rest
DEFAULT_TERM_SCALE = 1.0

# Default tail (beta_0, f_0) = (0, zero model)
DEFAULT_TAIL_SCALE = 0.0

# Threads used for independent per-region fits
MAX_FIT_WORKERS = FIT_WORKERS

# Labels of the gap table rows
GLOBAL_POLY_KIND = "global-poly"
ARCHITOPE_KIND = "architope"

__all__ = [
    "DEFAULT_TERM_SCALE",
    "DEFAULT_TAIL_SCALE",
    "MAX_FIT_WORKERS",
    "GLOBAL_POLY_KIND",
    "ARCHITOPE_KIND",
]
