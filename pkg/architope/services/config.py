"""
Process-wide settings for the architope services.

Values come from the environment (a local `.env` file is honoured) so that
experiment runs can be tuned without touching experiment configs.
"""

from __future__ import annotations

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


# Cache directory root (fitted region models)
CACHE_ROOT = Path(os.getenv("ARCHITOPE_CACHE_DIR", "./.cache")).resolve()
CACHE_ENABLED = _env_flag("ARCHITOPE_CACHE_ENABLED", "1")

# Tolerances
MASS_TOL = float(os.getenv("ARCHITOPE_MASS_TOL", "1e-10"))
SUPPORT_TOL = float(os.getenv("ARCHITOPE_SUPPORT_TOL", "1e-9"))

# Per-region fits are independent; 1 keeps runs single-threaded
FIT_WORKERS = max(1, int(os.getenv("ARCHITOPE_FIT_WORKERS", "1")))

# Quadrature defaults when a config leaves them out
DEFAULT_REFINEMENT = int(os.getenv("ARCHITOPE_DEFAULT_REFINEMENT", "512"))
DEFAULT_MC_SAMPLES = int(os.getenv("ARCHITOPE_MC_SAMPLES", "200000"))
TENSOR_MAX_DIMENSION = 3

LOG_LEVEL = os.getenv("ARCHITOPE_LOG_LEVEL", "INFO").upper()

__all__ = [
    "CACHE_ROOT",
    "CACHE_ENABLED",
    "MASS_TOL",
    "SUPPORT_TOL",
    "FIT_WORKERS",
    "DEFAULT_REFINEMENT",
    "DEFAULT_MC_SAMPLES",
    "TENSOR_MAX_DIMENSION",
    "LOG_LEVEL",
]
