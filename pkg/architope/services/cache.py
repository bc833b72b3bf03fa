"""
On-disk cache of fitted region models.

Fits are deterministic, so a cached model is identical to a fresh one. The
cache is best-effort: any failure is logged and the caller refits.
"""

from __future__ import annotations

import atexit
import logging
import threading
import time
from typing import Any, Dict, Optional

import diskcache

from architope.services.config import CACHE_ENABLED, CACHE_ROOT
from architope.utils.helper_functions import payload_key

logger = logging.getLogger(__name__)

_cache_instance: Optional[diskcache.Cache] = None
_cache_lock = threading.Lock()


def _cache_path() -> str:
    path = CACHE_ROOT / "fits"
    path.mkdir(parents=True, exist_ok=True)
    return str(path)


def _get_cache() -> diskcache.Cache:
    """Open the cache on first use, retrying while another process holds the lock."""
    global _cache_instance
    if _cache_instance is not None:
        return _cache_instance

    # fit workers share one instance
    with _cache_lock:
        if _cache_instance is not None:
            return _cache_instance
        max_retries = 3
        attempt = 0
        while True:
            attempt += 1
            try:
                _cache_instance = diskcache.Cache(_cache_path(), size_limit=2**30)
                atexit.register(_cleanup_cache)
                return _cache_instance
            except (OSError, PermissionError) as exc:
                if attempt >= max_retries:
                    raise
                logger.warning("Cache initialization failed (attempt %d/%d): %s. Retrying...", attempt, max_retries, exc)
                time.sleep(0.5 * attempt)


def _cleanup_cache() -> None:
    global _cache_instance
    if _cache_instance is not None:
        try:
            _cache_instance.close()
        except Exception as exc:
            logger.debug("Error closing cache: %s", exc)
        _cache_instance = None


def fit_key(config_hash: str, region_index: int, learner: Dict[str, Any], fit: Dict[str, Any]) -> str:
    return payload_key({"config": config_hash, "region": region_index, "learner": learner, "fit": fit})


def get_model(key: str) -> Optional[Dict[str, Any]]:
    if not CACHE_ENABLED:
        return None
    try:
        return _get_cache().get(f"fit:{key}")
    except Exception as exc:
        logger.warning("Error reading cached fit %s: %s", key, exc)
        return None


def set_model(key: str, model: Dict[str, Any]) -> None:
    if not CACHE_ENABLED:
        return
    try:
        _get_cache().set(f"fit:{key}", model)
    except Exception as exc:
        logger.warning("Error caching fit %s: %s", key, exc)


__all__ = ["fit_key", "get_model", "set_model"]
