"""
Helper functions for the architope services.
"""

import hashlib
import logging
import re
from pathlib import Path
from typing import Any, Iterable, List, Optional, Tuple, Union

import orjson
from rapidfuzz import process

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "v1"  # bump when report layouts change

_CALL_PATTERN = re.compile(r"^\s*([A-Za-z][\w\-]*)\s*(?:\((.*)\))?\s*$")


# -------------------------
# Hashing
# -------------------------

def canonical_json(payload: Any) -> bytes:
    return orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY)


def payload_key(payload: Any) -> str:
    """Stable SHA-1 of a JSON-serialisable payload, versioned with the report schema."""
    wrapped = {"payload": payload, "v": SCHEMA_VERSION}
    return hashlib.sha1(canonical_json(wrapped)).hexdigest()


def file_digest(path: Union[str, Path]) -> Optional[str]:
    """SHA-256 of a file's bytes, or None when it cannot be read."""
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError:
        return None


# -------------------------
# Name parsing (densities, targets, families)
# -------------------------

def parse_call(spec: str) -> Tuple[str, List[str]]:
    """Split "gaussian(0.5)" into ("gaussian", ["0.5"]); bare names get no arguments."""
    match = _CALL_PATTERN.match(spec or "")
    if not match:
        raise ValueError(f"Cannot parse '{spec}' as name(arguments).")
    name, args = match.group(1).lower(), match.group(2)
    arguments = [item.strip() for item in args.split(",")] if args and args.strip() else []
    return name, arguments


def suggest_name(name: str, choices: Iterable[str], cutoff: float = 60.0) -> Optional[str]:
    options = list(choices)
    if not options:
        return None
    best = process.extractOne(name, options, score_cutoff=cutoff)
    return best[0] if best else None


def unknown_name_message(kind: str, name: str, choices: Iterable[str]) -> str:
    options = sorted(choices)
    hint = suggest_name(name, options)
    message = f"Unknown {kind} '{name}'. Known: {', '.join(options)}."
    if hint:
        message += f" Did you mean '{hint}'?"
    return message


def trailing_half(count: int) -> int:
    """Size of the trailing half of a sequence of `count` items (rounded up)."""
    return (count + 1) // 2


__all__ = [
    "canonical_json",
    "payload_key",
    "file_digest",
    "parse_call",
    "suggest_name",
    "unknown_name_message",
    "trailing_half",
]
