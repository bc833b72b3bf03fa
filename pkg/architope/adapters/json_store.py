"""
JSON persistence for partitions, models and architopes.

Everything is written with sorted keys and two-space indentation, so equal
objects always produce equal bytes.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, List, Union

import orjson

from architope.models.architope import Architope
from architope.models.partition import Partition

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def dumps(payload: Any) -> bytes:
    return orjson.dumps(
        payload,
        option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE,
    )


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(payload))
    logger.info("Wrote %s", path)
    return path


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        return orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def save_partition(path: PathLike, partition: Partition) -> Path:
    return write_json(path, partition.to_dict())


def load_partition(path: PathLike) -> Partition:
    return Partition.from_dict(read_json(path))


def save_architope(path: PathLike, architope: Architope) -> Path:
    return write_json(path, architope.to_dict())


def load_architope(path: PathLike) -> Architope:
    return Architope.from_dict(read_json(path))


def load_function_file(path: PathLike) -> Any:
    """A serialized model or architope; architopes are told apart by their 'terms' key."""
    from architope.services.learners import model_from_dict

    data = read_json(path)
    if "terms" in data:
        return Architope.from_dict(data)
    return model_from_dict(data)


def function_files(directory: PathLike) -> List[Path]:
    """The *.json files of a directory in name order."""
    return sorted(Path(directory).glob("*.json"))


__all__ = [
    "dumps",
    "write_json",
    "read_json",
    "save_partition",
    "load_partition",
    "save_architope",
    "load_architope",
    "load_function_file",
    "function_files",
]
