"""
CSV and JSON report files.

Every CSV starts with a single `# generated_at=<timestamp>` line; the rest of
each file depends only on the experiment config.
"""

from __future__ import annotations

import csv
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from architope.models.report import ErrorReport

from .json_store import write_json

logger = logging.getLogger(__name__)

ERROR_REPORT_COLUMNS = ["config_hash", "row", "region", "value"]
GAP_TABLE_COLUMNS = ["config_hash", "kind", "degree", "strict_error", "off_support_mass"]


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_csv(path: Union[str, Path], columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        handle.write(f"# generated_at={_timestamp()}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if value is None else value for value in row])
    logger.info("Wrote %s", path)
    return path


def read_csv_body(path: Union[str, Path]) -> List[List[str]]:
    """Rows of a report CSV without the timestamp line (header included)."""
    with Path(path).open(newline="", encoding="utf-8") as handle:
        lines = [line for line in handle if not line.startswith("# generated_at=")]
    return list(csv.reader(lines))


def write_error_report(path: Union[str, Path], report: ErrorReport, config_hash: str) -> Path:
    rows = [(config_hash, row, region, value) for row, region, value in report.rows()]
    return write_csv(path, ERROR_REPORT_COLUMNS, rows)


def write_gap_table(path: Union[str, Path], rows: Iterable[Any], config_hash: str) -> Path:
    body = [(config_hash, r.kind, r.degree, r.strict_error, r.off_support_mass) for r in rows]
    return write_csv(path, GAP_TABLE_COLUMNS, body)


def write_report_json(path: Union[str, Path], payload: Any, config_hash: str) -> Path:
    return write_json(path, {"config_hash": config_hash, **payload})


__all__ = [
    "ERROR_REPORT_COLUMNS",
    "GAP_TABLE_COLUMNS",
    "write_csv",
    "read_csv_body",
    "write_error_report",
    "write_gap_table",
    "write_report_json",
]
