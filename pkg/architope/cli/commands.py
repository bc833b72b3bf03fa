"""
Subcommand handlers: each reads an ExperimentConfig, runs one experiment and
writes its report files into the output directory.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import pydantic

from architope.adapters import json_store, report_writer
from architope.models.experiment import (
    ExperimentConfig,
    FilePartitionConfig,
    RegionListPartitionConfig,
    ShellPartitionConfig,
)
from architope.models.function import FunctionHandle
from architope.models.measure import TENSOR_MIDPOINT, MeasureSpec, QuadratureScheme
from architope.models.partition import Box, Partition, Region
from architope.models.report import Summary
from architope.services.config import (
    CACHE_ENABLED,
    DEFAULT_MC_SAMPLES,
    DEFAULT_REFINEMENT,
    MASS_TOL,
    SUPPORT_TOL,
)
from architope.services.errors import ValidationError
from architope.services.measure import default_quadrature, parse_density
from architope.services.metrics import (
    build_family,
    direct_sum_norm,
    error_report,
    ess_support_index,
    strict_convergence_diagnostic,
)
from architope.services.partition import make_shell_partition, validate_partition
from architope.services.targets import analytic_tail, parse_target
from architope.services.upgrade import gap_demo, upgrade
from architope.utils.helper_functions import file_digest, parse_call, payload_key

logger = logging.getLogger(__name__)

PARTITION_FILE = "partition.json"
PARTITION_CHECK_FILE = "partition_check.json"
ARCHITOPE_FILE = "architope.json"
ERROR_REPORT_CSV = "error_report.csv"
SUMMARY_FILE = "summary.json"
GAP_TABLE_CSV = "gap_table.csv"
DIAGNOSTIC_FILE = "diagnostic.json"
METRICS_FILE = "metrics.json"


@dataclass
class Experiment:
    """A validated config with everything resolved."""
    config: ExperimentConfig
    config_hash: str
    base_dir: Path
    output_dir: Path
    partition: Partition
    measure: MeasureSpec
    quad: QuadratureScheme

    @property
    def count(self) -> int:
        return len(self.partition) if self.config.regions is None else self.config.regions

    def target(self) -> FunctionHandle:
        return parse_target(self.config.target, self.partition, self.base_dir)

    def resolve(self, path: str) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.base_dir / candidate


# -------------------------
# Config loading
# -------------------------

def _field_errors(exc: pydantic.ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error["loc"]) or "<root>"
        parts.append(f"{location}: {error['msg']}")
    return "; ".join(parts)


def load_config(path: Path, out: Optional[str] = None, seed: Optional[int] = None) -> ExperimentConfig:
    try:
        data = json_store.read_json(path)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"Cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"Config {path} must hold a JSON object.")
    if out is not None:
        data["output_dir"] = out
    if seed is not None:
        data["seed"] = seed
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ValidationError(f"Invalid config {path}: {_field_errors(exc)}") from exc


def _box(data: Any) -> Box:
    try:
        return Box(tuple(data.lo), tuple(data.hi))
    except ValueError as exc:
        raise ValidationError(f"Invalid box: {exc}") from exc


def build_partition(config: ExperimentConfig, base_dir: Path) -> Partition:
    spec = config.partition
    if isinstance(spec, ShellPartitionConfig):
        return make_shell_partition(spec.dimension, spec.count, spec.width)
    try:
        if isinstance(spec, RegionListPartitionConfig):
            regions = tuple(
                Region(
                    outer=_box(item.outer),
                    index=n,
                    inner=_box(item.inner) if item.inner else None,
                )
                for n, item in enumerate(spec.regions, start=1)
            )
            return Partition(regions=regions, dimension=spec.dimension)
        if isinstance(spec, FilePartitionConfig):
            path = Path(spec.path)
            return json_store.load_partition(path if path.is_absolute() else base_dir / path)
    except (OSError, ValueError, KeyError) as exc:
        raise ValidationError(f"Invalid partition: {exc}") from exc
    raise ValidationError(f"Unsupported partition kind '{spec.kind}'.")


def build_quadrature(config: ExperimentConfig, dimension: int) -> QuadratureScheme:
    spec = config.quadrature
    if spec.kind is None:
        return default_quadrature(dimension, spec.refinement, seed=config.seed)
    refinement = spec.refinement or (DEFAULT_REFINEMENT if spec.kind == TENSOR_MIDPOINT else DEFAULT_MC_SAMPLES)
    try:
        return QuadratureScheme(kind=spec.kind, refinement=refinement, seed=config.seed)
    except ValueError as exc:
        raise ValidationError(f"quadrature: {exc}") from exc


def referenced_files(config: ExperimentConfig, base_dir: Path) -> Dict[str, Optional[str]]:
    """Content digests of the data files a config points at, keyed by config field."""
    paths: Dict[str, str] = {}
    try:
        name, args = parse_call(config.target)
    except ValueError:
        name, args = "", []
    if name == "csv" and len(args) == 1:
        paths["target"] = args[0]
    if config.measure.table:
        paths["measure.table"] = config.measure.table
    if isinstance(config.partition, FilePartitionConfig):
        paths["partition"] = config.partition.path
    if config.metrics is not None and config.metrics.model:
        paths["metrics.model"] = config.metrics.model
    digests = {}
    for field, value in paths.items():
        candidate = Path(value)
        digests[field] = file_digest(candidate if candidate.is_absolute() else base_dir / candidate)
    return digests


def prepare(path: Path, out: Optional[str] = None, seed: Optional[int] = None) -> Experiment:
    """Validate a config and resolve partition, measure and quadrature before any computation."""
    config = load_config(path, out, seed)
    base_dir = path.resolve().parent
    partition = build_partition(config, base_dir)
    if config.regions is not None and config.regions > len(partition):
        raise ValidationError(f"regions: {config.regions} exceeds the {len(partition)} regions of the partition")
    table = str(base_dir / config.measure.table) if config.measure.table else None
    measure = parse_density(config.measure.density, partition.dimension, table)
    experiment = Experiment(
        config=config,
        config_hash=payload_key({"config": config.hashed_payload(), "files": referenced_files(config, base_dir)}),
        base_dir=base_dir,
        output_dir=Path(config.output_dir),
        partition=partition,
        measure=measure,
        quad=build_quadrature(config, partition.dimension),
    )
    logger.info("Loaded config %s (hash %s)", path, experiment.config_hash[:12])
    return experiment


# -------------------------
# Subcommands
# -------------------------

def run_partition(experiment: Experiment) -> Dict[str, Any]:
    """Write the partition and its validation; invalid partitions exit as validation errors."""
    json_store.save_partition(experiment.output_dir / PARTITION_FILE, experiment.partition)
    check = validate_partition(experiment.partition, experiment.measure, experiment.quad, MASS_TOL)
    report_writer.write_report_json(
        experiment.output_dir / PARTITION_CHECK_FILE, check.to_dict(), experiment.config_hash
    )
    if not check.ok:
        raise ValidationError("Partition is invalid: " + " ".join(check.violations))
    return check.to_dict()


def run_upgrade(experiment: Experiment) -> Dict[str, Any]:
    config = experiment.config
    if config.learner is None:
        raise ValidationError("learner: required for upgrade")
    target = experiment.target()
    result = upgrade(
        target,
        config.learner.build(),
        experiment.partition,
        experiment.measure,
        experiment.count,
        config.fit.build(config.p, config.seed),
        quad=experiment.quad,
        cache_key=experiment.config_hash if CACHE_ENABLED else None,
    )
    out = experiment.output_dir
    json_store.save_architope(out / ARCHITOPE_FILE, result.architope)
    report_writer.write_error_report(out / ERROR_REPORT_CSV, result.report, experiment.config_hash)

    support = ess_support_index(result.architope.as_handle(), experiment.partition, experiment.measure, experiment.quad, SUPPORT_TOL)
    covered = experiment.partition.bounding_box(experiment.count)
    summary = Summary(
        lp_total=result.report.lp_total,
        strict_norm=result.report.strict_norm_n,
        local_metric=result.report.local_metric,
        ess_support_index=support,
        extra={
            "p": config.p,
            "regions": experiment.count,
            "target": config.target,
            "target_tail": analytic_tail(config.target, experiment.measure.label, config.p, covered),
            "fits": [
                {"region": term.index, **term.model.fit_report.to_dict()}
                for term in result.architope.terms
                if term.model.fit_report is not None
            ],
        },
    )
    payload = summary.to_dict()
    report_writer.write_report_json(out / SUMMARY_FILE, payload, experiment.config_hash)
    return payload


def run_gap_demo(experiment: Experiment) -> List[Dict[str, Any]]:
    config = experiment.config
    rows = gap_demo(experiment.partition, experiment.measure, config.p, config.degrees, experiment.quad)
    report_writer.write_gap_table(experiment.output_dir / GAP_TABLE_CSV, rows, experiment.config_hash)
    return [row.to_dict() for row in rows]


def _load_sequence(experiment: Experiment, directory: Path) -> List[FunctionHandle]:
    files = json_store.function_files(directory)
    if not files:
        raise ValidationError(f"diagnostic.models_dir: no *.json models in {directory}")
    sequence = []
    for path in files:
        try:
            sequence.append(json_store.load_function_file(path).as_handle(path.stem))
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"Cannot load model {path}: {exc}") from exc
    return sequence


def run_diagnostic(experiment: Experiment) -> Dict[str, Any]:
    spec = experiment.config.diagnostic
    if spec is None:
        raise ValidationError("diagnostic: required for diagnose")
    if spec.family is not None:
        sequence, target = build_family(spec.family, experiment.partition, spec.length)
        source = spec.family
    else:
        sequence = _load_sequence(experiment, experiment.resolve(spec.models_dir))
        target = experiment.target()
        source = spec.models_dir

    result = strict_convergence_diagnostic(
        sequence,
        target,
        experiment.partition,
        experiment.measure,
        experiment.config.p,
        spec.tol,
        experiment.quad,
        contraction=spec.contraction,
    )
    payload = {"family": source, **result.to_dict()}
    report_writer.write_report_json(experiment.output_dir / DIAGNOSTIC_FILE, payload, experiment.config_hash)
    return payload


def run_metrics(experiment: Experiment) -> Dict[str, Any]:
    spec = experiment.config.metrics
    if spec is None:
        raise ValidationError("metrics: required for metrics")
    target = experiment.target()
    if spec.model is not None:
        try:
            other = json_store.load_function_file(experiment.resolve(spec.model)).as_handle(Path(spec.model).stem)
        except (OSError, KeyError, ValueError) as exc:
            raise ValidationError(f"metrics.model: {exc}") from exc
    else:
        other = parse_target(spec.other, experiment.partition, experiment.base_dir)
    if other.dimension != experiment.partition.dimension:
        raise ValidationError(
            f"metrics: {other.label} takes {other.dimension}-dimensional inputs, "
            f"the partition is {experiment.partition.dimension}-dimensional"
        )
    if other.output_dimension != target.output_dimension:
        raise ValidationError(
            f"metrics: {other.label} has {other.output_dimension} outputs, "
            f"the target has {target.output_dimension}"
        )

    p = experiment.config.p
    report = error_report(other, target, experiment.partition, experiment.measure, p, experiment.count, experiment.quad)
    norms = [value for _, value in report.per_region]
    payload = {
        **report.to_dict(),
        "q": None if math.isinf(spec.q) else spec.q,
        "direct_sum_norm": direct_sum_norm(norms, spec.q),
        "support_index": {
            "target": _support(target, experiment),
            "other": _support(other, experiment),
        },
    }
    report_writer.write_error_report(experiment.output_dir / ERROR_REPORT_CSV, report, experiment.config_hash)
    report_writer.write_report_json(experiment.output_dir / METRICS_FILE, payload, experiment.config_hash)
    return payload


def _support(f: FunctionHandle, experiment: Experiment) -> Any:
    index = ess_support_index(f, experiment.partition, experiment.measure, experiment.quad, SUPPORT_TOL)
    return "unbounded" if index is None else index


COMMANDS: Dict[str, Callable[[Experiment], Any]] = {
    "partition": run_partition,
    "upgrade": run_upgrade,
    "gap-demo": run_gap_demo,
    "diagnose": run_diagnostic,
    "metrics": run_metrics,
}

__all__ = [
    "COMMANDS",
    "Experiment",
    "load_config",
    "build_partition",
    "build_quadrature",
    "referenced_files",
    "prepare",
    "run_partition",
    "run_upgrade",
    "run_gap_demo",
    "run_diagnostic",
    "run_metrics",
]
