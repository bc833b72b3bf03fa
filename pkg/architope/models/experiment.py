"""
Experiment configuration models.

One JSON file fully determines a run; only the output directory and the
global seed can be overridden from the command line.
"""

from __future__ import annotations

import re
from typing import Annotated, Any, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .learner import FitConfig, MlpLearner, PolynomialLearner

_SHELLS = re.compile(r"^\s*shells\s*\(([^)]*)\)\s*$", re.IGNORECASE)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MeasureConfig(_Strict):
    density: str = Field("lebesgue", description="lebesgue, gaussian(sigma), exp-decay(rate) or table.")
    table: Optional[str] = Field(None, description="CSV with columns x_1..x_d,density when density is 'table'.")


class ShellPartitionConfig(_Strict):
    kind: Literal["shells"] = "shells"
    dimension: int = Field(..., ge=1)
    count: int = Field(..., ge=1, description="Number of regions N.")
    width: float = Field(..., gt=0, description="Shell width; K_n spans half-widths (n-1)*width..n*width.")


class BoxConfig(_Strict):
    lo: List[float]
    hi: List[float]


class RegionConfig(_Strict):
    outer: BoxConfig
    inner: Optional[BoxConfig] = None


class RegionListPartitionConfig(_Strict):
    kind: Literal["regions"] = "regions"
    dimension: int = Field(..., ge=1)
    regions: List[RegionConfig] = Field(..., min_length=1)


class FilePartitionConfig(_Strict):
    kind: Literal["file"] = "file"
    path: str


PartitionConfig = Annotated[
    Union[ShellPartitionConfig, RegionListPartitionConfig, FilePartitionConfig],
    Field(discriminator="kind"),
]


class PolynomialLearnerConfig(_Strict):
    kind: Literal["polynomial"] = "polynomial"
    degree: int = Field(..., ge=0)
    basis: Literal["chebyshev", "monomial"] = "chebyshev"

    def build(self) -> PolynomialLearner:
        return PolynomialLearner(degree=self.degree, basis=self.basis)


class MlpLearnerConfig(_Strict):
    kind: Literal["mlp"] = "mlp"
    hidden: List[Annotated[int, Field(ge=1)]] = Field(..., min_length=1)
    activation: Literal["tanh", "relu"] = "tanh"

    def build(self) -> MlpLearner:
        return MlpLearner(hidden=tuple(self.hidden), activation=self.activation)


LearnerConfig = Annotated[Union[PolynomialLearnerConfig, MlpLearnerConfig], Field(discriminator="kind")]


class QuadratureConfig(_Strict):
    kind: Optional[Literal["tensor-midpoint", "monte-carlo"]] = Field(
        None, description="Defaults to tensor-midpoint up to three dimensions, monte-carlo beyond."
    )
    refinement: Optional[int] = Field(None, ge=1, description="Nodes per axis (tensor) or samples per box (MC).")


class FitSettings(_Strict):
    node_budget: int = Field(4096, ge=2)
    ridge: float = Field(0.0, ge=0)
    epochs: int = Field(2000, ge=0)
    learning_rate: float = Field(0.01, gt=0)
    batch_size: Optional[int] = Field(None, ge=1)
    optimizer: Literal["adam", "sgd"] = "adam"

    def build(self, p: float, seed: int) -> FitConfig:
        return FitConfig(p=p, seed=seed, **self.model_dump())


class DiagnosticConfig(_Strict):
    family: Optional[str] = Field(None, description="Built-in sequence family, e.g. leaking-to-K2.")
    models_dir: Optional[str] = Field(None, description="Directory of serialized models f_1..f_k in name order.")
    length: int = Field(10, ge=1)
    tol: float = Field(1e-9, gt=0)
    contraction: float = Field(0.5, gt=0, lt=1)

    @model_validator(mode="after")
    def _one_source(self) -> "DiagnosticConfig":
        if (self.family is None) == (self.models_dir is None):
            raise ValueError("set exactly one of 'family' and 'models_dir'")
        return self


class MetricsConfig(_Strict):
    other: Optional[str] = Field(None, description="Second named target to compare against.")
    model: Optional[str] = Field(None, description="Serialized model or architope JSON to compare against.")
    q: float = Field(float("inf"), ge=1, description="Exponent of the direct-sum norm of per-region norms.")

    @model_validator(mode="after")
    def _one_source(self) -> "MetricsConfig":
        if (self.other is None) == (self.model is None):
            raise ValueError("set exactly one of 'other' and 'model'")
        return self


class ExperimentConfig(_Strict):
    measure: MeasureConfig = Field(default_factory=MeasureConfig)
    partition: PartitionConfig
    target: str = Field("zero", description="Named target, e.g. exp-decay, indicator(K_1) or csv(path).")
    learner: Optional[LearnerConfig] = None
    p: float = Field(2.0, ge=1)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    fit: FitSettings = Field(default_factory=FitSettings)
    regions: Optional[int] = Field(None, ge=1, description="Regions to fit and measure; defaults to all.")
    degrees: List[Annotated[int, Field(ge=0)]] = Field(default_factory=lambda: list(range(16)))
    diagnostic: Optional[DiagnosticConfig] = None
    metrics: Optional[MetricsConfig] = None
    output_dir: str = "./reports"
    seed: int = Field(0, ge=0)

    @field_validator("partition", mode="before")
    @classmethod
    def _parse_shells(cls, value: Any) -> Any:
        """Accept the short form "shells(d, N, width)"."""
        if not isinstance(value, str):
            return value
        match = _SHELLS.match(value)
        if not match:
            raise ValueError(f"cannot parse partition '{value}'; expected shells(d, N, width)")
        parts = [item.strip() for item in match.group(1).split(",")]
        if len(parts) != 3:
            raise ValueError("shells(d, N, width) takes exactly three arguments")
        return {"kind": "shells", "dimension": parts[0], "count": parts[1], "width": parts[2]}

    @model_validator(mode="after")
    def _regions_in_range(self) -> "ExperimentConfig":
        if self.regions is not None and isinstance(self.partition, ShellPartitionConfig):
            if self.regions > self.partition.count:
                raise ValueError(f"regions={self.regions} exceeds the {self.partition.count} shells")
        return self

    def hashed_payload(self) -> dict:
        """Everything that determines the report bodies."""
        return self.model_dump(mode="json", exclude={"output_dir"})


__all__ = [
    "MeasureConfig",
    "ShellPartitionConfig",
    "RegionListPartitionConfig",
    "FilePartitionConfig",
    "PolynomialLearnerConfig",
    "MlpLearnerConfig",
    "QuadratureConfig",
    "FitSettings",
    "DiagnosticConfig",
    "MetricsConfig",
    "ExperimentConfig",
]
