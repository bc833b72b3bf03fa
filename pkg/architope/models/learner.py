"""
Learner Data Models

Fit settings and the residual report attached to fitted models.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, ClassVar, Dict, List, Literal, Optional, Tuple


@dataclass(frozen=True)
class FitConfig:
    p: float = 2.0  # exponent the resulting architope is measured in
    node_budget: int = 4096  # quadrature nodes per region used for fitting
    ridge: float = 0.0  # lambda of the polynomial least-squares objective
    epochs: int = 2000
    learning_rate: float = 0.01
    batch_size: Optional[int] = None  # None: full batch
    optimizer: Literal["adam", "sgd"] = "adam"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"p must be at least 1, got {self.p}.")
        if self.node_budget < 2:
            raise ValueError("node_budget must be at least 2.")
        if self.ridge < 0:
            raise ValueError("ridge must be non-negative.")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative.")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive.")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be positive.")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"Unknown optimizer '{self.optimizer}'.")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FitReport:
    residual: float  # sqrt of the density-weighted squared residual over the fit nodes
    nodes: int
    rank: int = 0
    terms: int = 0
    rank_deficient: bool = False
    condition: float = 0.0
    loss_trace: Tuple[float, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["loss_trace"] = list(self.loss_trace)
        return data


@dataclass(frozen=True)
class PolynomialLearner:
    degree: int
    basis: Literal["chebyshev", "monomial"] = "chebyshev"

    kind: ClassVar[str] = "polynomial"

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError(f"Polynomial degree must be non-negative, got {self.degree}.")

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "degree": self.degree, "basis": self.basis}


@dataclass(frozen=True)
class MlpLearner:
    hidden: Tuple[int, ...]  # hidden widths w_1..w_J; input/output widths come from the target
    activation: Literal["tanh", "relu"] = "tanh"

    kind: ClassVar[str] = "mlp"

    def __post_init__(self) -> None:
        object.__setattr__(self, "hidden", tuple(int(w) for w in self.hidden))
        if any(w < 1 for w in self.hidden):
            raise ValueError(f"Hidden widths must be positive, got {self.hidden}.")
        if self.activation not in ("tanh", "relu"):
            raise ValueError(f"Unknown activation '{self.activation}'.")

    def widths(self, dimension: int, output_dimension: int) -> List[int]:
        return [dimension, *self.hidden, output_dimension]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "hidden": list(self.hidden), "activation": self.activation}


__all__ = ["FitConfig", "FitReport", "PolynomialLearner", "MlpLearner"]
