from typing import Any, Dict, Optional, Union

from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, MlpLearner, PolynomialLearner
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Region
from architope.services.errors import ValidationError

from .extension import BaseModel, extend_by_zero
from .mlp import MlpModel, fit_mlp, gradient_check, init_mlp
from .polynomial import PolynomialModel, fit_polynomial, multi_indices, weighted_residual, zero_model

Learner = Union[PolynomialLearner, MlpLearner]
Model = Union[PolynomialModel, MlpModel]


def fit_model(
    learner: Learner,
    target: FunctionHandle,
    region: Region,
    measure: MeasureSpec,
    config: FitConfig,
    quad: Optional[QuadratureScheme] = None,
) -> Model:
    """Dispatch to the fitter of the learner's model class."""
    if isinstance(learner, PolynomialLearner):
        return fit_polynomial(target, region, measure, learner.degree, config, learner.basis, quad)
    widths = learner.widths(region.dimension, target.output_dimension)
    return fit_mlp(target, region, measure, widths, config, learner.activation, quad)


def model_from_dict(data: Dict[str, Any]) -> Model:
    kind = data.get("kind")
    if kind == "polynomial":
        return PolynomialModel.from_dict(data)
    if kind == "mlp":
        return MlpModel.from_dict(data)
    raise ValidationError(f"Unknown model kind '{kind}'.")


__all__ = [
    "BaseModel",
    "Learner",
    "Model",
    "PolynomialModel",
    "MlpModel",
    "extend_by_zero",
    "fit_mlp",
    "fit_model",
    "fit_polynomial",
    "gradient_check",
    "init_mlp",
    "model_from_dict",
    "multi_indices",
    "weighted_residual",
    "zero_model",
]
