"""
Feedforward network base class.

f(x) = W_J+1 (sigma(W_J ... sigma(W_1 x + b_1) ... + b_J)) + b_J+1, trained by
full-batch or minibatch gradient descent on the density-weighted squared error
over a region's quadrature nodes. Everything is seeded from `FitConfig.seed`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, FitReport
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Region, as_points
from architope.services.errors import TrainingError, ValidationError
from architope.services.measure import restrict_to_region, weighted_nodes

from .config import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPS,
    DIVERGENCE_LOSS,
    GRADIENT_CHECK_FLOOR,
    GRADIENT_CHECK_STEPS,
    LOG_EVERY,
)
from .polynomial import fit_quadrature

logger = logging.getLogger(__name__)

Activation = Literal["tanh", "relu"]

_ACTIVATIONS: Dict[str, Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "relu": (lambda z: np.maximum(z, 0.0), lambda z: np.where(z > 0, 1.0, 0.0)),
}


@dataclass(frozen=True, eq=False)
class MlpModel:
    widths: Tuple[int, ...]  # [d, w_1, ..., w_J, D]
    activation: Activation
    weights: Tuple[np.ndarray, ...]  # W_j has shape (widths[j + 1], widths[j])
    biases: Tuple[np.ndarray, ...]
    fit_report: Optional[FitReport] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        object.__setattr__(self, "weights", tuple(np.asarray(w, dtype=float) for w in self.weights))
        object.__setattr__(self, "biases", tuple(np.asarray(b, dtype=float).reshape(-1) for b in self.biases))
        if len(self.widths) < 2 or any(w < 1 for w in self.widths):
            raise ValueError(f"Invalid layer widths {self.widths}.")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"Unknown activation '{self.activation}'.")
        layers = len(self.widths) - 1
        if len(self.weights) != layers or len(self.biases) != layers:
            raise ValueError(f"Expected {layers} weight matrices and bias vectors.")
        for j, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.widths[j + 1], self.widths[j]) or b.shape != (self.widths[j + 1],):
                raise ValueError(f"Layer {j + 1} parameters do not match widths {self.widths}.")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"Layer {j + 1} has non-finite parameters.")

    @property
    def dimension(self) -> int:
        return self.widths[0]

    @property
    def output_dimension(self) -> int:
        return self.widths[-1]

    def forward(self, points: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray], List[np.ndarray]]:
        """Output plus the pre-activations and activations backprop needs."""
        sigma, _ = _ACTIVATIONS[self.activation]
        activations = [as_points(points, self.dimension)]
        pre_activations: List[np.ndarray] = []
        last = len(self.weights) - 1
        for j, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = activations[-1] @ w.T + b
            pre_activations.append(z)
            activations.append(z if j == last else sigma(z))
        return activations[-1], pre_activations, activations

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.forward(points)[0]

    def scaled(self, factor: float) -> "MlpModel":
        """The output layer is linear, so scaling it scales the whole network."""
        weights = self.weights[:-1] + (factor * self.weights[-1],)
        biases = self.biases[:-1] + (factor * self.biases[-1],)
        return MlpModel(self.widths, self.activation, weights, biases)

    def parameters(self) -> List[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def with_parameters(self, parameters: Sequence[np.ndarray], report: Optional[FitReport] = None) -> "MlpModel":
        return MlpModel(
            self.widths,
            self.activation,
            tuple(parameters[0::2]),
            tuple(parameters[1::2]),
            fit_report=report,
        )

    def as_handle(self, label: str = "") -> FunctionHandle:
        return FunctionHandle(
            evaluate=self.evaluate,
            output_dimension=self.output_dimension,
            label=label or f"mlp{list(self.widths)}",
            dimension=self.dimension,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "mlp",
            "widths": list(self.widths),
            "activation": self.activation,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MlpModel":
        return cls(
            widths=tuple(data["widths"]),
            activation=data["activation"],
            weights=tuple(np.asarray(w, dtype=float) for w in data["weights"]),
            biases=tuple(np.asarray(b, dtype=float) for b in data["biases"]),
        )


def init_mlp(widths: Sequence[int], activation: Activation, seed: int) -> MlpModel:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpModel(tuple(widths), activation, tuple(weights), tuple(biases))


def backward(
    model: MlpModel,
    pre_activations: List[np.ndarray],
    activations: List[np.ndarray],
    output_gradient: np.ndarray,
) -> List[np.ndarray]:
    """Parameter gradients in `parameters()` order given dLoss/dOutput."""
    _, sigma_prime = _ACTIVATIONS[model.activation]
    grads: List[np.ndarray] = [np.empty(0)] * (2 * len(model.weights))
    delta = output_gradient
    for j in range(len(model.weights) - 1, -1, -1):
        grads[2 * j] = delta.T @ activations[j]
        grads[2 * j + 1] = delta.sum(axis=0)
        if j > 0:
            delta = (delta @ model.weights[j]) * sigma_prime(pre_activations[j - 1])
    return grads


def _weighted_loss(model: MlpModel, nodes: np.ndarray, values: np.ndarray, weights: np.ndarray):
    output, pre, acts = model.forward(nodes)
    residual = output - values
    total = float(np.sum(weights))
    loss = float(np.sum(weights[:, None] * residual**2)) / total
    return loss, residual, pre, acts, total


class _Adam:
    def __init__(self, parameters: List[np.ndarray], learning_rate: float) -> None:
        self.learning_rate = learning_rate
        self.m = [np.zeros_like(p) for p in parameters]
        self.v = [np.zeros_like(p) for p in parameters]
        self.t = 0

    def step(self, parameters: List[np.ndarray], grads: List[np.ndarray]) -> List[np.ndarray]:
        self.t += 1
        updated = []
        for k, (param, grad) in enumerate(zip(parameters, grads)):
            self.m[k] = ADAM_BETA1 * self.m[k] + (1 - ADAM_BETA1) * grad
            self.v[k] = ADAM_BETA2 * self.v[k] + (1 - ADAM_BETA2) * grad**2
            m_hat = self.m[k] / (1 - ADAM_BETA1**self.t)
            v_hat = self.v[k] / (1 - ADAM_BETA2**self.t)
            updated.append(param - self.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS))
        return updated


class _Sgd:
    def __init__(self, learning_rate: float) -> None:
        self.learning_rate = learning_rate

    def step(self, parameters: List[np.ndarray], grads: List[np.ndarray]) -> List[np.ndarray]:
        return [param - self.learning_rate * grad for param, grad in zip(parameters, grads)]


def train(
    model: MlpModel,
    nodes: np.ndarray,
    values: np.ndarray,
    weights: np.ndarray,
    config: FitConfig,
) -> Tuple[MlpModel, List[float]]:
    """Minimise sum w ||model - values||^2 / sum w; returns the model and the per-epoch loss trace."""
    rng = np.random.default_rng(config.seed)
    optimizer = _Adam(model.parameters(), config.learning_rate) if config.optimizer == "adam" else _Sgd(config.learning_rate)
    parameters = model.parameters()
    count = nodes.shape[0]
    trace: List[float] = []

    for epoch in range(1, config.epochs + 1):
        if config.batch_size is None or config.batch_size >= count:
            batches = [np.arange(count)]
        else:
            order = rng.permutation(count)
            batches = [order[start:start + config.batch_size] for start in range(0, count, config.batch_size)]

        for batch in batches:
            current = model.with_parameters(parameters)
            _, residual, pre, acts, total = _weighted_loss(current, nodes[batch], values[batch], weights[batch])
            output_gradient = 2.0 * weights[batch][:, None] * residual / total
            parameters = optimizer.step(parameters, backward(current, pre, acts, output_gradient))

        loss = _weighted_loss(model.with_parameters(parameters), nodes, values, weights)[0]
        if not np.isfinite(loss) or loss > DIVERGENCE_LOSS:
            raise TrainingError(epoch, loss)
        trace.append(loss)
        if epoch % LOG_EVERY == 0:
            logger.debug("epoch %d: loss %.6e", epoch, loss)

    return model.with_parameters(parameters), trace


def fit_mlp(
    target: FunctionHandle,
    region: Region,
    measure: MeasureSpec,
    widths: Sequence[int],
    config: FitConfig,
    activation: Activation = "tanh",
    quad: Optional[QuadratureScheme] = None,
) -> MlpModel:
    widths = [int(w) for w in widths]
    if len(widths) < 2 or widths[0] != region.dimension or widths[-1] != target.output_dimension:
        raise ValidationError(
            f"Widths {widths} must start at the input dimension {region.dimension} "
            f"and end at the output dimension {target.output_dimension}."
        )
    cells = region.cells()
    quad = quad or fit_quadrature(len(cells), region.dimension, config.node_budget)
    nodes, weights = weighted_nodes(cells, restrict_to_region(measure, region), quad)
    if nodes.shape[0] == 0 or not np.sum(weights) > 0:
        raise ValidationError(f"No weighted fit nodes on K_{region.index}.")
    values = target(nodes)
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"Target {target.label} is not finite on the fit nodes.")

    initial = init_mlp(widths, activation, config.seed)
    model, trace = train(initial, nodes, values, weights, config)
    final = trace[-1] if trace else _weighted_loss(model, nodes, values, weights)[0]
    report = FitReport(
        residual=float(np.sqrt(final * np.sum(weights))),
        nodes=int(nodes.shape[0]),
        terms=sum(p.size for p in model.parameters()),
        loss_trace=tuple(trace),
    )
    logger.info(
        "Trained mlp%s on K_%d for %d epochs: residual %.3e",
        widths,
        region.index,
        config.epochs,
        report.residual,
    )
    return model.with_parameters(model.parameters(), report)


def gradient_check(
    model: MlpModel,
    x: np.ndarray,
    h: float,
    y: Optional[np.ndarray] = None,
) -> float:
    """
    Max relative deviation between backprop gradients of ||model(x) - y||^2
    and central finite differences with step h (y defaults to ones).

    Each entry is measured against its own magnitude; entries below
    GRADIENT_CHECK_FLOOR times the largest gradient use that floor instead.
    """
    if model.activation != "tanh":
        raise ValidationError("The gradient check needs a smooth (tanh) activation.")
    low, high = GRADIENT_CHECK_STEPS
    if not low <= h <= high:
        raise ValidationError(f"Step h must lie in [{low:g}, {high:g}], got {h:g}.")
    point = as_points(x, model.dimension)[:1]
    expected = np.ones((1, model.output_dimension)) if y is None else np.asarray(y, dtype=float).reshape(1, -1)

    def loss(candidate: MlpModel) -> float:
        return float(np.sum((candidate.evaluate(point) - expected) ** 2))

    output, pre, acts = model.forward(point)
    analytic = backward(model, pre, acts, 2.0 * (output - expected))

    parameters = [p.copy() for p in model.parameters()]
    numeric = []
    for k, param in enumerate(parameters):
        grad = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            original = param[idx]
            param[idx] = original + h
            plus = loss(model.with_parameters(parameters))
            param[idx] = original - h
            minus = loss(model.with_parameters(parameters))
            param[idx] = original
            grad[idx] = (plus - minus) / (2.0 * h)
        numeric.append(grad)

    a = np.concatenate([g.ravel() for g in analytic])
    n = np.concatenate([g.ravel() for g in numeric])
    scale = max(np.max(np.abs(a)), np.max(np.abs(n)), 1e-12)
    floor = GRADIENT_CHECK_FLOOR * scale
    relative = np.abs(a - n) / np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
    return float(np.max(relative))


__all__ = ["MlpModel", "init_mlp", "backward", "train", "fit_mlp", "gradient_check"]
