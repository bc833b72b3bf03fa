"""
Polynomial base class: total-degree polynomials fitted by density-weighted
least squares on quadrature nodes.

Basis terms are ordered by total degree, so the basis of degree k is a prefix
of the basis of degree k + 1 and residuals are non-increasing in degree.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from math import comb
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev, polynomial

from architope.models.function import FunctionHandle
from architope.models.learner import FitConfig, FitReport
from architope.models.measure import MeasureSpec, QuadratureScheme
from architope.models.partition import Box, Region, as_points
from architope.services.errors import ValidationError
from architope.services.measure import restrict_to_region, weighted_nodes

logger = logging.getLogger(__name__)

Basis = Literal["chebyshev", "monomial"]


def multi_indices(dimension: int, degree: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of total degree <= degree, graded by total degree."""
    indices = [idx for idx in itertools.product(range(degree + 1), repeat=dimension) if sum(idx) <= degree]
    indices.sort(key=lambda idx: (sum(idx), tuple(-i for i in idx)))
    return indices


def design_matrix(points: np.ndarray, degree: int, basis: Basis, box: Box) -> np.ndarray:
    pts = as_points(points, box.dimension)
    if basis == "chebyshev":
        scaled = 2.0 * (pts - np.asarray(box.lo)) / box.sides - 1.0
        per_axis = [chebyshev.chebvander(scaled[:, k], degree) for k in range(box.dimension)]
    elif basis == "monomial":
        per_axis = [polynomial.polyvander(pts[:, k], degree) for k in range(box.dimension)]
    else:
        raise ValidationError(f"Unknown polynomial basis '{basis}'.")

    columns = []
    for idx in multi_indices(box.dimension, degree):
        column = np.ones(pts.shape[0])
        for axis, power in enumerate(idx):
            if power:
                column = column * per_axis[axis][:, power]
        columns.append(column)
    return np.column_stack(columns)


@dataclass(frozen=True, eq=False)
class PolynomialModel:
    dimension: int
    output_dimension: int
    degree: int
    basis: Basis
    coefficients: np.ndarray  # (output_dimension, number of basis terms)
    reference_box: Box
    fit_report: Optional[FitReport] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        coefficients = np.atleast_2d(np.asarray(self.coefficients, dtype=float))
        object.__setattr__(self, "coefficients", coefficients)
        expected = comb(self.dimension + self.degree, self.dimension)
        if coefficients.shape != (self.output_dimension, expected):
            raise ValueError(
                f"Expected coefficients of shape {(self.output_dimension, expected)}, got {coefficients.shape}."
            )
        if not np.all(np.isfinite(coefficients)):
            raise ValueError("Polynomial coefficients must be finite.")

    @property
    def terms(self) -> int:
        return self.coefficients.shape[1]

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = as_points(points, self.dimension)
        if pts.shape[0] == 0:
            return np.zeros((0, self.output_dimension))
        return design_matrix(pts, self.degree, self.basis, self.reference_box) @ self.coefficients.T

    def scaled(self, factor: float) -> "PolynomialModel":
        return replace(self, coefficients=factor * self.coefficients, fit_report=None)

    def as_handle(self, label: str = "") -> FunctionHandle:
        return FunctionHandle(
            evaluate=self.evaluate,
            output_dimension=self.output_dimension,
            label=label or f"poly(deg={self.degree})",
            dimension=self.dimension,
        )

    @classmethod
    def constant(cls, value: Sequence[float], box: Box, basis: Basis = "chebyshev") -> "PolynomialModel":
        """Degree-0 model; T_0 and x^0 are both the constant one."""
        vector = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(
            dimension=box.dimension,
            output_dimension=vector.size,
            degree=0,
            basis=basis,
            coefficients=vector.reshape(-1, 1),
            reference_box=box,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "polynomial",
            "dimension": self.dimension,
            "output_dimension": self.output_dimension,
            "degree": self.degree,
            "basis": self.basis,
            "coefficients": self.coefficients.tolist(),
            "reference_box": self.reference_box.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PolynomialModel":
        return cls(
            dimension=int(data["dimension"]),
            output_dimension=int(data["output_dimension"]),
            degree=int(data["degree"]),
            basis=data["basis"],
            coefficients=np.asarray(data["coefficients"], dtype=float),
            reference_box=Box.from_dict(data["reference_box"]),
        )


def zero_model(box: Box, output_dimension: int = 1) -> PolynomialModel:
    return PolynomialModel.constant(np.zeros(output_dimension), box)


def fit_quadrature(cells: int, dimension: int, node_budget: int) -> QuadratureScheme:
    """Tensor rule spreading roughly `node_budget` nodes over `cells` boxes."""
    per_cell = max(node_budget // max(cells, 1), 2)
    per_axis = max(2, int(np.floor(per_cell ** (1.0 / dimension) + 1e-9)))
    return QuadratureScheme(refinement=per_axis)


def least_squares(
    target: FunctionHandle,
    boxes: Sequence[Box],
    measure: MeasureSpec,
    degree: int,
    basis: Basis,
    reference_box: Box,
    ridge: float,
    quad: QuadratureScheme,
) -> PolynomialModel:
    """
    Minimise sum_nodes w(x) ||target(x) - model(x)||^2 + ridge ||coeffs||^2 over
    the nodes of `boxes`; lstsq returns the minimum-norm solution when the
    weighted design is rank deficient.
    """
    nodes, weights = weighted_nodes(boxes, measure, quad)
    if nodes.shape[0] == 0:
        raise ValidationError("No fit nodes: the region carries no quadrature nodes under this measure.")
    values = target(nodes)
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"Target {target.label} is not finite on the fit nodes.")

    phi = design_matrix(nodes, degree, basis, reference_box)
    root_w = np.sqrt(weights)[:, None]
    lhs, rhs = root_w * phi, root_w * values
    if ridge > 0:
        lhs = np.vstack([lhs, np.sqrt(ridge) * np.eye(phi.shape[1])])
        rhs = np.vstack([rhs, np.zeros((phi.shape[1], values.shape[1]))])
    solution, _, rank, singular = np.linalg.lstsq(lhs, rhs, rcond=None)

    residual = float(np.sqrt(np.sum(weights[:, None] * (values - phi @ solution) ** 2)))
    rank_deficient = ridge == 0 and rank < phi.shape[1]
    condition = float(singular[0] / singular[-1]) if singular.size and singular[-1] > 0 else float("inf")
    if rank_deficient:
        logger.warning(
            "Rank-deficient fit for %s (rank %d of %d terms); using the minimum-norm solution",
            target.label,
            rank,
            phi.shape[1],
        )

    report = FitReport(
        residual=residual,
        nodes=int(nodes.shape[0]),
        rank=int(rank),
        terms=int(phi.shape[1]),
        rank_deficient=bool(rank_deficient),
        condition=condition,
    )
    return PolynomialModel(
        dimension=reference_box.dimension,
        output_dimension=values.shape[1],
        degree=degree,
        basis=basis,
        coefficients=solution.T,
        reference_box=reference_box,
        fit_report=report,
    )


def fit_polynomial(
    target: FunctionHandle,
    region: Region,
    measure: MeasureSpec,
    degree: int,
    config: FitConfig,
    basis: Basis = "chebyshev",
    quad: Optional[QuadratureScheme] = None,
) -> PolynomialModel:
    """Least-squares fit on K_n under mu_n, in a basis scaled to K_n's bounding box."""
    if degree < 0:
        raise ValidationError(f"Polynomial degree must be non-negative, got {degree}.")
    cells = region.cells()
    quad = quad or fit_quadrature(len(cells), region.dimension, config.node_budget)
    model = least_squares(
        target,
        cells,
        restrict_to_region(measure, region),
        degree,
        basis,
        region.outer,
        config.ridge,
        quad,
    )
    logger.info(
        "Fitted degree-%d %s polynomial on K_%d: residual %.3e",
        degree,
        basis,
        region.index,
        model.fit_report.residual if model.fit_report else float("nan"),
    )
    return model


def weighted_residual(
    model: PolynomialModel,
    target: FunctionHandle,
    region: Region,
    measure: MeasureSpec,
    quad: QuadratureScheme,
) -> float:
    """The unregularised least-squares objective of `model` on K_n's fit nodes."""
    nodes, weights = weighted_nodes(region.cells(), restrict_to_region(measure, region), quad)
    gap = target(nodes) - model.evaluate(nodes)
    return float(np.sum(weights[:, None] * gap**2))


__all__ = [
    "PolynomialModel",
    "multi_indices",
    "design_matrix",
    "zero_model",
    "fit_quadrature",
    "least_squares",
    "fit_polynomial",
    "weighted_residual",
]
