from .densities import exp_decay, gaussian, known_densities, lebesgue, parse_density, tabulated
from .integration_service import (
    integrate,
    integrate_boxes,
    integrate_region,
    measure_cells,
    restrict_to_region,
    total_mass,
    weighted_nodes,
)
from .quadrature import default_quadrature

__all__ = [
    "lebesgue",
    "gaussian",
    "exp_decay",
    "tabulated",
    "known_densities",
    "parse_density",
    "integrate",
    "integrate_boxes",
    "integrate_region",
    "measure_cells",
    "restrict_to_region",
    "total_mass",
    "weighted_nodes",
    "default_quadrature",
]
