"""Nonparametric copula and copula-density estimation by shifted Legendre projection."""

from .basis import antiderivative, basis_matrix, eval_shifted_legendre
from .coefficients import (
    CoefficientTensor,
    coefficients_known_margins,
    estimate_coefficients,
    spearman_rho,
)
from .estimators import FittedEstimator, copula_at, copula_grid, density_at, density_grid
from .grid import Grid
from .pseudo import to_pseudo
from .reference import CopulaModel, from_kendall_tau
from .selection import LscvScan, lscv, plug_in_degree, select_degree

__all__ = [
    "CoefficientTensor",
    "CopulaModel",
    "FittedEstimator",
    "Grid",
    "LscvScan",
    "antiderivative",
    "basis_matrix",
    "coefficients_known_margins",
    "copula_at",
    "copula_grid",
    "density_at",
    "density_grid",
    "estimate_coefficients",
    "eval_shifted_legendre",
    "from_kendall_tau",
    "lscv",
    "plug_in_degree",
    "select_degree",
    "spearman_rho",
    "to_pseudo",
]
