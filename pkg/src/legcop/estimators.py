"""Projection estimators of the copula density and the copula."""

from __future__ import annotations

import string

import numpy as np

from .basis import antiderivative_matrix, basis_matrix
from .coefficients import CoefficientTensor, estimate_coefficients
from .grid import Grid


def _points(u, d: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != d:
        raise ValueError(f"points have dimension {arr.shape[-1]}, estimator has {d}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("points must lie in [0, 1]^d")
    return arr, single


def _contract_points(values: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    letters = string.ascii_lowercase[: len(factors)]
    spec = ",".join("z" + c for c in letters) + "," + letters + "->z"
    return np.einsum(spec, *factors, values, optimize=True)


def _contract_grid(values: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    letters = string.ascii_lowercase[: len(factors)]
    outs = string.ascii_uppercase[: len(factors)]
    spec = ",".join(o + c for o, c in zip(outs, letters)) + "," + letters + "->" + outs
    return np.einsum(spec, *factors, values, optimize=True)


class FittedEstimator:
    """Truncated Legendre series built from a coefficient tensor.

    Density values are returned raw and can be negative.
    """

    def __init__(self, coefficients: CoefficientTensor):
        self.coefficients = coefficients

    @classmethod
    def fit(cls, pseudo, degree) -> "FittedEstimator":
        return cls(estimate_coefficients(pseudo, degree))

    @property
    def dimension(self) -> int:
        return self.coefficients.dimension

    @property
    def degree(self) -> tuple[int, ...]:
        return self.coefficients.degree

    def _factors(self, fn, columns) -> list[np.ndarray]:
        return [fn(k, c) for k, c in zip(self.degree, columns)]

    def density(self, u) -> np.ndarray | float:
        """Series ``sum_m rho_m prod_j Q_{m_j}(u_j)`` at one point or an ``(K, d)`` batch."""
        pts, single = _points(u, self.dimension)
        out = _contract_points(self.coefficients.values, self._factors(basis_matrix, pts.T))
        return float(out[0]) if single else out

    def cdf(self, u) -> np.ndarray | float:
        """Integrated series ``sum_m rho_m prod_j int_0^{u_j} Q_{m_j}``."""
        pts, single = _points(u, self.dimension)
        out = _contract_points(
            self.coefficients.values, self._factors(antiderivative_matrix, pts.T)
        )
        return float(out[0]) if single else out

    def density_grid(self, grid: Grid) -> np.ndarray:
        self._check_grid(grid)
        return _contract_grid(
            self.coefficients.values, self._factors(basis_matrix, [grid.nodes] * grid.dimension)
        )

    def copula_grid(self, grid: Grid) -> np.ndarray:
        self._check_grid(grid)
        return _contract_grid(
            self.coefficients.values,
            self._factors(antiderivative_matrix, [grid.nodes] * grid.dimension),
        )

    def _check_grid(self, grid: Grid) -> None:
        if grid.dimension != self.dimension:
            raise ValueError(f"grid dimension {grid.dimension} != estimator dimension {self.dimension}")


def density_at(fit: FittedEstimator, u) -> float:
    return fit.density(u)


def copula_at(fit: FittedEstimator, u) -> float:
    return fit.cdf(u)


def density_grid(fit: FittedEstimator, grid: Grid) -> np.ndarray:
    return fit.density_grid(grid)


def copula_grid(fit: FittedEstimator, grid: Grid) -> np.ndarray:
    return fit.copula_grid(grid)
