"""Shrinkage (tilting) for copula densities that are not square integrable.

The density is multiplied by a factor ``s(theta, u) <= 1`` that vanishes
fast enough near the boundary, the product is expanded in the Legendre
basis, and the fitted series is divided by ``s`` again.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .basis import basis_matrix
from .coefficients import CoefficientTensor, as_degree, as_pseudo, product_sums
from .estimators import _contract_points
from .grid import Grid
from .selection import DEFAULT_MAX_DEGREE, select_degree

KINDS = ("exponential_tilt", "power")
DEFAULT_THETA = 0.001


@dataclass(frozen=True)
class ShrinkageSpec:
    """Tilting function ``exp(-sum theta_j / u_j)`` or ``prod u_j^theta_j``."""

    thetas: tuple[float, ...]
    kind: str = "exponential_tilt"
    epsilon_clamp: float = 1e-6

    def __post_init__(self):
        thetas = tuple(float(t) for t in np.atleast_1d(self.thetas))
        object.__setattr__(self, "thetas", thetas)
        if self.kind not in KINDS:
            raise ValueError(f"unknown shrinkage kind {self.kind!r}; expected one of {KINDS}")
        if not thetas or any(not np.isfinite(t) or t <= 0 for t in thetas):
            raise ValueError(f"shrinkage thetas must be positive, got {thetas}")
        if not 0.0 < self.epsilon_clamp < 0.1:
            raise ValueError(f"epsilon_clamp must be in (0, 0.1), got {self.epsilon_clamp}")

    @classmethod
    def default(cls, dimension: int, kind: str = "exponential_tilt") -> "ShrinkageSpec":
        return cls((DEFAULT_THETA,) * dimension, kind)

    @property
    def dimension(self) -> int:
        return len(self.thetas)

    def marginal_factors(self, u: np.ndarray) -> np.ndarray:
        """Per-coordinate factors ``s_j(theta_j, u_j)`` for an ``(K, d)`` array."""
        u = np.maximum(u, self.epsilon_clamp)
        th = np.asarray(self.thetas)
        if self.kind == "exponential_tilt":
            return np.exp(-th / u)
        return u**th


def _clamped_points(spec: ShrinkageSpec, u) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != spec.dimension:
        raise ValueError(f"points have dimension {arr.shape[-1]}, spec has {spec.dimension}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("points must lie in [0, 1]^d")
    low = arr < spec.epsilon_clamp
    if np.any(low):
        warnings.warn(
            f"{int(low.sum())} coordinate(s) below {spec.epsilon_clamp:g} clamped before unshrinking",
            RuntimeWarning,
            stacklevel=3,
        )
        arr = np.maximum(arr, spec.epsilon_clamp)
    return arr, single


def shrink_factor(spec: ShrinkageSpec, u) -> np.ndarray | float:
    """``s(theta, u)`` at one point or a batch; always in ``(0, 1]``."""
    pts, single = _clamped_points(spec, u)
    out = np.prod(spec.marginal_factors(pts), axis=1)
    return float(out[0]) if single else out


def estimate_coefficients_shrunk(pseudo, degree, spec: ShrinkageSpec) -> CoefficientTensor:
    """Sample means of ``prod_j s_j(theta_j, U_ij) Q_{m_j}(U_ij)``.

    No structural rules are applied: the tilted function is not a copula
    density, so its zero-index coefficient is not 1 and its single-index
    coefficients are not 0.
    """
    u = as_pseudo(pseudo)
    n, d = u.shape
    if d != spec.dimension:
        raise ValueError(f"spec has {spec.dimension} thetas, data has dimension {d}")
    degree = as_degree(degree, d)
    weights = spec.marginal_factors(u)
    factors = [basis_matrix(k, u[:, j]) * weights[:, j : j + 1] for j, k in enumerate(degree)]
    return CoefficientTensor(degree, product_sums(factors) / n, n, tilted=True)


class ShrunkEstimator:
    """Tilted Legendre series divided by the shrinkage factor."""

    def __init__(self, coefficients: CoefficientTensor, spec: ShrinkageSpec):
        if coefficients.dimension != spec.dimension:
            raise ValueError("coefficient tensor and spec dimensions differ")
        self.coefficients = coefficients
        self.spec = spec

    @classmethod
    def fit(
        cls,
        pseudo,
        spec: ShrinkageSpec,
        degree=None,
        max_degree: int = DEFAULT_MAX_DEGREE,
    ) -> "ShrunkEstimator":
        """Fit at ``degree``, or at the LSCV choice of the untilted estimator when ``degree`` is None."""
        u = as_pseudo(pseudo)
        if degree is None:
            degree = select_degree(u, max_degree).selected
        return cls(estimate_coefficients_shrunk(u, as_degree(degree, u.shape[1]), spec), spec)

    @property
    def degree(self) -> tuple[int, ...]:
        return self.coefficients.degree

    @property
    def dimension(self) -> int:
        return self.coefficients.dimension

    def tilted_density(self, u) -> np.ndarray | float:
        pts, single = _clamped_points(self.spec, u)
        out = self._series(pts)
        return float(out[0]) if single else out

    def density(self, u) -> np.ndarray | float:
        pts, single = _clamped_points(self.spec, u)
        out = self._series(pts) / np.prod(self.spec.marginal_factors(pts), axis=1)
        return float(out[0]) if single else out

    def density_grid(self, grid: Grid) -> np.ndarray:
        if grid.dimension != self.dimension:
            raise ValueError(f"grid dimension {grid.dimension} != estimator dimension {self.dimension}")
        return np.asarray(self.density(grid.points())).reshape(grid.shape)

    def _series(self, pts: np.ndarray) -> np.ndarray:
        factors = [basis_matrix(k, pts[:, j]) for j, k in enumerate(self.degree)]
        return _contract_points(self.coefficients.values, factors)


def density_at_shrunk(pseudo, degree, spec: ShrinkageSpec, u) -> np.ndarray | float:
    """Unshrunk density estimate ``s(theta, u)^{-1} * tilted series(u)``."""
    return ShrunkEstimator.fit(pseudo, spec, degree).density(u)
