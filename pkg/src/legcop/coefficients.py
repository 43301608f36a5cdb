"""Copula coefficients: sample means of tensor Legendre products."""

from __future__ import annotations

import csv
import string
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .basis import MAX_DEGREE, basis_matrix
from .pseudo import as_sample


def as_degree(degree, d: int | None = None) -> tuple[int, ...]:
    """Normalize a degree vector; a scalar is broadcast to ``d`` components."""
    if np.ndim(degree) == 0:
        if d is None:
            raise ValueError("a scalar degree needs the dimension")
        degree = (int(degree),) * d
    out = tuple(int(k) for k in degree)
    if d is not None and len(out) != d:
        raise ValueError(f"degree has {len(out)} components, data has dimension {d}")
    for k in out:
        if k < 0:
            raise ValueError(f"degree components must be nonnegative, got {out}")
        if k > MAX_DEGREE:
            raise ValueError(f"degree component {k} exceeds the cap of {MAX_DEGREE}")
    return out


def as_pseudo(pseudo) -> np.ndarray:
    u = np.asarray(pseudo, dtype=float)
    if u.ndim != 2 or u.shape[0] < 1 or u.shape[1] < 2:
        raise ValueError(f"pseudo-observations must be an n x d array with d >= 2, got {u.shape}")
    if not np.all(np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("pseudo-observations must lie in [0, 1]")
    return u


def structural_masks(degree: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks over the index box for ``m = 0`` and for indices with exactly d-1 zeros."""
    grids = np.indices(tuple(k + 1 for k in degree))
    nonzero = np.count_nonzero(grids, axis=0)
    return nonzero == 0, nonzero == 1


def product_sums(factors: Sequence[np.ndarray]) -> np.ndarray:
    """``sum_i prod_j factors[j][i, m_j]`` over the full index box."""
    letters = string.ascii_lowercase[: len(factors)]
    spec = ",".join("z" + c for c in letters) + "->" + letters
    return np.einsum(spec, *factors, optimize=len(factors) > 2)


@dataclass(frozen=True)
class CoefficientTensor:
    """Estimated coefficients over the box ``m <= degree``.

    ``values`` is a dense array of shape ``(N_1 + 1, ..., N_d + 1)``.
    Tilted tensors (from the shrinkage pipeline) carry no structural rules.
    """

    degree: tuple[int, ...]
    values: np.ndarray
    n_source: int
    tilted: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != tuple(k + 1 for k in self.degree):
            raise ValueError(f"values shape {values.shape} does not match degree {self.degree}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return len(self.degree)

    def __getitem__(self, m) -> float:
        return float(self.values[tuple(m)])

    def rows(self):
        """Yield ``(multi_index, value)`` in C order."""
        for m in np.ndindex(*self.values.shape):
            yield m, float(self.values[m])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"m_{j + 1}" for j in range(self.dimension)] + ["value"])
            for m, v in self.rows():
                writer.writerow(list(m) + [f"{v:.17g}"])

    @classmethod
    def from_csv(cls, path, n_source: int = 0, tilted: bool = False) -> "CoefficientTensor":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        d = len(rows[0]) - 1
        idx = np.array([[int(c) for c in r[:d]] for r in rows[1:]])
        degree = tuple(int(k) for k in idx.max(axis=0))
        values = np.zeros(tuple(k + 1 for k in degree))
        for m, r in zip(idx, rows[1:]):
            values[tuple(m)] = float(r[d])
        return cls(degree, values, n_source, tilted)


def _apply_structure(raw: np.ndarray, degree: tuple[int, ...]) -> np.ndarray:
    zero, single = structural_masks(degree)
    out = raw.copy()
    out[zero] = 1.0
    out[single] = 0.0
    return out


def raw_means(u: np.ndarray, degree: tuple[int, ...]) -> np.ndarray:
    """Sample means of basis products with no structural rules applied."""
    factors = [basis_matrix(k, u[:, j]) for j, k in enumerate(degree)]
    return product_sums(factors) / u.shape[0]


def estimate_coefficients(pseudo, degree) -> CoefficientTensor:
    """Coefficient tensor from pseudo-observations.

    The zero index is set to 1 and every index with exactly ``d - 1`` zero
    components to 0; all others are sample means of ``prod_j Q_{m_j}(U_ij)``.
    """
    u = as_pseudo(pseudo)
    degree = as_degree(degree, u.shape[1])
    return CoefficientTensor(degree, _apply_structure(raw_means(u, degree), degree), u.shape[0])


def coefficients_known_margins(
    sample, margins: Sequence[Callable], degree
) -> CoefficientTensor:
    """Pseudo-estimator using known marginal CDFs in place of ranks."""
    x = as_sample(sample)
    if len(margins) != x.shape[1]:
        raise ValueError(f"{len(margins)} margins for {x.shape[1]} columns")
    u = np.column_stack([np.asarray(F(x[:, j]), dtype=float) for j, F in enumerate(margins)])
    if np.any(~np.isfinite(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise ValueError("a margin returned values outside [0, 1]")
    degree = as_degree(degree, x.shape[1])
    return CoefficientTensor(degree, _apply_structure(raw_means(u, degree), degree), x.shape[0])


def spearman_rho(pseudo) -> float:
    """Spearman's rho as the (1, 1) copula coefficient, ``(3/n) sum (2U_1 - 1)(2U_2 - 1)``."""
    u = as_pseudo(pseudo)
    if u.shape[1] != 2:
        raise ValueError(f"spearman_rho needs d = 2, got d = {u.shape[1]}")
    return estimate_coefficients(u, (1, 1))[1, 1]
