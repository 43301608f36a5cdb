"""Truncation degree selection by least-squares cross-validation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import MAX_DEGREE, basis_matrix
from .coefficients import as_degree, as_pseudo, product_sums, structural_masks

DEFAULT_MAX_DEGREE = 20


@dataclass(frozen=True)
class LscvScan:
    candidates: np.ndarray
    scores: np.ndarray
    selected: int

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("N,score\n")
            for k, s in zip(self.candidates, self.scores):
                fh.write(f"{k},{s:.17g}\n")


def lscv_terms(pseudo, degree, literal: bool = False) -> np.ndarray:
    """Per-index contributions to the LSCV criterion over the box ``m <= degree``.

    Each index contributes ``(S_m - (n+1)/(n-1) * ((n rho_m)^2 - S_m)) / n^2``
    where ``S_m = sum_i prod_j Q_{m_j}(U_ij)^2``. Unless ``literal`` is set,
    the zero index contributes exactly -1 and indices whose coefficient is
    structurally zero contribute 0, matching the estimator that is scored.
    """
    u = as_pseudo(pseudo)
    n, d = u.shape
    if n < 3:
        raise ValueError(f"LSCV needs n >= 3, got {n}")
    degree = as_degree(degree, d)
    factors = [basis_matrix(k, u[:, j]) for j, k in enumerate(degree)]
    sums = product_sums(factors)
    squares = product_sums([f * f for f in factors])
    terms = (squares - (n + 1) / (n - 1) * (sums * sums - squares)) / n**2
    if not literal:
        zero, single = structural_masks(degree)
        terms[zero] = -1.0
        terms[single] = 0.0
    return terms


def lscv(pseudo, degree, literal: bool = False) -> float:
    """LSCV criterion (up to the constant ``||c||^2``) of the degree-``degree`` density estimator."""
    return float(lscv_terms(pseudo, degree, literal).sum())


def select_degree(
    pseudo, max_n: int = DEFAULT_MAX_DEGREE, literal: bool = False
) -> LscvScan:
    """Scan ``N = 0..max_n`` with equal components and return the argmin.

    Per-index terms are computed once at ``max_n``; each candidate score is
    a partial sum over the sub-box. Ties go to the smaller ``N``.
    """
    max_n = int(max_n)
    if not 0 <= max_n <= MAX_DEGREE:
        raise ValueError(f"max_n must be in [0, {MAX_DEGREE}], got {max_n}")
    u = as_pseudo(pseudo)
    d = u.shape[1]
    return scan_from_terms(lscv_terms(u, (max_n,) * d, literal))


def scan_from_terms(terms: np.ndarray) -> LscvScan:
    """Scores for every equal-component degree inside the box of ``terms``."""
    max_n = min(terms.shape) - 1
    cum = terms
    for axis in range(terms.ndim):
        cum = np.cumsum(cum, axis=axis)
    k = np.arange(max_n + 1)
    scores = cum[(k,) * terms.ndim]
    return LscvScan(k, scores, int(np.argmin(scores)))


def plug_in_degree(n: int, d: int, b: float) -> int:
    """``floor(n ** (1 / (2d + b + 4)))`` for harmonic smoothness ``b > 0``."""
    if b <= 0:
        raise ValueError(f"smoothness b must be positive, got {b}")
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    p = 2 * d + b + 4
    k = math.floor(n ** (1.0 / p))
    # guard the floor against rounding right at an integer root
    while (k + 1) ** p <= n:
        k += 1
    while k > 1 and k**p > n:
        k -= 1
    return k
