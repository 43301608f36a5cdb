"""Orthonormal shifted Legendre polynomials on [0, 1].

``Q_m(x) = sqrt(2m + 1) * L_m(2x - 1)`` where ``L_m`` is the classical
Legendre polynomial. Every evaluation goes through the three-term recurrence
in ``t = 2x - 1``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

MAX_DEGREE = 64


def _check_degree(m: int) -> int:
    m = int(m)
    if m < 0:
        raise ValueError(f"degree must be nonnegative, got {m}")
    if m > MAX_DEGREE:
        raise ValueError(f"degree {m} exceeds the cap of {MAX_DEGREE}")
    return m


def _check_unit(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def _legendre_table(max_degree: int, t: np.ndarray) -> np.ndarray:
    """Classical ``L_0..L_max_degree`` at ``t``; last axis indexes the degree."""
    out = np.empty(t.shape + (max_degree + 1,))
    out[..., 0] = 1.0
    if max_degree >= 1:
        out[..., 1] = t
    for k in range(1, max_degree):
        out[..., k + 1] = ((2 * k + 1) * t * out[..., k] - k * out[..., k - 1]) / (k + 1)
    return out


def eval_shifted_legendre(m: int, x: float) -> float:
    """Value of ``Q_m`` at a single point ``x`` in [0, 1]."""
    m = _check_degree(m)
    x = float(_check_unit(x))
    return float(np.sqrt(2 * m + 1) * _legendre_table(m, np.asarray(2.0 * x - 1.0))[m])


def eval_basis_row(max_degree: int, x: float) -> np.ndarray:
    """``[Q_0(x), ..., Q_max_degree(x)]`` from a single recurrence pass."""
    max_degree = _check_degree(max_degree)
    x = float(_check_unit(x))
    return basis_matrix(max_degree, np.array([x]))[0]


def basis_matrix(max_degree: int, x) -> np.ndarray:
    """Evaluate ``Q_0..Q_max_degree`` at every entry of ``x``.

    Parameters
    ----------
    max_degree : int
        Highest degree, at most ``MAX_DEGREE``.
    x : array_like
        Points in [0, 1], any shape.

    Returns
    -------
    ndarray
        Shape ``x.shape + (max_degree + 1,)``.
    """
    max_degree = _check_degree(max_degree)
    x = _check_unit(x)
    scale = np.sqrt(2.0 * np.arange(max_degree + 1) + 1.0)
    return _legendre_table(max_degree, 2.0 * x - 1.0) * scale


def antiderivative(m: int, u: float) -> float:
    """``int_0^u Q_m(x) dx`` for a single ``u`` in [0, 1]."""
    m = _check_degree(m)
    u = float(_check_unit(u, "u"))
    return float(antiderivative_matrix(m, np.array([u]))[0, m])


def antiderivative_matrix(max_degree: int, u) -> np.ndarray:
    """Antiderivatives ``int_0^u Q_m`` for ``m = 0..max_degree``.

    Uses ``(2m + 1) L_m = (L_{m+1} - L_{m-1})'`` so that for ``m >= 1``
    the integral is ``(L_{m+1}(t) - L_{m-1}(t)) / (2 sqrt(2m + 1))`` with
    ``t = 2u - 1``; the lower limit cancels by parity.
    """
    max_degree = _check_degree(max_degree)
    u = _check_unit(u, "u")
    leg = _legendre_table(max_degree + 1, 2.0 * u - 1.0)
    out = np.empty(u.shape + (max_degree + 1,))
    out[..., 0] = u
    if max_degree >= 1:
        m = np.arange(1, max_degree + 1)
        out[..., 1:] = (leg[..., 2:] - leg[..., :-2]) / (2.0 * np.sqrt(2.0 * m + 1.0))
    return out


def tensor_eval(indices: Sequence[int], point: Sequence[float]) -> float:
    """Product ``prod_j Q_{m_j}(x_j)``."""
    indices = [_check_degree(m) for m in indices]
    point = _check_unit(point, "point").ravel()
    if len(indices) != point.size or not indices:
        raise ValueError(
            f"dimension mismatch: {len(indices)} indices for a point of length {point.size}"
        )
    return float(np.prod([eval_shifted_legendre(m, x) for m, x in zip(indices, point)]))
