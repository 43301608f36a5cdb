"""Grid error metrics and the baseline copula estimators used in benchmarks."""

from __future__ import annotations

import string

import numpy as np
from scipy import stats

from .coefficients import as_pseudo
from .grid import Grid


def _pair(estimate, truth) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(estimate, dtype=float)
    t = np.asarray(truth, dtype=float)
    if e.shape != t.shape:
        raise ValueError(f"shape mismatch: estimate {e.shape}, truth {t.shape}")
    return e, t


def miae(estimate, truth, grid: Grid) -> float:
    """Discretized integrated absolute error, ``weight * sum |estimate - truth|``."""
    e, t = _pair(estimate, truth)
    return float(grid.weight * np.abs(e - t).sum())


def mise(estimate, truth, grid: Grid) -> float:
    """Discretized integrated squared error."""
    e, t = _pair(estimate, truth)
    return float(grid.weight * np.square(e - t).sum())


def mkse(estimate, truth, grid: Grid) -> float:
    """Sup-norm error over the grid nodes."""
    e, t = _pair(estimate, truth)
    return float(np.abs(e - t).max())


# Relative versions. The grid weight cancels, so they do not depend on it.

def relative_miae(estimate, truth) -> float:
    """``sum |estimate - truth| / sum |truth|``."""
    e, t = _pair(estimate, truth)
    return float(np.abs(e - t).sum() / np.abs(t).sum())


def relative_mise(estimate, truth) -> float:
    """``sum (estimate - truth)^2 / sum truth^2``."""
    e, t = _pair(estimate, truth)
    return float(np.square(e - t).sum() / np.square(t).sum())


def relative_mkse(estimate, truth) -> float:
    """``max |estimate - truth| / max |truth|``."""
    e, t = _pair(estimate, truth)
    return float(np.abs(e - t).max() / np.abs(t).max())


METRICS = {"miae": miae, "mise": mise, "mkse": mkse}
RELATIVE_METRICS = {"miae": relative_miae, "mise": relative_mise, "mkse": relative_mkse}


def _points(u, d: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    if arr.shape[-1] != d:
        raise ValueError(f"points have dimension {arr.shape[-1]}, sample has {d}")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("points must lie in [0, 1]^d")
    return arr, single


def empirical_copula_at(pseudo, u) -> np.ndarray | float:
    """Empirical copula ``(1/n) sum_i prod_j 1(U_ij <= u_j)`` at one point or a batch."""
    x = as_pseudo(pseudo)
    pts, single = _points(u, x.shape[1])
    below = np.all(x[None, :, :] <= pts[:, None, :], axis=2)
    out = below.mean(axis=1)
    return float(out[0]) if single else out


def _tensor_contract(mats: list[np.ndarray]) -> np.ndarray:
    letters = string.ascii_lowercase[: len(mats)]
    spec = ",".join(c + "z" for c in letters) + "->" + letters
    return np.einsum(spec, *mats, optimize=True)


def empirical_copula_grid(pseudo, nodes) -> np.ndarray:
    """Empirical copula on the tensor grid ``nodes^d``."""
    x = as_pseudo(pseudo)
    nodes = np.asarray(nodes, dtype=float)
    mats = [(x[:, j][None, :] <= nodes[:, None]).astype(float) for j in range(x.shape[1])]
    return _tensor_contract(mats) / x.shape[0]


def _check_k(k) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"Bernstein order must be a positive integer, got {k}")
    return int(k)


def bernstein_copula_at(pseudo, u, k: int) -> np.ndarray | float:
    """Empirical Bernstein copula of order ``k``.

    The empirical copula is evaluated on ``{0, 1/k, ..., 1}^d`` and blended
    with binomial ``(k, u_j)`` weights along each axis.
    """
    k = _check_k(k)
    x = as_pseudo(pseudo)
    pts, single = _points(u, x.shape[1])
    corners = empirical_copula_grid(x, np.arange(k + 1) / k)
    j = np.arange(k + 1)
    weights = [stats.binom.pmf(j[None, :], k, pts[:, c][:, None]) for c in range(x.shape[1])]
    letters = string.ascii_lowercase[: x.shape[1]]
    spec = ",".join("z" + c for c in letters) + "," + letters + "->z"
    out = np.einsum(spec, *weights, corners, optimize=True)
    return float(out[0]) if single else out


def bernstein_copula_grid(pseudo, nodes, k: int) -> np.ndarray:
    """Empirical Bernstein copula of order ``k`` on the tensor grid ``nodes^d``."""
    k = _check_k(k)
    x = as_pseudo(pseudo)
    nodes = np.asarray(nodes, dtype=float)
    corners = empirical_copula_grid(x, np.arange(k + 1) / k)
    w = stats.binom.pmf(np.arange(k + 1)[None, :], k, nodes[:, None])
    d = x.shape[1]
    letters = string.ascii_lowercase[:d]
    outs = string.ascii_uppercase[:d]
    spec = ",".join(o + c for o, c in zip(outs, letters)) + "," + letters + "->" + outs
    return np.einsum(spec, *([w] * d), corners, optimize=True)
