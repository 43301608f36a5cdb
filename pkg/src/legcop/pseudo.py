"""Rank transform of raw observations into pseudo-observations."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def as_sample(data) -> np.ndarray:
    """Validate an ``n x d`` sample (``n >= 2``, ``d >= 2``, all finite)."""
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"sample must be a 2-d array, got shape {x.shape}")
    n, d = x.shape
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if d < 2:
        raise ValueError(f"need at least 2 columns, got {d}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite entries")
    return x


def to_pseudo(sample) -> np.ndarray:
    """Pseudo-observations ``R_ij / n`` with midranks for ties.

    Examples
    --------
    >>> to_pseudo([[3.1, 0.0], [0.5, 1.0], [7.2, 2.0]])[:, 0]
    array([0.66666667, 0.33333333, 1.        ])
    """
    x = as_sample(sample)
    return rankdata(x, method="average", axis=0) / x.shape[0]


def ecdf_at(sample, column: int, x: float) -> float:
    """Right-continuous empirical CDF of one column evaluated at ``x``."""
    data = as_sample(sample)
    if not 0 <= column < data.shape[1]:
        raise IndexError(f"column {column} out of range for d={data.shape[1]}")
    return np.count_nonzero(data[:, column] <= x) / data.shape[0]
