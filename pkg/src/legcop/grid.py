"""Evaluation grids on the unit cube and their CSV / gnuplot writers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Tensor grid with the same 1-d node set on every axis.

    ``weight`` is the per-node factor used by the discretized integrals.
    """

    nodes: np.ndarray
    dimension: int
    weight: float

    @classmethod
    def regular(cls, T: int, dimension: int = 2) -> "Grid":
        """Nodes ``j / T`` for ``j = 1..T-1``, weight ``1 / T^d``."""
        if T < 2:
            raise ValueError(f"T must be at least 2, got {T}")
        nodes = np.arange(1, T) / T
        return cls(nodes, dimension, float(T) ** (-dimension))

    @classmethod
    def coarse(cls, dimension: int = 2, size: int = 17) -> "Grid":
        """Nodes ``0.01, 0.07125, ..., 0.99`` used for density and trivariate tables."""
        nodes = np.linspace(0.01, 0.99, size)
        return cls(nodes, dimension, float(size) ** (-dimension))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nodes.size,) * self.dimension

    def points(self) -> np.ndarray:
        """All nodes as an ``(K, d)`` array in C order of the grid shape."""
        mesh = np.meshgrid(*([self.nodes] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def write_grid_csv(path, grid: Grid, values: np.ndarray, header: str = "value") -> None:
    values = np.asarray(values).reshape(grid.shape)
    pts = grid.points()
    with open(path, "w") as fh:
        fh.write(",".join([f"u_{j + 1}" for j in range(grid.dimension)] + [header]) + "\n")
        for p, v in zip(pts, values.ravel()):
            fh.write(",".join(f"{c:.17g}" for c in p) + f",{v:.17g}\n")


def write_gnuplot_matrix(path, grid: Grid, values: np.ndarray) -> None:
    """Blank-line separated ``x y z`` blocks, readable by ``splot ... with pm3d``."""
    if grid.dimension != 2:
        raise ValueError("gnuplot surfaces need a 2-d grid")
    values = np.asarray(values).reshape(grid.shape)
    with open(path, "w") as fh:
        for i, x in enumerate(grid.nodes):
            for j, y in enumerate(grid.nodes):
                fh.write(f"{x:.17g} {y:.17g} {values[i, j]:.17g}\n")
            fh.write("\n")


def write_gnuplot_script(path, data_file: str, title: str) -> None:
    with open(path, "w") as fh:
        fh.write(
            "set pm3d\nset xlabel 'u1'\nset ylabel 'u2'\n"
            f"set title '{title}'\nsplot '{data_file}' with pm3d notitle\npause -1\n"
        )
