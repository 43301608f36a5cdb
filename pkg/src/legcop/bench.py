"""Monte-Carlo benchmark harness for the projection estimators.

Each scenario is a (family, tau, n) triple. Every replication draws a
sample with its own seed, selects the truncation degree by LSCV (unless a
fixed degree is configured), evaluates every estimator on a grid and
records the error metrics. Results are aggregated in replication order, so
reports do not depend on the number of worker threads.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import reference
from .estimators import FittedEstimator
from .grid import Grid
from .metrics import (
    METRICS,
    RELATIVE_METRICS,
    bernstein_copula_grid,
    empirical_copula_grid,
)
from .pseudo import to_pseudo
from .selection import DEFAULT_MAX_DEGREE, select_degree
from .shrinkage import ShrinkageSpec, ShrunkEstimator

SCHEMA_VERSION = 1
METRIC_NAMES = ("miae", "mise", "mkse")


@dataclass
class BenchmarkConfig:
    """Scenario grid and estimator settings.

    ``target`` is ``"copula"`` (estimators CN, Emp, Be<k>) or ``"density"``
    (estimator CN, or CN-shrunk when ``shrink_theta`` is set). ``grid``
    ``"auto"`` uses the regular ``grid_t`` grid for bivariate copulas and the
    coarse 17-node grid otherwise.
    """

    families: tuple[str, ...] = ("frank",)
    taus: tuple[float, ...] = (0.3,)
    ns: tuple[int, ...] = (500,)
    reps: int = 100
    seed: int = 0
    grid_t: int = 100
    grid: str = "auto"
    dimension: int = 2
    target: str = "copula"
    max_degree: int = DEFAULT_MAX_DEGREE
    degree: int | None = None
    bernstein_k: tuple[int, ...] = (10, 25)
    shrink_theta: tuple[float, ...] | None = None
    relative: bool = True
    threads: int = 1

    def __post_init__(self):
        for fam in self.families:
            if fam not in reference.FAMILIES:
                raise ValueError(f"unknown family {fam!r}")
        if self.target not in ("copula", "density"):
            raise ValueError(f"target must be 'copula' or 'density', got {self.target!r}")
        if self.grid not in ("auto", "regular", "coarse"):
            raise ValueError(f"grid must be auto, regular or coarse, got {self.grid!r}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if any(n < 3 for n in self.ns):
            raise ValueError("sample sizes must be at least 3")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.shrink_theta is not None and self.target != "density":
            raise ValueError("shrinkage applies to the density target only")

    def make_grid(self) -> Grid:
        kind = self.grid
        if kind == "auto":
            kind = "regular" if self.target == "copula" and self.dimension == 2 else "coarse"
        if kind == "regular":
            return Grid.regular(self.grid_t, self.dimension)
        return Grid.coarse(self.dimension)

    def scenarios(self) -> list[tuple[str, float, int]]:
        out = []
        for fam in self.families:
            # independence has no dependence parameter, so it is run once
            taus = (0.0,) if fam == "independence" else self.taus
            for tau in taus:
                for n in self.ns:
                    out.append((fam, float(tau), int(n)))
        return out

    def estimator_names(self) -> list[str]:
        if self.target == "density":
            return ["CN-shrunk" if self.shrink_theta is not None else "CN"]
        return ["CN", "Emp"] + [f"Be{k}" for k in self.bernstein_k]


@dataclass(frozen=True)
class ReportRow:
    family: str
    tau: float
    n: int
    estimator: str
    metric: str
    mean: float
    sd: float
    n_opt_mode: int | None


@dataclass
class ErrorReport:
    """Mean and standard deviation of each metric per scenario and estimator.

    ``values`` keeps the per-replication metric values and ``degrees`` the
    per-replication selected degree, keyed by ``(family, tau, n)``.
    """

    config: BenchmarkConfig
    rows: list[ReportRow]
    values: dict = field(default_factory=dict)
    degrees: dict = field(default_factory=dict)

    def get(self, family: str, tau: float, n: int, estimator: str, metric: str) -> ReportRow:
        for r in self.rows:
            if (r.family, r.tau, r.n, r.estimator, r.metric) == (family, float(tau), n, estimator, metric):
                return r
        raise KeyError((family, tau, n, estimator, metric))

    def write_csv(self, fh) -> None:
        fh.write("family,tau,n,estimator,metric,mean,sd,n_opt_mode\n")
        for r in self.rows:
            mode = "" if r.n_opt_mode is None else str(r.n_opt_mode)
            fh.write(
                f"{r.family},{r.tau:.17g},{r.n},{r.estimator},{r.metric},"
                f"{r.mean:.17g},{r.sd:.17g},{mode}\n"
            )

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            self.write_csv(fh)

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg.pop("threads")
        return {
            "schema_version": SCHEMA_VERSION,
            "config": cfg,
            "replications": self.config.reps,
            "rows": [asdict(r) for r in self.rows],
            "selected_degrees": [
                {"family": f, "tau": t, "n": n, "degrees": [int(k) for k in ks]}
                for (f, t, n), ks in self.degrees.items()
            ],
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def default_threads() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def truth_grid(model: reference.CopulaModel, grid: Grid, target: str) -> np.ndarray:
    pts = grid.points()
    if target == "copula":
        vals = reference.cdf(model, pts)
    else:
        vals = reference.density(model, pts)
    return np.asarray(vals).reshape(grid.shape)


def _replicate(config, model, n, grid, truth, seed_key):
    u = to_pseudo(reference.sample(model, n, seed_key))
    if config.degree is None:
        degree = select_degree(u, config.max_degree).selected
    else:
        degree = int(config.degree)
    estimates = {}
    if config.target == "copula":
        estimates["CN"] = FittedEstimator.fit(u, degree).copula_grid(grid)
        estimates["Emp"] = empirical_copula_grid(u, grid.nodes)
        for k in config.bernstein_k:
            estimates[f"Be{k}"] = bernstein_copula_grid(u, grid.nodes, k)
    elif config.shrink_theta is not None:
        thetas = tuple(config.shrink_theta)
        spec = ShrinkageSpec(thetas * config.dimension if len(thetas) == 1 else thetas)
        estimates["CN-shrunk"] = ShrunkEstimator.fit(u, spec, degree).density_grid(grid)
    else:
        estimates["CN"] = FittedEstimator.fit(u, degree).density_grid(grid)
    out = {}
    for name, est in estimates.items():
        for metric in METRIC_NAMES:
            if config.relative:
                out[(name, metric)] = RELATIVE_METRICS[metric](est, truth)
            else:
                out[(name, metric)] = METRICS[metric](est, truth, grid)
    return degree, out


def _mode(values) -> int:
    counts = np.bincount(np.asarray(values, dtype=int))
    return int(np.argmax(counts))


def run_benchmark(config: BenchmarkConfig) -> ErrorReport:
    """Run every scenario of ``config`` and aggregate the metrics.

    Replication ``r`` of every scenario samples with seed ``config.seed + r``,
    so scenarios share common random numbers.
    """
    grid = config.make_grid()
    names = config.estimator_names()
    rows: list[ReportRow] = []
    values: dict = {}
    degrees: dict = {}
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        for fam, tau, n in config.scenarios():
            model = reference.from_kendall_tau(fam, tau, config.dimension)
            truth = truth_grid(model, grid, config.target)
            jobs = [
                pool.submit(_replicate, config, model, n, grid, truth, config.seed + r)
                for r in range(config.reps)
            ]
            results = [j.result() for j in jobs]
            key = (fam, tau, n)
            degrees[key] = [deg for deg, _ in results]
            mode = _mode(degrees[key])
            for name in names:
                for metric in METRIC_NAMES:
                    arr = np.array([res[(name, metric)] for _, res in results])
                    values[key + (name, metric)] = arr
                    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
                    rows.append(
                        ReportRow(
                            fam, tau, n, name, metric, float(arr.mean()), sd,
                            mode if name.startswith("CN") else None,
                        )
                    )
    return ErrorReport(config, rows, values, degrees)
