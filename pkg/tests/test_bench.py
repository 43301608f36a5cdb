import csv
import io
import json

import numpy as np
import pytest

from legcop.bench import BenchmarkConfig, run_benchmark, truth_grid
from legcop.grid import Grid
from legcop.reference import CopulaModel


def small(**kw):
    base = dict(families=("frank",), taus=(0.3,), ns=(200,), reps=4, seed=3, grid_t=20)
    base.update(kw)
    return BenchmarkConfig(**base)


def csv_text(report):
    fh = io.StringIO()
    report.write_csv(fh)
    return fh.getvalue()


def test_deterministic_and_thread_invariant():
    a = csv_text(run_benchmark(small(threads=1)))
    b = csv_text(run_benchmark(small(threads=1)))
    c = csv_text(run_benchmark(small(threads=4)))
    assert a == b == c
    assert a != csv_text(run_benchmark(small(seed=4)))


def test_csv_layout():
    report = run_benchmark(small())
    rows = list(csv.DictReader(io.StringIO(csv_text(report))))
    assert list(rows[0]) == ["family", "tau", "n", "estimator", "metric", "mean", "sd", "n_opt_mode"]
    assert len(rows) == 4 * 3
    assert {r["estimator"] for r in rows} == {"CN", "Emp", "Be10", "Be25"}
    for r in rows:
        assert float(r["sd"]) >= 0
        assert (r["n_opt_mode"] != "") == (r["estimator"] == "CN")


def test_report_values_match_rows():
    report = run_benchmark(small())
    key = ("frank", 0.3, 200)
    for est in ("CN", "Emp"):
        vals = report.values[key + (est, "miae")]
        row = report.get("frank", 0.3, 200, est, "miae")
        assert row.mean == pytest.approx(vals.mean(), rel=1e-15)
        assert row.sd == pytest.approx(vals.std(ddof=1), rel=1e-15)
    degrees = report.degrees[key]
    assert report.get("frank", 0.3, 200, "CN", "mise").n_opt_mode == np.bincount(degrees).argmax()
    with pytest.raises(KeyError):
        report.get("frank", 0.3, 200, "CN", "nope")


def test_json_schema(tmp_path):
    report = run_benchmark(small(threads=2))
    path = tmp_path / "r.json"
    report.to_json(path)
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == 1
    assert doc["replications"] == 4
    assert "threads" not in doc["config"]
    assert len(doc["rows"]) == 12
    assert doc["selected_degrees"][0]["degrees"] == [int(k) for k in report.degrees[("frank", 0.3, 200)]]


def test_independence_exact_when_degree_zero():
    report = run_benchmark(
        BenchmarkConfig(families=("independence",), ns=(500,), reps=20, seed=0, relative=False)
    )
    degrees = report.degrees[("independence", 0.0, 500)]
    mise = report.values[("independence", 0.0, 500, "CN", "mise")]
    assert np.all(mise[np.asarray(degrees) == 0] <= 1e-20)
    assert report.get("independence", 0.0, 500, "CN", "mise").n_opt_mode == 0


def test_frank_cn_beats_empirical():
    report = run_benchmark(BenchmarkConfig(families=("frank",), taus=(0.3,), ns=(500,), reps=20, seed=0))
    cn = report.get("frank", 0.3, 500, "CN", "miae").mean
    emp = report.get("frank", 0.3, 500, "Emp", "miae").mean
    assert cn < emp


def test_density_target_and_shrinkage():
    cfg = small(target="density", families=("clayton",), shrink_theta=(0.001,), degree=3, reps=2)
    assert cfg.make_grid().nodes.size == 17
    report = run_benchmark(cfg)
    assert {r.estimator for r in report.rows} == {"CN-shrunk"}
    assert report.degrees[("clayton", 0.3, 200)] == [3, 3]


def test_trivariate_uses_coarse_grid():
    cfg = small(dimension=3, families=("clayton",), reps=2, bernstein_k=(5,))
    assert cfg.make_grid().nodes.size == 17
    report = run_benchmark(cfg)
    assert report.get("clayton", 0.3, 200, "Be5", "mkse").mean > 0


def test_truth_grid():
    grid = Grid.regular(5)
    np.testing.assert_allclose(truth_grid(CopulaModel("independence"), grid, "copula"), np.outer(grid.nodes, grid.nodes))
    np.testing.assert_array_equal(truth_grid(CopulaModel("independence"), grid, "density"), np.ones((4, 4)))


@pytest.mark.parametrize(
    "kw",
    [dict(families=("nope",)), dict(target="cdf"), dict(grid="fine"), dict(reps=0), dict(ns=(2,)),
     dict(threads=0), dict(shrink_theta=(0.001,))],
)
def test_invalid_config(kw):
    with pytest.raises(ValueError):
        small(**kw)
