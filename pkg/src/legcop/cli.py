"""Command-line entry point: ``legcop {fit,simulate,benchmark,lscv-scan,spearman}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import reference
from .bench import BenchmarkConfig, default_threads, run_benchmark
from .coefficients import spearman_rho
from .estimators import FittedEstimator
from .grid import Grid, write_gnuplot_matrix, write_gnuplot_script, write_grid_csv
from .pseudo import to_pseudo
from .selection import DEFAULT_MAX_DEGREE, lscv_terms, scan_from_terms, select_degree
from .shrinkage import ShrinkageSpec, ShrunkEstimator


class InputError(ValueError):
    """Malformed input file; the message carries the offending line number."""


def read_numeric_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a header row plus numeric rows, reporting the first bad line."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InputError(f"{path}: file is empty")
        width = len(header)
        if width < 2:
            raise InputError(f"{path}, line 1: need at least 2 columns, header has {width}")
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise InputError(f"{path}, line {line}: expected {width} fields, got {len(row)}")
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                bad = next(c for c in row if not _is_float(c))
                raise InputError(f"{path}, line {line}: non-numeric value {bad!r}") from None
            if not all(np.isfinite(rows[-1])):
                raise InputError(f"{path}, line {line}: non-finite value")
    if not rows:
        raise InputError(f"{path}: no data rows")
    return [h.strip() for h in header], np.array(rows)


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _words(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _emit(payload: dict, fmt: str, path=None) -> None:
    if fmt == "json":
        text = json.dumps({"schema_version": 1, **payload}, indent=2, sort_keys=True) + "\n"
    else:
        text = "key,value\n" + "".join(f"{k},{_fmt(v)}\n" for k, v in payload.items())
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


# --------------------------------------------------------------------------
# subcommands


def cmd_fit(args) -> int:
    _, data = read_numeric_csv(args.input)
    u = to_pseudo(data)
    n, d = u.shape
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    summary: dict = {"n": n, "d": d}
    if n >= 3:
        scan = select_degree(u, args.max_degree)
        scan.to_csv(out / "lscv_scan.csv")
        summary["lscv_selected"] = scan.selected
    elif args.degree is None:
        raise InputError(f"{args.input}: degree selection needs n >= 3, got n = {n}")
    degree = scan.selected if args.degree is None else args.degree
    summary["degree"] = degree

    fit = FittedEstimator.fit(u, degree)
    fit.coefficients.to_csv(out / "coefficients.csv")
    if d == 2:
        summary["spearman_rho"] = spearman_rho(u)

    grid = Grid.regular(args.grid_t, d) if d == 2 or args.grid_t_set else Grid.coarse(d)
    if args.shrink_theta is not None:
        spec = ShrinkageSpec(_broadcast(args.shrink_theta, d))
        shrunk = ShrunkEstimator.fit(u, spec, degree)
        shrunk.coefficients.to_csv(out / "coefficients_shrunk.csv")
        dens = shrunk.density_grid(grid)
        summary["shrink_theta"] = list(spec.thetas)
    else:
        dens = fit.density_grid(grid)
    if args.clip_negative:
        dens = np.maximum(dens, 0.0)
    write_grid_csv(out / "density_grid.csv", grid, dens, "density")
    write_grid_csv(out / "copula_grid.csv", grid, fit.copula_grid(grid), "copula")
    if d == 2:
        write_gnuplot_matrix(out / "density.dat", grid, dens)
        write_gnuplot_script(out / "density.gp", "density.dat", f"density estimate, N = {degree}")
    _emit(summary, args.format, out / f"summary.{args.format}")
    return 0


def _broadcast(thetas: tuple[float, ...], d: int) -> tuple[float, ...]:
    if len(thetas) == 1:
        return thetas * d
    if len(thetas) != d:
        raise InputError(f"--shrink-theta has {len(thetas)} values for d = {d}")
    return thetas


def cmd_simulate(args) -> int:
    model = reference.from_kendall_tau(args.family, args.tau, args.dimension, args.dof)
    x = reference.sample(model, args.n, args.seed)
    header = ",".join(f"u_{j + 1}" for j in range(model.dimension))
    lines = [header] + [",".join(f"{v:.17g}" for v in row) for row in x]
    text = "\n".join(lines) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def cmd_benchmark(args) -> int:
    config = BenchmarkConfig(
        families=args.families,
        taus=args.taus,
        ns=args.n,
        reps=args.reps,
        seed=args.seed,
        grid_t=args.grid_t,
        dimension=args.dimension,
        target=args.target,
        max_degree=args.max_degree,
        degree=args.degree,
        shrink_theta=args.shrink_theta,
        relative=not args.absolute,
        threads=args.threads,
    )
    report = run_benchmark(config)
    out = args.out or args.output
    if out is None and args.json is None:
        report.write_csv(sys.stdout)
    if out is not None:
        report.to_csv(out)
    if args.json is not None:
        report.to_json(args.json)
    return 0


def cmd_lscv_scan(args) -> int:
    _, data = read_numeric_csv(args.input)
    u = to_pseudo(data)
    if u.shape[0] < 3:
        raise InputError(f"{args.input}: LSCV needs n >= 3, got n = {u.shape[0]}")
    scan = scan_from_terms(lscv_terms(u, (args.max_degree,) * u.shape[1], args.literal))
    if args.format == "json":
        _emit({"candidates": scan.candidates.tolist(), "scores": scan.scores.tolist(),
               "selected": scan.selected}, "json", args.output)
    elif args.output is None:
        sys.stdout.write("N,score\n" + "".join(f"{k},{s:.17g}\n" for k, s in zip(scan.candidates, scan.scores)))
    else:
        scan.to_csv(args.output)
    return 0


def cmd_spearman(args) -> int:
    _, data = read_numeric_csv(args.input)
    if data.shape[1] != 2:
        raise InputError(f"{args.input}: spearman needs exactly 2 columns, got {data.shape[1]}")
    _emit({"n": data.shape[0], "spearman_rho": spearman_rho(to_pseudo(data))}, args.format, args.output)
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", help="CSV file with a header row and one observation per row")
    shared.add_argument("--output", help="output file (directory for fit)")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--threads", type=int, default=default_threads())
    shared.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="legcop", description="Copula estimation by shifted Legendre projection."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[shared], help="fit the projection estimators to a CSV sample")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--degree", type=int, help="fixed truncation degree N")
    how.add_argument("--select", action="store_true", help="select N by LSCV (the default)")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--grid-t", type=int, default=None, help="regular grid j/T (default 100)")
    p.add_argument("--shrink-theta", type=_floats, help="tilting thetas, e.g. 0.001,0.001")
    p.add_argument("--clip-negative", action="store_true", help="set negative density values to 0")
    p.set_defaults(func=cmd_fit, required=("input", "output"))

    p = sub.add_parser("simulate", parents=[shared], help="draw a sample from a reference copula")
    p.add_argument("--family", required=True, choices=reference.FAMILIES)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--dof", type=int, default=17)
    p.set_defaults(func=cmd_simulate, required=())

    p = sub.add_parser("benchmark", parents=[shared], help="Monte-Carlo error report")
    p.add_argument("--families", type=_words, default=("frank",))
    p.add_argument("--taus", type=_floats, default=(0.3,))
    p.add_argument("--n", type=_ints, default=(500,))
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--grid-t", type=int, default=100)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--target", choices=("copula", "density"), default="copula")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--degree", type=int, help="fixed N instead of LSCV selection")
    p.add_argument("--shrink-theta", type=_floats, help="tilting thetas (density target only)")
    p.add_argument("--absolute", action="store_true", help="report absolute instead of relative errors")
    p.add_argument("--out", help="CSV report path")
    p.add_argument("--json", help="JSON report path")
    p.set_defaults(func=cmd_benchmark, required=())

    p = sub.add_parser("lscv-scan", parents=[shared], help="LSCV score for N = 0..max-degree")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.add_argument("--literal", action="store_true", help="sum over every index, structural ones included")
    p.set_defaults(func=cmd_lscv_scan, required=("input",))

    p = sub.add_parser("spearman", parents=[shared], help="Spearman's rho of a 2-column sample")
    p.set_defaults(func=cmd_spearman, required=("input",))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    missing = [f"--{name}" for name in args.required if getattr(args, name) is None]
    if missing:
        parser.error(f"{args.command} requires {', '.join(missing)}")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    if args.command == "fit":
        args.grid_t_set = args.grid_t is not None
        if args.grid_t is None:
            args.grid_t = 100
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"legcop {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
