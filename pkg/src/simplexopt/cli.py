"""Command-line interface.

Subcommands:

* ``bench``    -- run a seeded multi-start campaign (flags or a key=value
                  config file) and emit a CSV or JSON report;
* ``optimize`` -- one optimization from a given start vector, printing the
                  solution and value;
* ``list``     -- print the benchmark registry.

The default worker count honors the SIMPLEXOPT_THREADS environment
variable. Exit status is 0 on success, 1 on runtime errors (with a
diagnostic on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import Optional

from .benchfns import BENCHMARK_NAMES, registry_lookup
from .errors import SimplexOptError
from .gcdvss import TuningParams, optimize
from .harness import CampaignConfig, emit_report, run_campaign
from .simplex import make_point, uniform_point

_TUNING_FLAGS = {
    # flag/config key -> TuningParams field
    "s_initial": "s_initial",
    "rho1": "rho1",
    "rho2": "rho2",
    "phi": "phi",
    "lambda": "sparsity",
    "max_iter": "max_iter",
    "max_runs": "max_runs",
    "tol_fun": "tol_fun",
}
_INT_FIELDS = {"max_iter", "max_runs"}


def _add_tuning_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tuning overrides (applied on top of the preset)")
    group.add_argument("--s-initial", dest="s_initial", type=float, help="initial global step size")
    group.add_argument("--rho1", type=float, help="step decay rate of the first run")
    group.add_argument("--rho2", type=float, help="step decay rate of later runs")
    group.add_argument("--phi", type=float, help="step size threshold ending a run")
    group.add_argument("--lambda", dest="sparsity", type=float, help="sparsity threshold")
    group.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap per run")
    group.add_argument("--max-runs", dest="max_runs", type=int, help="cap on chained runs")
    group.add_argument("--tol-fun", dest="tol_fun", type=float, help="stagnation threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplexopt",
        description="Derivative-free greedy coordinate-descent optimizer on the unit simplex.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a seeded multi-start benchmark campaign")
    bench.add_argument("--config", help="key=value file supplying defaults for any flag below")
    bench.add_argument("--function", help=f"benchmark name ({', '.join(BENCHMARK_NAMES)})")
    bench.add_argument("--dim", type=int, help="family dimension (n for power4, d for cube families)")
    bench.add_argument("--starts", type=int, help="number of random starting points (default 20)")
    bench.add_argument("--seed", type=int, help="campaign seed (default 0)")
    bench.add_argument("--preset", choices=("default", "pl1", "pl2"), help="tuning preset")
    bench.add_argument("--threads", type=int, help="concurrent starts (default $SIMPLEXOPT_THREADS or 1)")
    bench.add_argument("--trace", action="store_true", default=None, help="record per-iteration traces")
    bench.add_argument("--format", choices=("csv", "json"), help="report format (default csv)")
    bench.add_argument("--output", help="report path (default: standard output)")
    _add_tuning_arguments(bench)

    single = sub.add_parser("optimize", help="optimize a benchmark from one start point")
    single.add_argument("--function", required=True, help="benchmark name")
    single.add_argument("--dim", type=int, help="family dimension")
    single.add_argument("--start", help="comma-separated start vector (default: barycenter)")
    single.add_argument("--preset", choices=("default", "pl1", "pl2"), default="default")
    single.add_argument("--trace", action="store_true", help="print per-iteration progress")
    _add_tuning_arguments(single)

    sub.add_parser("list", help="print the benchmark registry")
    return parser


def _read_config(path: str) -> dict:
    """Flat key=value file mirroring the CLI flags; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SimplexOptError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _merged(args: argparse.Namespace, config: dict, key: str, default, cast):
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    if key in config:
        raw = config[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "yes", "on")
        return cast(raw)
    return default


def _tuning_from_args(args: argparse.Namespace, config: dict, preset: str) -> TuningParams:
    params = TuningParams.preset(preset)
    overrides = {}
    for key, field_name in _TUNING_FLAGS.items():
        cast = int if key in _INT_FIELDS else float
        # config keys use the flag spelling; Namespace uses the field name
        cli_value = getattr(args, field_name, None)
        if cli_value is not None:
            overrides[field_name] = cli_value
        elif key in config:
            overrides[field_name] = cast(config[key])
    return dataclasses.replace(params, **overrides) if overrides else params


def _cmd_bench(args: argparse.Namespace) -> int:
    config = _read_config(args.config) if args.config else {}
    function = _merged(args, config, "function", None, str)
    if function is None:
        raise SimplexOptError("bench needs --function (flag or config file)")
    preset = _merged(args, config, "preset", "default", str)
    env_threads = os.environ.get("SIMPLEXOPT_THREADS")
    threads = _merged(args, config, "threads", int(env_threads) if env_threads else 1, int)

    params = _tuning_from_args(args, config, preset)
    explicit = params != TuningParams.preset(preset)
    cfg = CampaignConfig(
        benchmark=function,
        dim=_merged(args, config, "dim", None, int),
        starts=_merged(args, config, "starts", 20, int),
        seed=_merged(args, config, "seed", 0, int),
        preset=params if explicit else preset,
        concurrency=threads,
        trace=bool(_merged(args, config, "trace", False, bool)),
        output_path=_merged(args, config, "output", None, str),
    )
    result = run_campaign(cfg)
    text = emit_report(result, format=_merged(args, config, "format", "csv", str), path=cfg.output_path)
    if cfg.output_path is None:
        sys.stdout.write(text)
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    spec = registry_lookup(args.function, args.dim)
    if args.start is not None:
        raw = [float(part) for part in args.start.split(",")]
        start = make_point(raw)
        if start.dim != spec.dim_simplex:
            raise SimplexOptError(
                f"start has {start.dim} coordinates; {spec.name} needs {spec.dim_simplex}"
            )
    else:
        start = uniform_point(spec.dim_simplex)

    params = _tuning_from_args(args, {}, args.preset)
    objective = spec.fresh_objective()
    result = optimize(objective, start, params, trace=args.trace)

    if args.trace:
        for run_index, run in enumerate(result.runs, 1):
            for record in run.trace or ():
                print(f"run {run_index} step {record.step:.3e} value {record.value!r}")
    print(f"function: {spec.name} (simplex dim {spec.dim_simplex})")
    print(f"value: {result.value!r}")
    print("solution:", " ".join(repr(float(c)) for c in result.solution.coords))
    print(
        f"runs: {len(result.runs)}  evaluations: {result.total_evaluations}  "
        f"converged: {str(result.converged).lower()}"
    )
    if spec.known_optimum_value is not None:
        gap = abs(result.value - spec.known_optimum_value)
        print(f"known optimum: {spec.known_optimum_value!r}  gap: {gap:.3e}")
    return 0


def _cmd_list(_args: argparse.Namespace) -> int:
    print(f"{'name':<15} {'dims':<22} optimum")
    rows = (
        ("gaussian_max", "2 (fixed)", "-8/(2*pi*0.1) at (0.25, 0.75)"),
        ("easom", "3 (fixed)", "-1 at the barycenter"),
        ("sin_nonconvex", "3 (fixed)", "-2 at the image of (2/7, 2/7)"),
        ("power4", "n >= 2 simplex coords", "-n at the last vertex"),
        ("ackley", "cube d >= 1 (+ slack)", "0 at the embedded origin"),
        ("griewank", "cube d >= 1 (+ slack)", "0 at the embedded origin"),
        ("rastrigin", "cube d >= 1 (+ slack)", "0 at the embedded origin"),
    )
    for name, dims, optimum in rows:
        print(f"{name:<15} {dims:<22} {optimum}")
    return 0


def cli_main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles usage errors itself
        return int(exc.code or 0)
    handlers = {"bench": _cmd_bench, "optimize": _cmd_optimize, "list": _cmd_list}
    try:
        return handlers[args.command](args)
    except SimplexOptError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
