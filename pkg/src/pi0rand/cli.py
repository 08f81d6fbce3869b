"""Command-line front end.

Subcommands:

* ``analyze``  - read a p-value CSV (header ``p_lfc``), pick the data-driven
  threshold c0, and report the estimates.
* ``simulate`` - Monte Carlo bias/variance/MSE study over a threshold grid.
* ``curves``   - exact expectation curve h(lambda, .) or randomized-p-value
  cdf tables as CSV.
* ``cstar``    - exact bias-minimizing threshold for a model configuration.

Exit codes: 0 on success, 2 on usage or validation errors, 1 on internal
errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .pi0 import EstimatorConfig, cstar_search, h_curve, schweder_spjotvoll
from .pvalues import PValueVector, RandomizationRule, randomize_vector
from .simkit import ModelSpec, SimulationPlan, cdf_curves, run_mc
from .statdist import RngStream
from .tuning import candidate_set, conditional_expectation, select_c0

__all__ = ["main"]


class CliError(Exception):
    """Validation failure that should exit with code 2."""


def _read_pvalue_csv(path):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc
    lines = raw.replace("\r\n", "\n").split("\n")
    rows = [(i + 1, line.strip()) for i, line in enumerate(lines) if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise CliError(f"{path}: empty input")
    header_no, header = rows[0]
    columns = [col.strip() for col in header.split(",")]
    if "p_lfc" not in columns:
        raise CliError(f"{path}: row {header_no}: header must contain a p_lfc column")
    col = columns.index("p_lfc")
    values = []
    for line_no, line in rows[1:]:
        fields = line.split(",")
        if len(fields) != len(columns):
            raise CliError(f"{path}: row {line_no}: expected {len(columns)} fields")
        try:
            v = float(fields[col])
        except ValueError as exc:
            raise CliError(f"{path}: row {line_no}: p_lfc value {fields[col]!r} is not a number") from exc
        if not 0.0 <= v <= 1.0:
            raise CliError(f"{path}: row {line_no}: p_lfc value {v!r} outside [0, 1]")
        values.append(v)
    if len(values) < 2:
        raise CliError(f"{path}: need at least two p-values, got {len(values)}")
    return np.array(values)


def _parse_grid(text):
    """Grid flag syntax: 'start:step:stop' or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"--c-grid: expected start:step:stop, got {text!r}")
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError as exc:
            raise CliError(f"--c-grid: non-numeric bound in {text!r}") from exc
        if step <= 0 or stop <= start:
            raise CliError("--c-grid: need step > 0 and stop > start")
        count = int(round((stop - start) / step))
        grid = np.linspace(start, stop, count + 1)
    else:
        try:
            grid = np.array([float(p) for p in text.split(",") if p.strip() != ""])
        except ValueError as exc:
            raise CliError(f"--c-grid: non-numeric entry in {text!r}") from exc
    if grid.size == 0:
        raise CliError("--c-grid: empty grid")
    return grid


def _model_spec(args):
    if not 0.0 <= args.pi0 <= 1.0:
        raise CliError(f"--pi0 must lie in [0, 1], got {args.pi0}")
    if args.m < 2:
        raise CliError(f"--m must be >= 2, got {args.m}")
    n_null = int(round(args.pi0 * args.m))
    groups = []
    if n_null > 0:
        groups.append((n_null, args.theta_null))
    if args.m - n_null > 0:
        groups.append((args.m - n_null, args.theta_alt))
    model = "z" if args.model == "z" else "two_sample"
    try:
        if model == "z":
            return ModelSpec(
                model="z",
                groups=tuple(groups),
                n=args.n,
                dependence=args.copula,
                nu=args.nu,
            )
        return ModelSpec(
            model="two_sample",
            groups=tuple(groups),
            n1=args.n1,
            n2=args.n2,
            sigma=args.sigma,
            dependence=args.copula,
            nu=args.nu,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


_DEFAULT_GRID = "0:0.05:1"


def _check_lambda(lam):
    if not 0.0 < lam < 1.0:
        raise CliError(f"--lambda must lie in (0, 1), got {lam}")
    return lam


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_analyze(args):
    lam = _check_lambda(args.lam)
    values = _read_pvalue_csv(args.input)
    p = PValueVector(values, kind="external")
    sel = select_c0(p, lam)
    cands = candidate_set(p, lam)
    variant = args.variant.replace("-", "_")
    cfg = EstimatorConfig(lam, variant)
    rng = RngStream(args.seed, 0)
    prand = randomize_vector(p, RandomizationRule.constant(sel.c0), rng)
    pi0_rand = schweder_spjotvoll(prand, cfg)
    pi0_lfc = schweder_spjotvoll(p, cfg)
    cond = conditional_expectation(p, lam, sel.c0, variant)
    lines = [
        f"m = {p.m}",
        f"lambda = {lam!r}",
        f"variant = {variant}",
        f"candidates = {len(cands)}",
        f"c0 = {sel.c0!r}",
        f"g_max = {sel.g_max!r}",
        f"conditional_expectation_at_c0 = {cond!r}",
        f"pi0_hat_at_c0 = {pi0_rand!r}",
        f"pi0_hat_lfc = {pi0_lfc!r}",
    ]
    print("\n".join(lines))
    if args.out:
        buf = [
            "# kind=randomized",
            f"# lambda={lam!r}",
            f"# c0={sel.c0!r}",
            f"# seed={args.seed}",
            "p_lfc",
        ]
        buf.extend(repr(float(v)) for v in prand.values)
        _write_text(args.out, "\n".join(buf) + "\n")
    return 0


def _cmd_simulate(args):
    lam = _check_lambda(args.lam)
    if args.reps < 1:
        raise CliError(f"--reps must be a positive integer, got {args.reps}")
    spec = _model_spec(args)
    grid = _parse_grid(args.c_grid)
    try:
        plan = SimulationPlan(
            spec=spec,
            lam=lam,
            c_grid=tuple(grid),
            replicates=args.reps,
            seed=args.seed,
            estimator_variant=args.variant.replace("-", "_"),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    summary = run_mc(plan, workers=args.workers)
    _write_text(args.out, summary.to_csv_string())
    return 0


def _cmd_curves(args):
    lam = _check_lambda(args.lam)
    spec = _model_spec(args)
    if args.quantity == "h":
        grid = _parse_grid(args.c_grid)
        if np.any(np.diff(grid) <= 0.0):
            raise CliError("--c-grid must be strictly increasing")
        table = h_curve(spec.population(), lam, grid)
    else:
        cs = _parse_grid(args.c_grid if args.c_grid != _DEFAULT_GRID else "0,0.25,0.5,0.75,1")
        t = np.linspace(0.0, 1.0, args.t_points)
        law = spec.marginal_law(args.theta_null)
        table = cdf_curves(law, cs, t)
    _write_text(args.out, table.to_csv_string())
    return 0


def _cmd_cstar(args):
    lam = _check_lambda(args.lam)
    spec = _model_spec(args)
    if not 0.0 < args.resolution <= 1e-3:
        raise CliError(f"--resolution must lie in (0, 1e-3], got {args.resolution}")
    result = cstar_search(spec.population(), lam, args.resolution)
    print(f"c_star = {result.c_star!r}")
    print(f"h_min = {result.h_min!r}")
    return 0


def _add_model_flags(sub):
    sub.add_argument("--model", choices=("z", "two-sample"), default="z")
    sub.add_argument("--m", type=int, default=1000, help="number of hypotheses")
    sub.add_argument("--n", type=int, default=50, help="Z model sample size")
    sub.add_argument("--n1", type=int, default=10)
    sub.add_argument("--n2", type=int, default=10)
    sub.add_argument("--sigma", type=float, default=1.0)
    sub.add_argument("--pi0", type=float, default=0.7, help="fraction of true nulls")
    sub.add_argument("--theta-null", type=float, default=0.0, help="effect of the null group")
    sub.add_argument("--theta-alt", type=float, default=0.5, help="effect of the alternative group")
    sub.add_argument("--copula", choices=("independent", "gumbel"), default="independent")
    sub.add_argument("--nu", type=float, default=2.0, help="Gumbel copula parameter")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pi0rand",
        description="Randomized p-values and tuning for the Schweder-Spjotvoll estimator.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    analyze = subs.add_parser("analyze", help="select c0 from a p-value CSV and estimate pi0")
    analyze.add_argument("input", help="CSV with a p_lfc column")
    analyze.add_argument("--lambda", dest="lam", type=float, default=0.5)
    analyze.add_argument("--seed", type=int, default=0)
    analyze.add_argument("--variant", choices=("plain", "storey-plus"), default="plain")
    analyze.add_argument("--out", help="write the randomized p-values to this CSV")
    analyze.set_defaults(func=_cmd_analyze)

    simulate = subs.add_parser("simulate", help="Monte Carlo study over a threshold grid")
    _add_model_flags(simulate)
    simulate.add_argument("--lambda", dest="lam", type=float, default=0.5)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--variant", choices=("plain", "storey-plus"), default="plain")
    simulate.add_argument("--reps", type=int, default=10_000)
    simulate.add_argument("--c-grid", default=_DEFAULT_GRID)
    simulate.add_argument("--workers", type=int, default=1)
    simulate.add_argument("--out", help="output CSV path (default stdout)")
    simulate.set_defaults(func=_cmd_simulate)

    curves = subs.add_parser("curves", help="exact h or cdf curve tables")
    _add_model_flags(curves)
    curves.add_argument("--lambda", dest="lam", type=float, default=0.5)
    curves.add_argument("--quantity", choices=("h", "cdf"), default="h")
    curves.add_argument("--c-grid", default=_DEFAULT_GRID)
    curves.add_argument("--t-points", type=int, default=1001)
    curves.add_argument("--out", help="output CSV path (default stdout)")
    curves.set_defaults(func=_cmd_curves)

    cstar = subs.add_parser("cstar", help="exact bias-minimizing threshold")
    _add_model_flags(cstar)
    cstar.add_argument("--lambda", dest="lam", type=float, default=0.5)
    cstar.add_argument("--resolution", type=float, default=1e-3)
    cstar.set_defaults(func=_cmd_cstar)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive internal-error path
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
