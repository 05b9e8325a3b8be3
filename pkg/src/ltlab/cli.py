"""Command-line experiment runner.

Subcommands: constants, riesz, corpus, partition, verify, scan.  Every run
is a pure function of its effective configuration (flags over config-file
values over defaults), every report row carries a hash of that
configuration, and repeated runs emit byte-identical artifacts.  Exit codes:
0 success, 2 precondition failure, 3 a rigorously signed slack fell below
its tolerance.  Failures emit a one-line JSON error record on stderr.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .constants import SemiclassicalConstants
from .errors import PreconditionError, ToleranceError
from .inequalities import (
    aggregate_bound,
    calibrate_constant,
    coupled_epsilon,
    default_epsilon_grid,
    local_bound_check,
    lt_ratio,
    main_inequality_check,
    poincare_sobolev_step,
    state_functionals,
)
from .lattice_spectra import (
    Boundary,
    RieszMeanQuery,
    berezin_li_yau_gap,
    riesz_mean,
    weyl_ratio,
)
from .partition import group, group_inequality_check, partition_to_json, subdivide
from .states import (
    density,
    generate,
    gradient_density,
    hoffmann_ostenhof_check,
    kinetic_energy,
    mixed_corpus,
    read_state_file,
    thomas_fermi_term,
    write_state_file,
)
from .constants import kinetic_constant

OUTPUT_DIR_ENV = "LTLAB_OUTPUT_DIR"

REPORT_COLUMNS = (
    "state_id",
    "inequality_id",
    "d",
    "N",
    "epsilon",
    "lambda",
    "lhs",
    "rhs",
    "slack",
    "minimal_constant",
    "grid_n",
    "config_hash",
)

RIGOROUS_TOLERANCES = {
    "hoffmann_ostenhof": 1e-8,
    "local_bound_exact": 1e-2,
    "aggregate": 1e-2,
}

_HASH_EXCLUDED_KEYS = {"subcommand", "out", "output_dir", "config", "workers", "func"}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_hash(args: argparse.Namespace) -> str:
    """Short hash of the effective run parameters (outputs and workers excluded)."""
    items = []
    for key, value in sorted(vars(args).items()):
        if key in _HASH_EXCLUDED_KEYS:
            continue
        items.append(f"{key}={_fmt(value)}")
    items.append(f"version={__version__}")
    digest = hashlib.sha256("\n".join(items).encode()).hexdigest()
    return digest[:12]


def load_config_file(path: str) -> dict[str, str]:
    """Flat key=value lines; blank lines and # comments ignored."""
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PreconditionError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve_out(path: str | None):
    if path is None or path == "-":
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _write_text(path: str | None, text: str) -> None:
    resolved = _resolve_out(path)
    if resolved is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(resolved) or ".", exist_ok=True)
        with open(resolved, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def rows_to_csv(rows: list[dict], columns=REPORT_COLUMNS) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[dict], meta: dict) -> str:
    return json.dumps({"meta": meta, "rows": rows}, sort_keys=True, separators=(",", ":")) + "\n"


def emit_plot_data(path: str | None, headers: list[str], columns: list[list], footer: list[str] = ()) -> None:
    """Plain whitespace-separated columns with a # header, plotting-tool friendly."""
    lines = ["# " + " ".join(headers)]
    for values in zip(*columns) if columns else []:
        lines.append(" ".join(_fmt(v) for v in values))
    lines.extend(footer)
    _write_text(path, "\n".join(lines) + "\n")


def _emit_report(args, rows: list[dict]) -> None:
    if args.format == "json":
        meta = {
            "config_hash": rows[0]["config_hash"] if rows else config_hash(args),
            "version": __version__,
            "subcommand": args.subcommand,
        }
        _write_text(args.out, rows_to_json(rows, meta))
    else:
        _write_text(args.out, rows_to_csv(rows))


def _check_tolerances(rows: list[dict]) -> None:
    for row in rows:
        tol = RIGOROUS_TOLERANCES.get(row.get("inequality_id"))
        if tol is None:
            continue
        if row.get("skip_tolerance"):
            continue
        lhs = row.get("lhs") or 0.0
        slack = row.get("slack")
        if slack is not None and slack < -tol * max(abs(lhs), 1e-30):
            raise ToleranceError(
                f"{row['inequality_id']} slack {slack} below -{tol}*|lhs| "
                f"for state {row.get('state_id')}"
            )


def cmd_constants(args) -> int:
    digest = config_hash(args)
    rows = []
    for d in args.d:
        table = SemiclassicalConstants.for_dimension(d, args.q)
        rows.append(
            {
                "d": d,
                "q": args.q,
                "ball_volume": table.ball_volume,
                "kinetic": table.kinetic,
                "eigenvalue": table.eigenvalue,
                "config_hash": digest,
            }
        )
    columns = ("d", "q", "ball_volume", "kinetic", "eigenvalue", "config_hash")
    if args.format == "json":
        _write_text(args.out, rows_to_json(rows, {"config_hash": digest, "version": __version__}))
    else:
        _write_text(args.out, rows_to_csv(rows, columns))
    return 0


def cmd_riesz(args) -> int:
    digest = config_hash(args)
    if args.mu is not None:
        mus = [args.mu]
    else:
        if args.mu_min is None or args.mu_max is None:
            raise PreconditionError("give either --mu or both --mu-min and --mu-max")
        if not 0.0 < args.mu_min <= args.mu_max:
            raise PreconditionError("need 0 < mu-min <= mu-max")
        span = math.log(args.mu_max / args.mu_min)
        mus = [
            args.mu_min * math.exp(span * i / max(args.mu_points - 1, 1))
            for i in range(args.mu_points)
        ]
    boundary = Boundary(args.boundary)
    rows = []
    for mu in mus:
        result = riesz_mean(RieszMeanQuery(args.k, mu, boundary))
        row = {
            "k": args.k,
            "mu": mu,
            "boundary": boundary.value,
            "value": result.value,
            "contributing_points": result.contributing_points,
            "bly_gap": None,
            "weyl_ratio": None,
            "config_hash": digest,
        }
        if boundary is Boundary.DIRICHLET:
            row["bly_gap"] = berezin_li_yau_gap(args.k, mu)
            row["weyl_ratio"] = weyl_ratio(args.k, mu)
        rows.append(row)
    columns = ("k", "mu", "boundary", "value", "contributing_points", "bly_gap", "weyl_ratio", "config_hash")
    if args.format == "json":
        _write_text(args.out, rows_to_json(rows, {"config_hash": digest, "version": __version__}))
    else:
        _write_text(args.out, rows_to_csv(rows, columns))
    return 0


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    return tuple(int(part) for part in text.split(",") if part.strip())


def _build_corpus(args):
    return mixed_corpus(
        args.d,
        args.n,
        seed=args.seed,
        box_sizes=_int_list(args.box_sizes),
        slater_sizes=_int_list(args.slater_sizes),
        bump_counts=_int_list(args.bump_counts),
    )


def cmd_corpus(args) -> int:
    digest = config_hash(args)
    out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for state_id, state in _build_corpus(args):
        rho = density(state)
        path = os.path.join(out_dir, f"{state_id}-d{args.d}-n{args.n}.state")
        write_state_file(path, state, rho if args.with_density else None)
        rows.append(
            {
                "state_id": state_id,
                "family": state_id.split("-")[0],
                "d": args.d,
                "N": state.num_orbitals,
                "grid_n": args.n,
                "seed": args.seed,
                "mass": rho.mass(),
                "kinetic": kinetic_energy(state),
                "path": path,
                "config_hash": digest,
            }
        )
    columns = ("state_id", "family", "d", "N", "grid_n", "seed", "mass", "kinetic", "path", "config_hash")
    if args.format == "json":
        _write_text(args.out, rows_to_json(rows, {"config_hash": digest, "version": __version__}))
    else:
        _write_text(args.out, rows_to_csv(rows, columns))
    return 0


def cmd_partition(args) -> int:
    state, rho = read_state_file(args.state)
    if rho is None:
        rho = density(state)
    if args.lam is not None:
        lam = args.lam
    else:
        lam = args.lambda_frac * rho.mass()
    tree = subdivide(rho, lam, max_depth=args.max_depth)
    groups = group(tree)
    check = group_inequality_check(groups, tree.dimension, lam)
    payload = partition_to_json(tree, groups)
    payload["config_hash"] = config_hash(args)
    payload["group_inequality_total"] = check.total
    payload["group_inequality_values"] = list(check.per_group)
    _write_text(args.out, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
    return 0


def _verify_state(task):
    """All report rows for one state; pure, so states can run in parallel."""
    state_id, state, args = task
    d = state.dimension
    rho = density(state)
    grad = gradient_density(rho)
    funcs = state_functionals(state, rho)
    lam = args.lambda_frac * funcs.mass
    rows = []

    def add(inequality_id, lhs, rhs, slack, minimal, epsilon=None, lam_val=None, **extra_cols):
        row = {
            "state_id": state_id,
            "inequality_id": inequality_id,
            "d": d,
            "N": state.num_orbitals,
            "epsilon": epsilon,
            "lambda": lam_val,
            "lhs": lhs,
            "rhs": rhs,
            "slack": slack,
            "minimal_constant": minimal,
            "grid_n": state.grid_n,
        }
        row.update({k: v for k, v in extra_cols.items() if v is not None})
        rows.append(row)

    lhs, rhs, slack = hoffmann_ostenhof_check(state, rho=rho, check=False)
    # Rank-one states saturate the bound, so their signed discretization
    # defect is exempt from the strict tolerance gate.
    add("hoffmann_ostenhof", lhs, rhs, slack, None,
        skip_tolerance=True if state.num_orbitals == 1 else None)

    kin = kinetic_constant(d, state.spin_states)
    ratio = lt_ratio(state, funcs)
    add("lt_ratio", funcs.kinetic, kin * funcs.thomas_fermi,
        funcs.kinetic - kin * funcs.thomas_fermi, ratio)

    tree = subdivide(rho, lam)
    groups = group(tree)
    worst = None
    local_tables = []
    for index in tree.leaves():
        rep = local_bound_check(state, tree.cubes[index], rho=rho)
        rel = rep.slack / rep.lhs if rep.lhs > 0.0 else 0.0
        local_tables.append(
            {"corner": list(tree.cubes[index].corner), "side": tree.cubes[index].side,
             "lhs": rep.lhs, "rhs": rep.rhs, "slack": rep.slack}
        )
        if worst is None or rel < worst[0]:
            worst = (rel, rep)
    if worst is not None:
        rep = worst[1]
        add("local_bound_exact", rep.lhs, rep.rhs, rep.slack, None, lam_val=lam,
            per_cube=local_tables if args.format == "json" else None)

    agg = aggregate_bound(state, tree, groups, rho)
    add("aggregate", agg.lhs, agg.rhs, agg.slack, agg.minimal_constant, lam_val=lam,
        skip_tolerance=agg.extras["lambda_above_trace"] or None)

    eps_c = coupled_epsilon(lam, d)
    worst_ps = None
    for index in tree.leaves():
        rep = poincare_sobolev_step(rho, tree.cubes[index], eps_c, grad=grad)
        if worst_ps is None or (rep.minimal_constant or 0.0) > (worst_ps.minimal_constant or 0.0):
            worst_ps = rep
    if worst_ps is not None:
        add("poincare_sobolev", worst_ps.lhs, worst_ps.rhs, worst_ps.slack,
            worst_ps.minimal_constant, epsilon=eps_c, lam_val=lam)

    grid = default_epsilon_grid(args.eps_points, args.eps_lo, args.eps_hi)
    for eps in grid:
        rep = main_inequality_check(state, eps, functionals=funcs)
        add("main", rep.lhs, rep.rhs, rep.slack, rep.minimal_constant, epsilon=eps)
    return rows


def cmd_verify(args) -> int:
    digest = config_hash(args)
    corpus = _build_corpus(args)
    tasks = [(state_id, state, args) for state_id, state in corpus]
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            blocks = list(pool.map(_verify_state, tasks))
    else:
        blocks = [_verify_state(task) for task in tasks]
    rows = []
    for block in blocks:
        for row in block:
            row["config_hash"] = digest
            rows.append(row)
    _emit_report(args, rows)
    _check_tolerances(rows)
    return 0


def cmd_scan(args) -> int:
    digest = config_hash(args)
    if not 0 < args.n_min <= args.n_max:
        raise PreconditionError("need 0 < n-min <= n-max")
    sizes = []
    value = args.n_min
    while value <= args.n_max:
        sizes.append(value)
        value *= 2
    kin_col, tf_col, ratio_col, grad_col = [], [], [], []
    for count in sizes:
        state = generate(args.family, args.d, args.grid_n, count, seed=args.seed)
        funcs = state_functionals(state)
        kin_col.append(funcs.kinetic)
        tf_col.append(funcs.thomas_fermi)
        ratio_col.append(funcs.kinetic / funcs.thomas_fermi)
        grad_col.append(funcs.gradient)
    footer = [f"# config_hash {digest}"]
    if len(sizes) >= 2:
        log_n = np.log(sizes)
        kin_slope = float(np.polyfit(log_n, np.log(kin_col), 1)[0])
        grad_slope = float(np.polyfit(log_n, np.log(grad_col), 1)[0])
        footer.append(f"# kinetic_exponent {repr(kin_slope)}")
        footer.append(f"# gradient_exponent {repr(grad_slope)}")
    emit_plot_data(
        args.out,
        ["N", "kinetic", "thomas_fermi", "lt_ratio", "gradient_term"],
        [sizes, kin_col, tf_col, ratio_col, grad_col],
        footer,
    )
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--config", default=None, help="flat key=value config file")


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--n", type=int, default=256, help="grid cells per axis")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--box-sizes", default="1,4,12")
    parser.add_argument("--slater-sizes", default="3,8,16")
    parser.add_argument("--bump-counts", default="1,2,4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlab",
        description="Desk-scale numerical checks for kinetic-energy inequalities.",
    )
    parser.add_argument("--version", action="version", version=f"ltlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("constants", help="semiclassical constants table")
    p.add_argument("--d", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--q", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("riesz", help="Riesz means, gaps and Weyl ratios")
    p.add_argument("--k", type=int, required=True, help="lattice dimension")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--mu-min", type=float, default=None)
    p.add_argument("--mu-max", type=float, default=None)
    p.add_argument("--mu-points", type=int, default=50)
    p.add_argument("--boundary", choices=("dirichlet", "neumann"), default="dirichlet")
    _add_common(p)
    p.set_defaults(func=cmd_riesz)

    p = sub.add_parser("corpus", help="generate and serialize test states")
    _add_corpus_flags(p)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--with-density", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("partition", help="dyadic partition and groups of a stored state")
    p.add_argument("--state", required=True, help="state file from the corpus subcommand")
    p.add_argument("--lam", type=float, default=None, help="mass threshold")
    p.add_argument("--lambda-frac", type=float, default=0.5,
                   help="threshold as a fraction of total mass when --lam is absent")
    p.add_argument("--max-depth", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="full inequality suite over a corpus")
    _add_corpus_flags(p)
    p.add_argument("--lambda-frac", type=float, default=0.5)
    p.add_argument("--eps-points", type=int, default=17)
    p.add_argument("--eps-lo", type=float, default=0.05)
    p.add_argument("--eps-hi", type=float, default=0.85)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="growth of functionals over orbital count")
    p.add_argument("--family", choices=("box", "slater", "bumps"), default="box")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n-min", type=int, required=True, help="smallest orbital count")
    p.add_argument("--n-max", type=int, required=True, help="largest orbital count")
    p.add_argument("--grid-n", type=int, default=2048)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_scan)
    return parser


_FAMILY_ALIASES = {"box": "box_eigenstates", "slater": "random_slater", "bumps": "gaussian_bumps"}


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Fold config-file values in as subparser defaults (flags still win)."""
    if "--config" not in argv:
        return
    path = argv[argv.index("--config") + 1]
    values = load_config_file(path)
    if not values:
        return
    subcommand = next((a for a in argv if not a.startswith("-")), None)
    actions = {}
    for action in parser._subparsers._group_actions[0].choices[subcommand]._actions:
        actions[action.dest] = action
    converted = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None:
            raise PreconditionError(f"config key {key!r} is not a flag of {subcommand!r}")
        if isinstance(action, argparse._StoreTrueAction):
            converted[key] = text.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            converted[key] = [action.type(part) for part in text.split()]
        elif action.type is not None:
            converted[key] = action.type(text)
        else:
            converted[key] = text
    parser._subparsers._group_actions[0].choices[subcommand].set_defaults(**converted)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "family", None) in _FAMILY_ALIASES:
            args.family = _FAMILY_ALIASES[args.family]
        return args.func(args)
    except ToleranceError as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "exit_code": 3}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 3
    except (PreconditionError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "exit_code": 2}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
