"""Command line front end.

Four commands: compute (pair objects to matrix files), verify (static and
dynamical residual suites to a report plus figure), sweep (parameter grid
to CSV plus figure), validate-rep (defining-relations check of a shipped
or ingested representation).

Exit codes: 0 success, 1 residuals above tolerance, 2 evaluation failure
(resonant parameter, truncation that will not converge), 3 unusable input
(bad flags, malformed file).  The dynamical parameter is always entered
as pairings (mu|alpha_i); the multiplicative variable x_i = q^(-mu_i) is
shown in summaries but never accepted as input, so the factor-two
ambiguities between the two conventions cannot leak in through the
interface.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import fileio, plots
from .cartan import NormalOrdering, RootSystem, build_root_system
from .dynamical import (DynParam, TruncationPolicy, b_matrix,
                        convergence_margin, dynamic_checks, f_linear,
                        f_product, r_dyn)
from .errors import BadInput, EvaluationError, WorkbenchError
from .repspace import (Representation, osp12_rep, spin_rep_sl2,
                       validate_rep, vector_rep_b2, vector_rep_sln)
from .rmat import full_r, k_matrix, rhat, static_checks

_ALGEBRA_ALIASES = {
    "a1": "A1", "sl2": "A1",
    "a2": "A2", "sl3": "A2",
    "a3": "A3", "sl4": "A3",
    "b2": "B2", "so5": "B2",
    "osp12": "OSP12", "osp(1|2)": "OSP12",
}

_EXIT_RESIDUAL = 1
_EXIT_EVALUATION = 2
_EXIT_BAD_INPUT = 3


@dataclass
class RunConfig:
    """Everything one command invocation needs, parsed and checked."""

    command: str
    algebra: str
    reps: list[str] = field(default_factory=list)
    q: float = 0.5
    mu: list[float] = field(default_factory=list)
    method: str = "linear"
    tolerance: float = 1e-9
    max_terms: int = 200
    stop_tol: float = 1e-15
    ordering_index: int = 0
    out: str = "."
    grid: str | None = None

    def policy(self) -> TruncationPolicy:
        return TruncationPolicy(max_terms=self.max_terms,
                                stop_tol=self.stop_tol)


def canonical_algebra(name: str) -> str:
    key = name.strip()
    if key in ("A1", "A2", "A3", "B2", "OSP12"):
        return key
    try:
        return _ALGEBRA_ALIASES[key.lower()]
    except KeyError:
        raise BadInput(f"unknown algebra {name!r}")


def build_rep(spec: str, rs: RootSystem, q: float) -> Representation:
    """Resolve one rep specifier: spin:J, vector, osp3, or file:PATH."""
    spec = spec.strip()
    if spec.startswith("file:"):
        rep = fileio.read_representation(spec[len("file:"):])
        if rep.rs.algebra_id != rs.algebra_id:
            raise BadInput(
                f"file rep is for {rep.rs.algebra_id}, command uses "
                f"{rs.algebra_id}")
        if abs(rep.q - q) > 1e-12:
            raise BadInput(f"file rep has q={rep.q}, command uses q={q}")
        report = validate_rep(rep)
        if not report.passes:
            raise BadInput(
                f"ingested representation fails the validator "
                f"(worst residual {report.worst():.3e})")
        return rep
    if spec.startswith("spin:"):
        if rs.algebra_id != "A1":
            raise BadInput(f"spin:J specifiers need algebra A1/sl2, "
                           f"not {rs.algebra_id}")
        try:
            j = float(spec[len("spin:"):])
        except ValueError:
            raise BadInput(f"bad spin value in {spec!r}")
        return spin_rep_sl2(j, q)
    if spec == "vector":
        if rs.algebra_id == "A1":
            return spin_rep_sl2(0.5, q)
        if rs.algebra_id == "A2":
            return vector_rep_sln(3, q)
        if rs.algebra_id == "A3":
            return vector_rep_sln(4, q)
        if rs.algebra_id == "B2":
            return vector_rep_b2(q)
        raise BadInput(f"no vector module for {rs.algebra_id}")
    if spec == "osp3":
        if rs.algebra_id != "OSP12":
            raise BadInput("osp3 needs algebra OSP12")
        return osp12_rep(q)
    raise BadInput(f"unknown representation specifier {spec!r}")


def pick_ordering(rs: RootSystem, index: int) -> NormalOrdering:
    if not 0 <= index < len(rs.orderings):
        raise BadInput(
            f"{rs.algebra_id} ships {len(rs.orderings)} normal orderings; "
            f"index {index} is out of range")
    return rs.orderings[index]


def _mu_for(rs: RootSystem, q: float, values: list[float]) -> DynParam:
    if not values:
        raise BadInput("--mu is required for this command")
    vals = list(values)
    if len(vals) == 1 and rs.rank > 1:
        vals = vals * rs.rank
    if len(vals) != rs.rank:
        raise BadInput(
            f"--mu needs {rs.rank} pairings for {rs.algebra_id}, "
            f"got {len(vals)}")
    return DynParam(rs, q, tuple(vals))


def _x_display(mu: DynParam) -> str:
    xs = [f"{mu.q ** (-m):.6g}" for m in mu.m]
    return "(" + ", ".join(xs) + ")"


def _summary(name: str, matrix: np.ndarray) -> str:
    return (f"{name:10s} {matrix.shape[0]}x{matrix.shape[1]}  "
            f"max|entry| = {np.max(np.abs(matrix)):.6g}")


# ---------------------------------------------------------------------------
# commands


def cmd_compute(config: RunConfig) -> int:
    rs = build_root_system(config.algebra)
    ordering = pick_ordering(rs, config.ordering_index)
    if len(config.reps) != 2:
        raise BadInput("compute takes exactly 2 representations")
    r1 = build_rep(config.reps[0], rs, config.q)
    r2 = build_rep(config.reps[1], rs, config.q)
    mu = _mu_for(rs, config.q, config.mu)
    os.makedirs(config.out, exist_ok=True)
    print(f"x = {_x_display(mu)} (display only; inputs are pairings)")

    meta = {"algebra": rs.algebra_id, "q": config.q, "mu": list(mu.m),
            "reps": list(config.reps), "ordering": config.ordering_index}

    def emit(name: str, matrix: np.ndarray) -> None:
        fileio.write_matrix(os.path.join(config.out, f"{name}.json"),
                            name, matrix, meta)
        print(_summary(name, matrix))

    emit("rhat", rhat(r1, r2, ordering).matrix)
    emit("k", k_matrix(r1, r2).matrix)
    emit("r", full_r(r1, r2, ordering).matrix)
    emit("b", b_matrix(r2, mu).matrix)

    methods = (["linear", "product"] if config.method == "both"
               else [config.method])
    twist = None
    for method in methods:
        if method == "linear":
            twist = f_linear(r1, r2, ordering, mu).matrix
            emit("f_linear", twist)
        elif method == "product":
            result = f_product(r1, r2, ordering, mu, config.policy())
            twist = result.matrix.matrix
            emit("f_product", twist)
            print(f"           ({result.n_factors} factors, tail "
                  f"{result.tail_norm:.3e})")
        else:
            raise BadInput(f"unknown method {method!r}")

    emit("r_dyn", r_dyn(r1, r2, ordering, mu,
                        method=methods[0], policy=config.policy()).matrix)
    return 0


def cmd_verify(config: RunConfig) -> int:
    rs = build_root_system(config.algebra)
    ordering = pick_ordering(rs, config.ordering_index)
    if len(config.reps) != 3:
        raise BadInput("verify takes exactly 3 representations")
    reps = [build_rep(s, rs, config.q) for s in config.reps]
    mu = _mu_for(rs, config.q, config.mu)
    os.makedirs(config.out, exist_ok=True)

    ordering2 = rs.orderings[1] if len(rs.orderings) > 1 else None
    static = static_checks(reps[0], reps[1], reps[2], ordering,
                           ordering2=ordering2, tolerance=config.tolerance)
    dynamic = dynamic_checks(reps[0], reps[1], reps[2], ordering, mu,
                             policy=config.policy(),
                             tolerance=config.tolerance,
                             method=config.method if config.method != "both"
                             else "linear")

    report = {
        "command": "verify",
        "algebra": rs.algebra_id,
        "q": config.q,
        "mu": list(mu.m),
        "reps": list(config.reps),
        "tolerance": config.tolerance,
        "static": {
            "residuals": {
                "ybe": static.ybe,
                "quasitri_left": static.quasitri_left,
                "quasitri_right": static.quasitri_right,
                "ordering_independence": static.ordering_independence,
            },
            "pass": static.passes,
        },
        "dynamic": {
            "residuals": dynamic.residuals(),
            "pass": dynamic.passes,
            "errors": dict(dynamic.errors),
            "margin_min": dynamic.margin_min,
            "n_factors": dynamic.n_factors,
            "tail_norm": dynamic.tail_norm,
        },
        "pass": static.passes and dynamic.passes,
    }
    report_path = os.path.join(config.out, "verify_report.json")
    fileio.write_report(report_path, report)
    plots.render_verify_figure(report,
                               os.path.join(config.out, "verify_report.png"))

    for section in ("static", "dynamic"):
        for name, value in sorted(report[section]["residuals"].items()):
            shown = "-" if value is None else f"{value:.3e}"
            print(f"{section:8s} {name:18s} {shown}")
    if dynamic.errors:
        failing = ", ".join(f"{k}: {v}" for k, v in
                            sorted(dynamic.errors.items()))
        print(f"evaluation failure in {failing}", file=sys.stderr)
        return _EXIT_EVALUATION
    if not report["pass"]:
        print(f"residuals above tolerance {config.tolerance:g}",
              file=sys.stderr)
        return _EXIT_RESIDUAL
    print(f"all identities hold at tolerance {config.tolerance:g}")
    return 0


def parse_grid(spec: str) -> tuple[str, list[float]]:
    """Grid syntax: AXIS=START..END:STEP with AXIS one of mu, q."""
    try:
        axis, rang = spec.split("=", 1)
        span, step_s = rang.split(":", 1)
        start_s, end_s = span.split("..", 1)
        start, end, step = float(start_s), float(end_s), float(step_s)
    except ValueError:
        raise BadInput(
            f"bad grid {spec!r}; expected AXIS=START..END:STEP")
    axis = axis.strip()
    if axis not in ("mu", "q"):
        raise BadInput(f"grid axis must be mu or q, got {axis!r}")
    if step <= 0:
        raise BadInput("grid step must be positive")
    values = []
    v = start
    while v <= end + 1e-12:
        values.append(round(v, 12))
        v += step
    return axis, values


_SWEEP_COLUMNS = ("grid_axis", "grid_value", "q", "mu", "margin",
                  "n_factors", "linear_eq", "cocycle", "dynamical_ybe",
                  "exchange", "commutation", "product_vs_linear",
                  "shift_lemma", "worst_residual", "error")


def cmd_sweep(config: RunConfig) -> int:
    rs = build_root_system(config.algebra)
    ordering = pick_ordering(rs, config.ordering_index)
    if len(config.reps) not in (2, 3):
        raise BadInput("sweep takes 2 or 3 representations")
    if config.grid is None:
        raise BadInput("sweep requires --grid")
    axis, values = parse_grid(config.grid)
    os.makedirs(config.out, exist_ok=True)

    rows: list[dict] = []
    for value in values:
        q = value if axis == "q" else config.q
        mu_values = config.mu if axis == "q" else [value]
        row: dict = {"grid_axis": axis, "grid_value": value, "q": q,
                     "mu": None, "margin": None, "n_factors": None,
                     "worst_residual": None, "error": ""}
        for key in ("linear_eq", "cocycle", "dynamical_ybe", "exchange",
                    "commutation", "product_vs_linear", "shift_lemma"):
            row[key] = None
        try:
            reps = [build_rep(s, rs, q) for s in config.reps]
            if len(reps) == 2:
                reps.append(reps[1])
            mu = _mu_for(rs, q, list(mu_values))
            row["mu"] = "/".join(f"{m:g}" for m in mu.m)
            row["margin"] = convergence_margin(reps[1], mu).min_margin
            report = dynamic_checks(reps[0], reps[1], reps[2], ordering, mu,
                                    policy=config.policy(),
                                    tolerance=config.tolerance)
            row.update(report.residuals())
            row["n_factors"] = report.n_factors
            finite = [v for v in report.residuals().values()
                      if v is not None]
            row["worst_residual"] = max(finite) if finite else None
            if report.errors:
                row["error"] = "; ".join(
                    f"{k}: {v}" for k, v in sorted(report.errors.items()))
        except WorkbenchError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)

    csv_path = os.path.join(config.out, "sweep.csv")
    with open(csv_path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=_SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row.get(k))
                             for k in _SWEEP_COLUMNS})
    plots.render_sweep_figure(rows, os.path.join(config.out, "sweep.png"))

    evaluated = sum(1 for r in rows if not r["error"])
    print(f"{len(rows)} grid points, {evaluated} evaluated cleanly, "
          f"{len(rows) - evaluated} flagged; table in {csv_path}")
    return 0


def cmd_validate_rep(config: RunConfig) -> int:
    rs = build_root_system(config.algebra)
    if len(config.reps) != 1:
        raise BadInput("validate-rep takes exactly 1 representation")
    spec = config.reps[0]
    if spec.startswith("file:"):
        rep = fileio.read_representation(spec[len("file:"):])
        if rep.rs.algebra_id != rs.algebra_id:
            raise BadInput(
                f"file rep is for {rep.rs.algebra_id}, command uses "
                f"{rs.algebra_id}")
    else:
        rep = build_rep(spec, rs, config.q)
    report = validate_rep(rep)
    details = report.as_dict()
    residuals = {k: v for k, v in details.items()
                 if k not in ("tolerance", "pass")}
    for name, value in sorted(residuals.items()):
        print(f"{name:16s} {value:.3e}")
    if config.out != ".":
        os.makedirs(config.out, exist_ok=True)
        fileio.write_report(
            os.path.join(config.out, "validate_rep_report.json"),
            {"command": "validate-rep", "algebra": rs.algebra_id,
             "rep": spec, "q": rep.q, "residuals": residuals,
             "tolerance": details["tolerance"], "pass": details["pass"]})
    if report.passes:
        print("representation satisfies the defining and Serre relations")
        return 0
    print(f"validator failed (worst residual {report.max_residual:.3e})",
          file=sys.stderr)
    return _EXIT_RESIDUAL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtwist",
        description="R-matrices and dynamical twists of small-rank "
                    "quantum (super)groups, with residual verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, arity_hint: str) -> None:
        p.add_argument("--algebra", required=True,
                       help="A1/sl2, A2/sl3, A3/sl4, B2/so5, OSP12")
        p.add_argument("--reps", required=True,
                       help=f"comma-separated specifiers ({arity_hint}); "
                            "spin:J, vector, osp3, file:PATH")
        p.add_argument("--q", type=float, default=0.5)
        p.add_argument("--mu", default="",
                       help="comma-separated pairings (mu|alpha_i); one "
                            "value is broadcast to all simple roots")
        p.add_argument("--method", choices=("linear", "product", "both"),
                       default="linear")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--max-terms", type=int, default=200)
        p.add_argument("--stop-tol", type=float, default=1e-15)
        p.add_argument("--ordering", type=int, default=0,
                       help="index into the shipped normal orderings")
        p.add_argument("--out", default=".")

    p_compute = sub.add_parser("compute",
                               help="write the pair objects as matrix files")
    common(p_compute, "2 reps")

    p_verify = sub.add_parser("verify",
                              help="run the static and dynamical suites")
    common(p_verify, "3 reps")

    p_sweep = sub.add_parser("sweep", help="grid sweep to CSV and figure")
    common(p_sweep, "2 or 3 reps")
    p_sweep.add_argument("--grid", required=True,
                         help="AXIS=START..END:STEP with AXIS mu or q")

    p_val = sub.add_parser("validate-rep",
                           help="check defining and Serre relations")
    common(p_val, "1 rep")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    algebra = canonical_algebra(args.algebra)
    if not 0.0 < args.q < 1.0:
        raise BadInput(f"q must lie strictly inside (0,1), got {args.q}")
    if args.tol <= 0:
        raise BadInput("tolerance must be positive")
    if args.max_terms < 1:
        raise BadInput("max-terms must be at least 1")
    reps = [s for s in args.reps.split(",") if s.strip()]
    mu: list[float] = []
    if args.mu:
        try:
            mu = [float(v) for v in args.mu.split(",") if v.strip()]
        except ValueError:
            raise BadInput(f"bad --mu value in {args.mu!r}")
    return RunConfig(
        command=args.command,
        algebra=algebra,
        reps=reps,
        q=args.q,
        mu=mu,
        method=args.method,
        tolerance=args.tol,
        max_terms=args.max_terms,
        stop_tol=args.stop_tol,
        ordering_index=args.ordering,
        out=args.out,
        grid=getattr(args, "grid", None),
    )


_COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "validate-rep": cmd_validate_rep,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; keep 2 for evaluation failures
        # and report unusable flags as bad input
        return _EXIT_BAD_INPUT if exc.code not in (0, None) else 0
    try:
        config = config_from_args(args)
        return _COMMANDS[config.command](config)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_BAD_INPUT
    except EvaluationError as exc:
        print(f"evaluation failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return _EXIT_EVALUATION
    except WorkbenchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _EXIT_BAD_INPUT


def entrypoint() -> None:
    sys.exit(main())
