"""Command line interface.

    cmlegendre enumerate --d 4 --allow-square
    cmlegendre solve --d 3 --system 2
    cmlegendre jtau --tau 0,0,1,2
    cmlegendre isogeny --lambda -1 --k 3 --tau i
    cmlegendre table

Every command prints a JSON report (or a line-per-value rendering of the same
report with ``--format text``).  Exit status: 0 success, 2 usage, 3 no
solutions or coverage gap, 4 ambiguous match, 5 table row mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import sympy
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from . import __version__
from .errors import (
    AmbiguousMatch,
    CMError,
    DegenerateBranch,
    DegreeTooSmall,
    LambdaDegenerate,
    NoSolutionsFound,
    NotInUpperHalfPlane,
    RowMismatch,
    SquareVariantForbidden,
    VariantParityMismatch,
)
from .isogeny import BRANCHES_2, isogeny_step, lambda2_of
from .modular import DEFAULT_HEIGHT_BOUND, AlgebraicCandidate, j_q_expansion, j_theta_oracle, recognize_quadratic
from .mpcore import CBall
from .pipeline import (
    TableRun,
    coverage,
    default_variants,
    distinct_j,
    load_golden,
    solve_degree,
    sympy_ball,
)
from .qforms import (
    SystemVariant,
    TauRep,
    distinct_periods,
    endo_order,
    enumerate_reps,
    form_of,
    is_square,
    predict_system,
)
from .solver import SolutionRecord, SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_NOSOL, EXIT_AMBIGUOUS, EXIT_ROW = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    config: Dict[str, Any]
    results: Any
    version: str = __version__
    timing: Optional[float] = None
    status: str = "ok"


def serialize(report: RunReport) -> str:
    return json.dumps(asdict(report), indent=1, sort_keys=True)


def parse(text: str) -> RunReport:
    return RunReport(**json.loads(text))


# ---------------------------------------------------------------------------
# JSON encoders


def ball_json(b: CBall) -> Dict[str, str]:
    re_, im, rad = b.to_strings()
    return {"re": re_, "im": im, "rad": rad}


def tau_json(t: TauRep, prec: int) -> Dict[str, Any]:
    return {"D": t.D, "a": t.a, "u": t.u, "b": t.b, "tau": ball_json(t.tau(prec)),
            "form": list(form_of(t).coeffs)}


def poly_json(cand: Optional[AlgebraicCandidate]) -> Optional[Dict[str, Any]]:
    if cand is None:
        return None
    return {"degree": cand.degree, "min_poly": [str(c) for c in cand.min_poly],
            "value": sympy.sstr(cand.sympy_value())}


def _recognize(j: CBall, height_bound: int) -> Optional[AlgebraicCandidate]:
    try:
        return recognize_quadratic(j, height_bound)
    except CMError:
        return None


def record_json(rec: SolutionRecord, height_bound: int) -> Dict[str, Any]:
    return {
        "lambda": ball_json(rec.lam),
        "j": ball_json(rec.j_value),
        "residual": rec.residual_norm.to_strings(12)[0],
        "assignment": {k: ball_json(v) for k, v in sorted(rec.assignment.items())},
        "orbit": [ball_json(m.lam) for m in rec.orbit_members()],
        "recognized": poly_json(_recognize(rec.j_value, height_bound)),
    }


# ---------------------------------------------------------------------------
# argument parsing helpers

_TRANSFORMS = standard_transformations + (implicit_multiplication_application,)


def parse_number(text: str) -> sympy.Expr:
    """A closed-form complex number: "3+2*sqrt(2)", "3+2√2", "(1+3sqrt7 i)/2", "-1"."""
    s = text.strip().replace("√", "sqrt")
    s = re.sub(r"sqrt\s*(\d+)", r"sqrt(\1)", s)
    try:
        expr = parse_expr(s, local_dict={"i": sympy.I, "I": sympy.I}, transformations=_TRANSFORMS)
    except Exception as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc
    if expr.free_symbols:
        raise UsageError(f"{text!r} is not a number")
    return expr


def parse_tau_rep(text: str) -> TauRep:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--tau expects u,a,b,D")
    try:
        u, a, b, D = (int(p) for p in parts)
        return TauRep(D, a, u, b)
    except ValueError as exc:
        raise UsageError(f"bad --tau {text!r}: {exc}") from exc


def parse_tau_any(text: str, prec: int):
    """Either a TauRep "u,a,b,D" or a closed form such as "i", "sqrt2i"."""
    if text.count(",") == 3:
        t = parse_tau_rep(text)
        return t, t.tau(prec)
    return None, sympy_ball(str(parse_number(text)), prec)


def config_of(args) -> Dict[str, Any]:
    cfg = {"precision": args.precision, "seed": args.seed, "format": args.format}
    for name in ("d", "system", "starts", "tol", "qterms", "height_bound", "allow_square",
                 "tau", "complex", "k", "branch"):
        if hasattr(args, name):
            cfg[name] = getattr(args, name)
    if hasattr(args, "lam"):
        cfg["lambda"] = args.lam
    return cfg


def solver_config(args) -> SolverConfig:
    kw: Dict[str, Any] = {"seed": args.seed, "precision": args.precision, "starts": args.starts}
    if args.tol is not None:
        kw["newton_tol"] = 2.0 ** -abs(args.tol)
    try:
        return SolverConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> Any:
    if args.d < 2:
        raise DegreeTooSmall(f"D = {args.d} < 2")
    if is_square(args.d) and not args.allow_square:
        raise UsageError(f"D = {args.d} is a perfect square; pass --allow-square")
    reps = enumerate_reps(args.d, allow_square=args.allow_square)
    out = []
    for key, group in distinct_periods(reps).items():
        t = group[0]
        order = endo_order(t)
        out.append({
            **tau_json(t, args.precision),
            "label": t.label(),
            "period_form": list(key.coeffs),
            "order": {"field_disc": order.field_disc, "conductor_divisor": order.conductor_divisor,
                      "field": order.field_label()},
            "systems": ["D2"] if t.D == 2 else sorted(str(v) for v in predict_system(t)),
            "alternates": [tau_json(x, args.precision) for x in group[1:]],
        })
    return out


def cmd_solve(args) -> Any:
    cfg = solver_config(args)
    D = args.d
    if D < 2:
        raise DegreeTooSmall(f"D = {D} < 2")
    variants = None
    if args.system:
        if D == 2:
            raise UsageError("--system does not apply to D = 2")
        variants = [SystemVariant.parse(s) for s in args.system.split(",")]
    results = solve_degree(D, variants, cfg)
    systems = {label: [record_json(r, args.height_bound) for r in recs]
               for label, recs in sorted(results.items())}
    js = distinct_j(results)
    full = variants is None or set(variants) >= set(default_variants(D))
    cov = coverage(D, js, args.precision, partial=not full)
    payload = {
        "D": D,
        "systems": systems,
        "j_values": [{"j": ball_json(j), "recognized": poly_json(_recognize(j, args.height_bound))}
                     for j in js],
        "coverage": {
            "ok": cov.ok,
            "partial": cov.partial,
            "periods": [{"tau": tau_json(t, args.precision), "label": t.label(), "j_index": i}
                        for t, i in cov.periods],
            "unmatched_periods": [t.label() for t in cov.unmatched_periods],
            "unmatched_j": cov.unmatched_j,
        },
    }
    if not js:
        raise NoSolutionsFound(f"no certified solutions for D = {D}", payload)
    if not cov.ok:
        raise _CoverageGap(payload)
    return payload


class _CoverageGap(Exception):
    def __init__(self, payload):
        super().__init__("coverage gap")
        self.payload = payload


def cmd_jtau(args) -> Any:
    prec = args.precision
    rep = None
    if args.tau is not None:
        rep = parse_tau_rep(args.tau)
        tau = rep.tau(prec)
    elif args.complex is not None:
        try:
            re_, im = args.complex.split(",")
            tau = CBall.from_strings(re_.strip(), im.strip(), "0", prec)
        except ValueError as exc:
            raise UsageError(f"--complex expects re,im: {exc}") from exc
    else:
        raise UsageError("jtau needs --tau or --complex")
    series = j_q_expansion(tau, args.qterms)
    lam, j = j_theta_oracle(tau, prec)
    return {
        "tau": tau_json(rep, prec) if rep else ball_json(tau),
        "qterms": args.qterms,
        "series": ball_json(series),
        "oracle_j": ball_json(j),
        "oracle_lambda": ball_json(lam),
        "recognized": poly_json(_recognize(j, args.height_bound)),
    }


def cmd_isogeny(args) -> Any:
    prec = args.precision
    lam = sympy_ball(str(parse_number(args.lam)), prec)
    tau = None
    if args.tau is not None:
        _, tau = parse_tau_any(args.tau, prec)
    step = isogeny_step(lam, args.k, tau, prec)
    rows = []
    for c in step.candidates:
        lam_out = c.lam
        if args.k == 2 and args.branch == -1:
            u = dict(zip(BRANCHES_2, (lam, 1 - lam, (lam - 1) / lam)))[c.branch]
            lam_out = lambda2_of(u, -1)
        rows.append({
            "branch": c.branch,
            "lambda": ball_json(lam_out),
            "j": ball_json(c.j),
            "target": c.target,
            "tau": ball_json(c.tau) if c.tau is not None else None,
            "oracle": ball_json(c.oracle) if c.oracle is not None else None,
            "certified": c.certified,
            "recognized": poly_json(_recognize(c.j, args.height_bound)),
        })
    return {"degree": args.k, "source_lambda": ball_json(step.source_lambda),
            "source_j": ball_json(step.source_j), "candidates": rows}


def cmd_table(args) -> Any:
    golden = json.loads(open(args.golden).read()) if args.golden else load_golden("table1")
    run = TableRun(golden, solver_config(args), args.precision, args.height_bound)
    rows = []
    for r in run.run():
        rows.append({"row": r.index, "tau": r.tau, "lambda": ball_json(r.lam), "j": ball_json(r.j),
                     "oracle": ball_json(r.oracle), "min_poly": [str(c) for c in r.min_poly],
                     "order_disc": r.order_disc, "source": r.source, "certified": True})
    return {"rows": rows, "certified": len(rows), "total": len(golden["rows"])}


COMMANDS = {"enumerate": cmd_enumerate, "solve": cmd_solve, "jtau": cmd_jtau,
            "isogeny": cmd_isogeny, "table": cmd_table}


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision", type=int, default=256, help="working precision in bits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--height-bound", type=int, default=DEFAULT_HEIGHT_BOUND)
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cmlegendre", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="CM period representatives of degree D")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--allow-square", action="store_true")
    _common(p)

    p = sub.add_parser("solve", help="solve the polynomial systems of degree D")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--system", help="comma separated variants, e.g. 2 or S5,S6")
    p.add_argument("--starts", type=int)
    p.add_argument("--tol", type=int, help="Newton tolerance as a dyadic exponent, e.g. 80 for 2^-80")
    _common(p)

    p = sub.add_parser("jtau", help="j at a period: q-series and theta oracle")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tau", help="u,a,b,D")
    g.add_argument("--complex", help="re,im")
    p.add_argument("--qterms", type=int, default=6, choices=range(1, 7), metavar="{1..6}")
    _common(p)

    p = sub.add_parser("isogeny", help="j along a degree 2 or 3 isogeny")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--k", type=int, choices=(2, 3), required=True)
    p.add_argument("--tau", help="source period: u,a,b,D or a closed form like sqrt2i")
    p.add_argument("--branch", type=int, choices=(1, -1), default=1,
                   help="square root branch used for the degree-2 lambda'")
    _common(p)

    p = sub.add_parser("table", help="recompute and certify the golden table")
    p.add_argument("--golden", help="alternative golden table file")
    p.add_argument("--starts", type=int)
    p.add_argument("--tol", type=int)
    _common(p)
    return ap


def render_text(obj: Any, prefix: str = "") -> List[str]:
    """Flatten a JSON value into "path = value" lines."""
    if isinstance(obj, dict):
        if set(obj) == {"re", "im", "rad"}:
            return [f"{prefix} = {obj['re']} + {obj['im']}i +/- {obj['rad']}"]
        out: List[str] = []
        for k in sorted(obj):
            out += render_text(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        if not obj:
            return [f"{prefix} = []"]
        out = []
        for i, v in enumerate(obj):
            out += render_text(v, f"{prefix}[{i}]")
        return out
    return [f"{prefix} = {json.dumps(obj)}"]


def _emit(report: RunReport, fmt: str, stream) -> None:
    if fmt == "text":
        stream.write("\n".join(render_text(asdict(report))) + "\n")
    else:
        stream.write(serialize(report) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    report = RunReport(args.command, config_of(args), None)
    code = EXIT_OK
    try:
        report.results = COMMANDS[args.command](args)
    except (UsageError, DegreeTooSmall, LambdaDegenerate, DegenerateBranch, NotInUpperHalfPlane,
            SquareVariantForbidden, VariantParityMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolutionsFound as exc:
        report.status, code = "no-solutions", EXIT_NOSOL
        report.results = exc.args[1] if len(exc.args) > 1 else None
        print(f"error: {exc.args[0]}", file=sys.stderr)
    except _CoverageGap as exc:
        report.status, code = "coverage-gap", EXIT_NOSOL
        report.results = exc.payload
        print("error: coverage gap between solutions and periods", file=sys.stderr)
    except AmbiguousMatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except RowMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROW
    if args.timing:
        report.timing = round(time.perf_counter() - start, 3)
    _emit(report, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
