"""``genzgamma`` command-line interface.

Exit codes: 0 success, 1 certified violation, 2 invalid input,
3 truncation budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, DomainError, InconsistentFormsError
from .explorer import Axis, default_axes, default_workers, scan, thin_axes
from .gamma import (
    log_gamma_classical,
    log_gamma_k,
    log_gamma_p,
    log_gamma_pq,
    log_gamma_q,
    log_gamma_qk,
)
from .lemmas import GFunction
from .params import SeriesBudget
from .psi import psi_classical, psi_k, psi_p, psi_pq_definitional, psi_pq_series, psi_q, psi_qk
from .report import RunReport
from .suites import DEFAULT_LIMIT_T, limit_error_table, run_lemma_suite, run_limits, run_theorem_suite
from .theorems import DEFAULT_T_GRID

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

# function name -> (required parameters, evaluator(args, t, budget))
EVAL_FUNCTIONS = {
    "classical": ((), lambda a, t, b: log_gamma_classical(t)),
    "gamma_p": (("p",), lambda a, t, b: log_gamma_p(a.p, t)),
    "gamma_q": (("q",), lambda a, t, b: log_gamma_q(a.q, t, b, start_at_one=a.start_at_one)),
    "gamma_k": (("k",), lambda a, t, b: log_gamma_k(a.k, t)),
    "gamma_pq": (("p", "q"), lambda a, t, b: log_gamma_pq(a.p, a.q, t)),
    "gamma_qk": (("q", "k"), lambda a, t, b: log_gamma_qk(a.q, a.k, t, b)),
    "psi": ((), lambda a, t, b: psi_classical(t)),
    "psi_p": (("p",), lambda a, t, b: psi_p(a.p, t)),
    "psi_q": (("q",), lambda a, t, b: psi_q(a.q, t, b)),
    "psi_k": (("k",), lambda a, t, b: psi_k(a.k, t, b)),
    "psi_pq": (("p", "q"), lambda a, t, b: (psi_pq_definitional if a.pq_form == "definitional"
                                            else psi_pq_series)(a.p, a.q, t)),
    "psi_qk": (("q", "k"), lambda a, t, b: psi_qk(a.q, a.k, t, b)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range(text: str) -> tuple:
    """``start:stop[:steps[:lin|log]]``."""
    parts = text.split(":")
    if not 2 <= len(parts) <= 4:
        raise argparse.ArgumentTypeError(f"range must be start:stop[:steps[:lin|log]], got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2]) if len(parts) > 2 else None
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    spacing = parts[3] if len(parts) > 3 else "lin"
    if spacing not in ("lin", "log"):
        raise argparse.ArgumentTypeError(f"spacing must be lin or log, got {spacing!r}")
    return start, stop, steps, spacing


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tail-tol", type=float, default=1e-12, help="absolute tail tolerance (default 1e-12)")
    sub.add_argument("--max-terms", type=int, default=10**6, help="hard cap on series terms (default 1e6)")
    sub.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sub.add_argument("--out", help="output file (explore: output directory)")
    sub.add_argument("--workers", type=int, default=None,
                     help="worker processes (default $GENZGAMMA_WORKERS or 1)")
    sub.add_argument("--timing", action="store_true", help="record wall-clock time in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genzgamma", description="Generalized Gamma/psi numerics and inequality certification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = subs.add_parser("eval", help="evaluate one function at a list of points")
    ev.add_argument("function", choices=sorted(EVAL_FUNCTIONS))
    ev.add_argument("--p", type=int)
    ev.add_argument("--q", type=float)
    ev.add_argument("--k", type=float)
    ev.add_argument("--t", type=_floats, required=True, help="comma-separated evaluation points")
    ev.add_argument("--start-at-one", action="store_true", help="gamma_q: product started at n=1")
    ev.add_argument("--pq-form", choices=("series", "definitional"), default="series", help="psi_pq variant")
    _common(ev)

    for name, what in (("verify-lemmas", "lemmas"), ("verify-theorems", "theorems")):
        v = subs.add_parser(name, help=f"certify the {what} over the default grid")
        v.add_argument("--only", type=_ints, help=f"subset of {what} to run, e.g. 1,3")
        v.add_argument("--p", type=_ints, help="override the p grid")
        v.add_argument("--q", type=_floats, help="override the q grid")
        v.add_argument("--k", type=_floats, help="override the k grid")
        v.add_argument("--lambda", dest="lam", type=float, help="single lambda (with --mu)")
        v.add_argument("--mu", type=float, help="single mu (with --lambda)")
        v.add_argument("--allow-out-of-hypothesis", action="store_true",
                       help="evaluate inputs outside the hypotheses and mark them exploratory")
        if name == "verify-lemmas":
            v.add_argument("--t", type=_floats, help="override the g(t) values")
        else:
            v.add_argument("--t", type=_floats, help="override the t grid (>= 8 points, starting at 0)")
            v.add_argument("--g", choices=("affine", "affine_unit_slope", "exponential_saturating"))
            v.add_argument("--alpha", type=float, default=1.0)
            v.add_argument("--beta", type=float, default=1.0)
            v.add_argument("--no-unit-interval", action="store_true", help="skip the affine 0<t<1 instantiations")
        _common(v)

    lim = subs.add_parser("limits", help="error decay along the classical limit paths")
    lim.add_argument("--t", type=float, default=DEFAULT_LIMIT_T)
    _common(lim)

    ex = subs.add_parser("explore", help="sign map of an open-problem expression")
    ex.add_argument("problem", choices=("P1", "P2"))
    ex.add_argument("--p-range", type=_range, help="integer start:stop[:stride]")
    ex.add_argument("--q-range", type=_range)
    ex.add_argument("--k-range", type=_range)
    ex.add_argument("--t-range", type=_range)
    ex.add_argument("--max-points", type=int, help="thin the grid to at most this many cells")
    _common(ex)
    return parser


def _budget(args) -> SeriesBudget:
    return SeriesBudget(args.tail_tol, args.max_terms)


def _workers(args) -> int:
    if args.workers is None:
        return default_workers()
    if args.workers < 1:
        raise DomainError(f"--workers must be >= 1, got {args.workers}")
    return args.workers


def _scales(args):
    if (args.lam is None) != (args.mu is None):
        raise DomainError("--lambda and --mu must be given together")
    return None if args.lam is None else ((args.lam, args.mu),)


def cmd_eval(args) -> RunReport:
    required, fn = EVAL_FUNCTIONS[args.function]
    missing = [f"--{name}" for name in required if getattr(args, name) is None]
    if missing:
        raise DomainError(f"{args.function} needs {' '.join(missing)}")
    budget = _budget(args)
    certificates = []
    for t in args.t:
        result = fn(args, t, budget)
        entry = {"check": args.function, "t": t, "outcome": "passed", "status": "verified"}
        if hasattr(result, "log_value"):
            entry.update(value=result.value, log_value=result.log_value)
        else:
            entry["value"] = result.value
        entry["tail_bound"] = result.tail_bound
        certificates.append(entry)
    config = {"function": args.function, "p": args.p, "q": args.q, "k": args.k, "t": args.t,
              "start_at_one": args.start_at_one, "pq_form": args.pq_form, "budget": budget.as_dict()}
    return RunReport("eval", config, certificates)


def cmd_verify(args) -> RunReport:
    budget = _budget(args)
    grid = {}
    if args.p:
        grid["p"] = tuple(args.p)
    if args.q:
        grid["q"] = tuple(args.q)
    if args.k:
        grid["k_ge_1"] = grid["k_any"] = tuple(args.k)
    scales = _scales(args)
    if scales:
        grid["scales"] = scales
    if args.command == "verify-lemmas":
        if args.t:
            grid["gt"] = tuple(args.t)
        return run_lemma_suite(tuple(args.only or (1, 2, 3, 4)), grid, budget, args.allow_out_of_hypothesis)
    if args.g:
        grid["g"] = (GFunction(args.g, args.alpha, args.beta),)
    return run_theorem_suite(
        tuple(args.only or (1, 2, 3, 4)),
        grid,
        tuple(args.t) if args.t else DEFAULT_T_GRID,
        budget,
        include_unit_interval=not (args.no_unit_interval or grid),
        allow_out_of_hypothesis=args.allow_out_of_hypothesis,
        workers=_workers(args),
    )


def cmd_limits(args) -> RunReport:
    return run_limits(args.t, _budget(args))


def _axis(name: str, spec, default: Axis) -> Axis:
    if spec is None:
        return default
    start, stop, steps, spacing = spec
    if name == "p":
        return Axis.integers("p", int(start), int(stop), steps or 1)
    if steps is None:
        raise DomainError(f"--{name}-range needs a step count")
    return (Axis.log if spacing == "log" else Axis.linear)(name, start, stop, steps)


def cmd_explore(args):
    budget = _budget(args)
    axes = [_axis(a.name, getattr(args, f"{a.name}_range"), a) for a in default_axes(args.problem)]
    if args.max_points is not None:
        axes = thin_axes(axes, args.max_points)
    region = scan(args.problem, axes, budget, workers=_workers(args))
    counts = region.counts()
    certificates = [{"check": f"explore_{args.problem}", "counts": counts, "boundaries": len(region.boundaries),
                     "outcome": "passed", "status": "verified"}]
    config = {"problem": args.problem, "axes": [a.as_dict() for a in axes], "budget": budget.as_dict(),
              "max_points": args.max_points}
    report = RunReport("explore", config, certificates, extra={"region_map": region.to_dict()})
    return report, region


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_rows(report: RunReport) -> str:
    rows = report.certificates
    keys = [k for k in rows[0] if not isinstance(rows[0][k], (dict, list))] if rows else []
    lines = [",".join(keys)]
    for row in rows:
        lines.append(",".join(f"{row.get(k):.17g}" if isinstance(row.get(k), float) else str(row.get(k, ""))
                              for k in keys))
    return "\n".join(lines) + "\n"


def _render(report: RunReport, args) -> str:
    if args.format == "json":
        return report.to_json()
    if args.format == "csv":
        return _csv_rows(report)
    if report.command == "eval":
        lines = []
        for c in report.certificates:
            extra = f" log_value={c['log_value']:.17g}" if "log_value" in c else ""
            lines.append(f"t={c['t']:.17g} value={c['value']:.17g}{extra} tail_bound={c['tail_bound']:.3e}")
        return "\n".join(lines) + "\n"
    if report.command == "limits":
        return "\n".join(limit_error_table(report)) + "\n" + report.to_text()
    return report.to_text()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _workers(args)
        if args.command == "explore":
            report, region = cmd_explore(args)
            out = Path(args.out or ".")
            out.mkdir(parents=True, exist_ok=True)
            stem = f"explore_{args.problem}"
            (out / f"{stem}.csv").write_text(region.to_csv())
            if args.timing:
                report.wall_clock = time.perf_counter() - start
            (out / f"{stem}.json").write_text(report.to_json())
            c = region.counts()
            sys.stdout.write(
                f"explore {args.problem}: {len(region.verdicts)} points, nonpositive={c['nonpositive']} "
                f"positive={c['positive']} inconclusive={c['inconclusive']}, "
                f"{len(region.boundaries)} boundaries -> {out / stem}.{{csv,json}}\n"
            )
            return EXIT_OK
        handler = {"eval": cmd_eval, "limits": cmd_limits}.get(args.command, cmd_verify)
        report = handler(args)
        if args.timing:
            report.wall_clock = time.perf_counter() - start
        _emit(_render(report, args), args.out)
        if args.out and args.format != "text":
            sys.stdout.write(report.to_text())
        return report.exit_code
    except BudgetExceededError as exc:
        print(f"genzgamma: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DomainError as exc:
        print(f"genzgamma: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InconsistentFormsError as exc:
        print(f"genzgamma: evaluation routes disagree: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
