"""Certification suites behind the ``verify-*`` and ``limits`` commands."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Sequence

from .errors import HypothesisError
from .gamma import (
    log_gamma_classical,
    log_gamma_k,
    log_gamma_p,
    log_gamma_pq,
    log_gamma_q,
    log_gamma_qk,
)
from .lemmas import (
    DEFAULT_LEMMA_GRID,
    LEMMA_CLAIMS,
    ScalePair,
    check_outcome,
    lemma_grid_points,
    lemma_value,
)
from .params import DEFAULT_BUDGET, SeriesBudget
from .report import RunReport
from .theorems import (
    DEFAULT_T_GRID,
    DEFAULT_THEOREM_GRID,
    UNIT_INTERVAL_T_GRID,
    default_setups,
    run_setup,
    unit_interval_setups,
)

__all__ = ["run_lemma_suite", "run_theorem_suite", "run_limits", "LIMIT_PATHS", "DEFAULT_LIMIT_T"]


def _lemma_violations(lemma_id: int, point: dict) -> list[str]:
    out = []
    if lemma_id in (1, 2) and point["lambda"] < point["mu"]:
        out.append("lambda < mu")
    if lemma_id == 2 and point["k"] < 1.0:
        out.append("k < 1")
    return out


def run_lemma_suite(lemma_ids: Sequence[int] = (1, 2, 3, 4), grid: dict | None = None,
                    budget: SeriesBudget = DEFAULT_BUDGET, allow_out_of_hypothesis: bool = False) -> RunReport:
    """Sign-certify every lemma over its grid.

    Points outside a lemma's hypotheses raise :class:`HypothesisError` unless
    ``allow_out_of_hypothesis`` is set, in which case they are evaluated and
    reported as exploratory.
    """
    merged = dict(DEFAULT_LEMMA_GRID)
    if grid:
        merged.update({k: tuple(v) for k, v in grid.items()})
    certificates = []
    for lemma_id in lemma_ids:
        claim = LEMMA_CLAIMS[lemma_id]
        for point in lemma_grid_points(lemma_id, merged):
            problems = _lemma_violations(lemma_id, point)
            if problems and not allow_out_of_hypothesis:
                raise HypothesisError(f"lemma {lemma_id}: {', '.join(problems)} at {point}")
            cert = lemma_value(
                lemma_id,
                ScalePair(point["lambda"], point["mu"]),
                point["gt"],
                p=point.get("p"),
                q=point.get("q"),
                k=point.get("k"),
                budget=budget,
                check_hypotheses=not problems,
            )
            entry = cert.to_dict()
            entry.update(claim=claim, outcome=check_outcome(claim, cert.verdict),
                         status="exploratory" if problems else "verified")
            certificates.append(entry)
    config = {
        "lemmas": list(lemma_ids),
        "grid": {k: list(v) for k, v in merged.items()},
        "budget": budget.as_dict(),
        "allow_out_of_hypothesis": allow_out_of_hypothesis,
    }
    return RunReport("verify-lemmas", config, certificates)


def _echo(x):
    if hasattr(x, "as_dict"):
        return x.as_dict()
    return list(x) if isinstance(x, tuple) else x


def _setup_certificate(args) -> dict:
    setup, t_grid, family, exploratory = args
    witness, chains = run_setup(setup, t_grid)
    verdicts = Counter(c.verdict for c in chains)
    agree = all(c.verdict == c.monotone_verdict for c in chains)
    failed_chains = [c.to_dict() for c in chains if c.verdict == "violation"]
    if witness.verdict == "violation" or failed_chains or not agree:
        outcome = "failed"
    elif witness.verdict == "inconclusive" or verdicts.get("inconclusive"):
        outcome = "inconclusive"
    else:
        outcome = "passed"
    entry = {
        "check": f"theorem{setup.theorem_id}",
        "family": family,
        "setup": setup.as_dict(),
        "t_grid": list(t_grid),
        "witness": witness.verdict,
        "witness_violation": list(witness.violation) if witness.violation else None,
        "chains": len(chains),
        "chain_verdicts": {k: verdicts.get(k, 0) for k in ("holds", "violation", "inconclusive")},
        "routes_agree": agree,
        "min_margins": [min(c.margins[0] for c in chains), min(c.margins[1] for c in chains)],
        "outcome": outcome,
        "status": "exploratory" if exploratory else "verified",
    }
    if failed_chains:
        entry["failed_chains"] = failed_chains
    return entry


def run_theorem_suite(theorem_ids: Sequence[int] = (1, 2, 3, 4), grid: dict | None = None,
                      t_grid: Sequence[float] = DEFAULT_T_GRID, budget: SeriesBudget = DEFAULT_BUDGET,
                      include_unit_interval: bool = True, allow_out_of_hypothesis: bool = False,
                      workers: int = 1) -> RunReport:
    """Monotone witnesses and all ``(0, x, y)`` chains for every setup on the grid.

    With ``include_unit_interval`` the affine instantiations on ``0 < t < 1`` are
    appended, sampled on ``UNIT_INTERVAL_T_GRID``.
    """
    jobs = []
    for setup in default_setups(theorem_ids, grid, budget, check_hypotheses=False):
        problems = setup.hypothesis_violations()
        if problems and not allow_out_of_hypothesis:
            raise HypothesisError(f"theorem {setup.theorem_id}: {'; '.join(problems)}")
        if not problems:
            setup = replace(setup, check_hypotheses=True)
        jobs.append((setup, tuple(t_grid), "default", bool(problems)))
    if include_unit_interval:
        jobs.extend((s, UNIT_INTERVAL_T_GRID, "unit_interval", False)
                    for s in unit_interval_setups(theorem_ids, budget))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            certificates = list(pool.map(_setup_certificate, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        certificates = [_setup_certificate(job) for job in jobs]
    merged = dict(DEFAULT_THEOREM_GRID)
    if grid:
        merged.update(grid)
    config = {
        "theorems": list(theorem_ids),
        "grid": {k: [_echo(x) for x in v] for k, v in merged.items()},
        "t_grid": list(t_grid),
        "unit_interval": {"included": include_unit_interval, "t_grid": list(UNIT_INTERVAL_T_GRID)},
        "budget": budget.as_dict(),
        "allow_out_of_hypothesis": allow_out_of_hypothesis,
    }
    return RunReport("verify-theorems", config, certificates)


# ---------------------------------------------------------------------------
# limits

DEFAULT_LIMIT_T = 1.5
LIMIT_PATHS = {
    "gamma_p": ("p", tuple({"p": 64 * 2**i} for i in range(7))),
    "gamma_q": ("q", tuple({"q": q} for q in (0.9, 0.99, 0.999))),
    "gamma_k": ("k", tuple({"k": k} for k in (2.0, 1.5, 1.1, 1.01, 1.0))),
    "gamma_pq": ("p,q", tuple({"p": p, "q": q} for p, q in ((64, 0.9), (512, 0.99), (4096, 0.999)))),
    "gamma_qk": ("q,k", tuple({"q": q, "k": k} for q, k in ((0.9, 1.5), (0.99, 1.1), (0.999, 1.01)))),
}


def _limit_eval(family: str, point: dict, t: float, budget: SeriesBudget):
    if family == "gamma_p":
        return log_gamma_p(point["p"], t)
    if family == "gamma_q":
        return log_gamma_q(point["q"], t, budget)
    if family == "gamma_k":
        return log_gamma_k(point["k"], t)
    if family == "gamma_pq":
        return log_gamma_pq(point["p"], point["q"], t)
    return log_gamma_qk(point["q"], point["k"], t, budget)


def run_limits(t: float = DEFAULT_LIMIT_T, budget: SeriesBudget = DEFAULT_BUDGET,
               families: Sequence[str] = tuple(LIMIT_PATHS)) -> RunReport:
    """Tabulate ``|ln Gamma_gen(t) - ln Gamma(t)|`` along each limit path.

    A family passes when the error column strictly decreases; a path that
    ends at the classical parameter (``k = 1``) must also end at exactly 0.
    """
    classical = log_gamma_classical(t).log_value
    certificates = []
    for family in families:
        _, path = LIMIT_PATHS[family]
        rows = []
        for point in path:
            value = _limit_eval(family, point, t, budget)
            rows.append({**point, "log_value": value.log_value, "tail_bound": value.tail_bound,
                         "error": abs(value.log_value - classical)})
        errors = [r["error"] for r in rows]
        decreasing = all(b < a for a, b in zip(errors, errors[1:]))
        exact_end = family != "gamma_k" or errors[-1] == 0.0
        certificates.append({
            "check": f"limit_{family}",
            "t": t,
            "classical_log_value": classical,
            "rows": rows,
            "strictly_decreasing": decreasing,
            "exact_zero_at_classical_point": exact_end if family == "gamma_k" else None,
            "outcome": "passed" if decreasing and exact_end else "failed",
            "status": "verified",
        })
    config = {"t": t, "budget": budget.as_dict(),
              "paths": {f: [dict(p) for p in LIMIT_PATHS[f][1]] for f in families}}
    return RunReport("limits", config, certificates)


def limit_error_table(report: RunReport) -> list[str]:
    """Fixed-width text rendering of a limits report."""
    lines = []
    for cert in report.certificates:
        lines.append(f"{cert['check'][6:]} (t={cert['t']:g}): {cert['outcome']}")
        for row in cert["rows"]:
            params = " ".join(f"{k}={row[k]:g}" for k in ("p", "q", "k") if k in row)
            err = row["error"]
            lines.append(f"  {params:<22} log={row['log_value']: .15e}  error={err:.6e}"
                         + ("" if math.isfinite(err) else " (non-finite)"))
    return lines
