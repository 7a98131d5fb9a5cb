"""Sign maps for the two open-problem expressions.

``P1(p, q, t) = ln p + ln(1-q) + psi_q(t) - psi_p(t)``
``P2(p, q, k, t) = -ln [p]_q - ln(1-q)/k + psi_(p,q)(t) - psi_(q,k)(t)``

Each point is evaluated from the psi definitions and from the equivalent
collapsed series; the verdict comes from the series. :func:`scan` walks a
row-major grid and refines every sign change between certified-opposite
neighbours by bisection along the continuous axes.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from ._series import q_series, q_series_finite
from .errors import DomainError
from .gamma import log_q_bracket
from .lemmas import CERTIFIED_NONPOSITIVE, CERTIFIED_POSITIVE, SignCertificate, _finish
from .params import DEFAULT_BUDGET, SeriesBudget, check_k, check_p, check_q, check_t
from .psi import psi_p, psi_pq_series, psi_q, psi_qk

__all__ = [
    "PROBLEM_AXES",
    "MAX_GRID_POINTS",
    "BOUNDARY_XTOL",
    "Axis",
    "Boundary",
    "RegionMap",
    "problem1_value",
    "problem2_value",
    "problem_value",
    "scan",
    "default_axes",
    "thin_axes",
]

PROBLEM_AXES = {"P1": ("p", "q", "t"), "P2": ("p", "q", "k", "t")}
MAX_GRID_POINTS = 10**7
# bisection stops well inside the 1e-6 probe distance
BOUNDARY_XTOL = 1e-9

POSITIVE = "positive"
NONPOSITIVE = "nonpositive"
INCONCLUSIVE = "inconclusive"
_SHORT = {CERTIFIED_POSITIVE: POSITIVE, CERTIFIED_NONPOSITIVE: NONPOSITIVE}


def problem1_value(p: int, q: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> SignCertificate:
    """``P1`` by definition and as ``sum_{n=0..p} 1/(n+t) + ln q sum_{n>=1} q**(nt)/(1-q**n)``."""
    p, q, t = check_p(p), check_q(q), check_t(t)
    lnq = math.log(q)
    lnp = math.log(p)
    l1q = math.log1p(-q)

    qpsi = psi_q(q, t, budget)
    ppsi = psi_p(p, t)
    direct = lnp + l1q + qpsi.value - ppsi.value
    direct_scale = lnp + abs(l1q) + qpsi.magnitude + ppsi.magnitude

    harmonic = math.fsum(1.0 / (n + t) for n in range(p + 1))
    total, tail, _ = q_series(q, t, 1.0, budget.scaled(abs(lnq)), "problem1")
    series = harmonic + lnq * total
    series_scale = harmonic + abs(lnq) * total

    inputs = {"p": p, "q": q, "t": t}
    return _finish("P1", inputs, direct, qpsi.tail_bound, direct_scale, series, abs(lnq) * tail, series_scale)


def problem2_value(p: int, q: float, k: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> SignCertificate:
    """``P2`` by definition and as
    ``ln q [sum_{n=1..p} q**(nt)/(1-q**n) - sum_{n>=1} q**(nkt)/(1-q**(nk))]``.

    The (p,q)-psi here is the finite series form.
    """
    p, q, k, t = check_p(p), check_q(q), check_k(k), check_t(t)
    lnq = math.log(q)
    lp = log_q_bracket(p, q)
    l1q = math.log1p(-q)

    pq = psi_pq_series(p, q, t)
    qk = psi_qk(q, k, t, budget)
    direct = -lp - l1q / k + pq.value - qk.value
    direct_scale = abs(lp) + abs(l1q) / k + pq.magnitude + qk.magnitude

    finite = q_series_finite(q, t, p)
    infinite, tail, _ = q_series(q, k * t, k, budget.scaled(abs(lnq)), "problem2")
    series = lnq * (finite - infinite)
    series_scale = abs(lnq) * (finite + infinite)

    inputs = {"p": p, "q": q, "k": k, "t": t}
    return _finish("P2", inputs, direct, qk.tail_bound, direct_scale, series, abs(lnq) * tail, series_scale)


def problem_value(problem_id: str, point: dict, budget: SeriesBudget = DEFAULT_BUDGET) -> SignCertificate:
    if problem_id == "P1":
        return problem1_value(point["p"], point["q"], point["t"], budget)
    if problem_id == "P2":
        return problem2_value(point["p"], point["q"], point["k"], point["t"], budget)
    raise DomainError(f"problem_id must be 'P1' or 'P2', got {problem_id!r}")


# ---------------------------------------------------------------------------
# axes


@dataclass(frozen=True)
class Axis:
    """A named, ordered list of coordinates plus how it was generated."""

    name: str
    values: tuple
    spacing: str = "explicit"

    def __post_init__(self):
        if not self.values:
            raise DomainError(f"axis {self.name!r} is empty")
        vals = tuple(self.values)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError(f"axis {self.name!r} must be strictly increasing")
        check = {"p": check_p, "q": check_q, "k": check_k, "t": check_t}.get(self.name)
        if check is None:
            raise DomainError(f"unknown axis {self.name!r}")
        object.__setattr__(self, "values", tuple(check(v) for v in vals))

    @classmethod
    def integers(cls, name: str, start: int, stop: int, stride: int = 1) -> "Axis":
        return cls(name, tuple(range(int(start), int(stop) + 1, int(stride))), "integer")

    @classmethod
    def linear(cls, name: str, start: float, stop: float, steps: int) -> "Axis":
        return cls(name, tuple(float(v) for v in np.linspace(start, stop, int(steps))), "linear")

    @classmethod
    def log(cls, name: str, start: float, stop: float, steps: int) -> "Axis":
        return cls(name, tuple(float(v) for v in np.geomspace(start, stop, int(steps))), "log")

    @property
    def continuous(self) -> bool:
        return self.name != "p"

    def __len__(self) -> int:
        return len(self.values)

    def as_dict(self) -> dict:
        return {"name": self.name, "spacing": self.spacing, "steps": len(self.values), "values": list(self.values)}


def default_axes(problem_id: str) -> list[Axis]:
    if problem_id == "P1":
        return [
            Axis.integers("p", 1, 20),
            Axis("q", tuple(round(0.05 * i, 2) for i in range(1, 20)), "linear"),
            Axis.log("t", 0.1, 10.0, 20),
        ]
    if problem_id == "P2":
        return [
            Axis.integers("p", 1, 10),
            Axis("q", tuple(round(0.1 * i, 1) for i in range(1, 10)), "linear"),
            Axis.linear("k", 0.25, 4.0, 16),
            Axis.log("t", 0.1, 10.0, 10),
        ]
    raise DomainError(f"problem_id must be 'P1' or 'P2', got {problem_id!r}")


def thin_axes(axes: Sequence[Axis], max_points: int) -> list[Axis]:
    """Halve the longest axis until the grid has at most ``max_points`` cells.

    Subsampling keeps evenly spaced indices starting at the first value, so a
    single-cell grid is the first coordinate of every axis.
    """
    if max_points < 1:
        raise DomainError(f"max_points must be >= 1, got {max_points}")
    axes = list(axes)
    while math.prod(len(a) for a in axes) > max_points:
        i = max(range(len(axes)), key=lambda j: (len(axes[j]), -j))
        n = len(axes[i])
        m = n // 2
        idx = np.unique(np.round(np.linspace(0, n - 1, m)).astype(int)) if m > 1 else np.array([0])
        axes[i] = Axis(axes[i].name, tuple(axes[i].values[j] for j in idx), axes[i].spacing)
    return axes


# ---------------------------------------------------------------------------
# scanning


@dataclass(frozen=True)
class Boundary:
    """A sign change between two neighbours along one axis."""

    axis: str
    fixed: dict
    lo: float
    hi: float
    location: float | None
    lower_verdict: str
    upper_verdict: str

    def as_dict(self) -> dict:
        return {
            "axis": self.axis,
            "fixed": self.fixed,
            "lo": self.lo,
            "hi": self.hi,
            "location": self.location,
            "lower_verdict": self.lower_verdict,
            "upper_verdict": self.upper_verdict,
        }


@dataclass
class RegionMap:
    problem_id: str
    axes: list[Axis]
    values: list[float]
    tail_bounds: list[float]
    verdicts: list[str]
    boundaries: list[Boundary] = field(default_factory=list)
    integer_transitions: list[Boundary] = field(default_factory=list)
    budget: SeriesBudget = DEFAULT_BUDGET

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def points(self):
        """Coordinate dicts in row-major order."""
        names = [a.name for a in self.axes]
        for combo in itertools.product(*(a.values for a in self.axes)):
            yield dict(zip(names, combo))

    def counts(self) -> dict:
        return {v: self.verdicts.count(v) for v in (NONPOSITIVE, POSITIVE, INCONCLUSIVE)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([a.name for a in self.axes] + ["value", "tail_bound", "verdict"])
        for point, value, tail, verdict in zip(self.points(), self.values, self.tail_bounds, self.verdicts):
            coords = [str(v) if isinstance(v, int) else f"{v:.17g}" for v in point.values()]
            writer.writerow(coords + [f"{value:.17g}", f"{tail:.17g}", verdict])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "problem_id": self.problem_id,
            "axes": [a.as_dict() for a in self.axes],
            "shape": list(self.shape),
            "budget": self.budget.as_dict(),
            "counts": self.counts(),
            "verdicts": list(self.verdicts),
            "boundaries": [b.as_dict() for b in self.boundaries],
            "integer_transitions": [b.as_dict() for b in self.integer_transitions],
        }


def _evaluate(args):
    problem_id, point, budget = args
    cert = problem_value(problem_id, point, budget)
    return cert.value, cert.tail_bound, _SHORT.get(cert.verdict, INCONCLUSIVE)


def _check_axes(problem_id: str, axes: Sequence[Axis]) -> list[Axis]:
    if problem_id not in PROBLEM_AXES:
        raise DomainError(f"problem_id must be 'P1' or 'P2', got {problem_id!r}")
    axes = list(axes)
    names = [a.name for a in axes]
    if sorted(names) != sorted(PROBLEM_AXES[problem_id]):
        raise DomainError(f"{problem_id} needs axes {PROBLEM_AXES[problem_id]}, got {tuple(names)}")
    total = math.prod(len(a) for a in axes)
    if total > MAX_GRID_POINTS:
        raise DomainError(f"grid has {total} points, limit is {MAX_GRID_POINTS}")
    return axes


def _refine(problem_id: str, point: dict, axis: str, lo: float, hi: float, budget: SeriesBudget) -> float:
    def f(x):
        return problem_value(problem_id, {**point, axis: x}, budget).value

    return bisect(f, lo, hi, xtol=BOUNDARY_XTOL, maxiter=200)


def scan(problem_id: str, axes: Sequence[Axis] | None = None, budget: SeriesBudget = DEFAULT_BUDGET,
         workers: int = 1) -> RegionMap:
    """Evaluate ``problem_id`` on the row-major grid spanned by ``axes``.

    Sign changes between certified-opposite neighbours are refined by
    bisection along q, k and t to ``BOUNDARY_XTOL``; along the integer p axis
    they are listed in ``integer_transitions`` without refinement.
    Output does not depend on ``workers``.
    """
    axes = _check_axes(problem_id, axes if axes is not None else default_axes(problem_id))
    names = [a.name for a in axes]
    points = [dict(zip(names, combo)) for combo in itertools.product(*(a.values for a in axes))]
    jobs = [(problem_id, pt, budget) for pt in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        results = [_evaluate(job) for job in jobs]
    values = [r[0] for r in results]
    tails = [r[1] for r in results]
    verdicts = [r[2] for r in results]

    shape = tuple(len(a) for a in axes)
    grid = np.array(verdicts, dtype=object).reshape(shape)
    boundaries, transitions = [], []
    for ax_i, axis in enumerate(axes):
        for idx in itertools.product(*(range(n) for n in shape)):
            if idx[ax_i] + 1 >= shape[ax_i]:
                continue
            nxt = idx[:ax_i] + (idx[ax_i] + 1,) + idx[ax_i + 1:]
            a, b = grid[idx], grid[nxt]
            if INCONCLUSIVE in (a, b) or a == b:
                continue
            point = {name: axes[j].values[idx[j]] for j, name in enumerate(names)}
            lo, hi = axis.values[idx[ax_i]], axis.values[idx[ax_i] + 1]
            fixed = {n: v for n, v in point.items() if n != axis.name}
            if axis.continuous:
                loc = _refine(problem_id, point, axis.name, lo, hi, budget)
                boundaries.append(Boundary(axis.name, fixed, lo, hi, loc, a, b))
            else:
                transitions.append(Boundary(axis.name, fixed, lo, hi, None, a, b))
    return RegionMap(problem_id, axes, values, tails, verdicts, boundaries, transitions, budget)


def default_workers() -> int:
    """Worker count from ``GENZGAMMA_WORKERS``, else 1."""
    raw = os.environ.get("GENZGAMMA_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"GENZGAMMA_WORKERS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"GENZGAMMA_WORKERS must be a positive integer, got {raw!r}")
    return n
