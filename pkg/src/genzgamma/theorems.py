"""Monotone auxiliary functions and the double-inequality chains built on them.

For each theorem there is a function ``F`` of ``t`` (``G``, ``H``, ``S``, ``T``)
whose logarithm is a linear combination of ``g(t)``, ``ln g(t)`` and two
generalized log-Gamma values at ``g(t)``. Its t-derivative is ``g'(t)`` times
the matching lemma expression, so ``G`` and ``H`` are non-increasing and ``S``
and ``T`` are increasing. The displayed chain for ``0 < x < y`` is the
statement ``F(0) >= F(x) >= F(y)`` (resp. ``<``) after dividing through by the
factors that depend on ``x``.

Two routes are computed and cross-checked:

* the monotone route compares ``ln F`` at ``0``, ``x``, ``y``;
* the chain route evaluates the three displayed ratios term by term.

All comparisons happen in log space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from ._series import roundoff
from .errors import DomainError, HypothesisError, InconsistentFormsError
from .gamma import LogGammaValue, log_gamma_k, log_gamma_pq, log_gamma_q, log_gamma_qk, log_q_bracket
from .lemmas import GFunction, ScalePair, SignCertificate, lemma_value
from .params import DEFAULT_BUDGET, ParamSet, SeriesBudget
from .psi import EULER_GAMMA

__all__ = [
    "THEOREM_FUNCTIONS",
    "TheoremSetup",
    "FunctionSample",
    "MonotoneWitness",
    "ChainCertificate",
    "log_G",
    "log_H",
    "log_S",
    "log_T",
    "log_aux",
    "certify_monotone",
    "verify_chain",
    "derivative_identity",
    "DEFAULT_T_GRID",
    "UNIT_INTERVAL_T_GRID",
    "default_setups",
    "unit_interval_setups",
    "run_setup",
]

THEOREM_FUNCTIONS = {1: "G", 2: "H", 3: "S", 4: "T"}
NONINCREASING = "nonincreasing"
INCREASING = "increasing"
DIRECTION = {1: NONINCREASING, 2: NONINCREASING, 3: INCREASING, 4: INCREASING}

DEFAULT_T_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
# g(t) = alpha + beta t on 0 < t < 1 recovers the earlier special cases
UNIT_INTERVAL_T_GRID = (0.0, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99)


@dataclass(frozen=True)
class TheoremSetup:
    """Everything one theorem instance depends on.

    ``check_hypotheses=False`` admits parameters outside the theorem's
    hypotheses (``lambda < mu`` for Theorems 1-2, ``k < 1`` for Theorem 2);
    results are then exploratory.
    """

    theorem_id: int
    scale: ScalePair
    params: ParamSet
    g: GFunction
    budget: SeriesBudget = DEFAULT_BUDGET
    check_hypotheses: bool = True

    def __post_init__(self):
        if self.theorem_id not in THEOREM_FUNCTIONS:
            raise DomainError(f"theorem_id must be 1..4, got {self.theorem_id!r}")
        needed = {1: "pq", 2: "qk", 3: "kpq", 4: "qk"}[self.theorem_id]
        for name in needed:
            getattr(self.params, name)
        if self.check_hypotheses:
            for problem in self.hypothesis_violations():
                raise HypothesisError(f"theorem {self.theorem_id}: {problem}")

    def hypothesis_violations(self) -> list[str]:
        problems = []
        if self.theorem_id in (1, 2) and self.scale.lam < self.scale.mu:
            problems.append(f"requires lambda >= mu, got {self.scale.lam} < {self.scale.mu}")
        if self.theorem_id == 2 and self.params.k < 1.0:
            problems.append(f"requires k >= 1, got k={self.params.k}")
        return problems

    @property
    def function_id(self) -> str:
        return THEOREM_FUNCTIONS[self.theorem_id]

    @property
    def direction(self) -> str:
        return DIRECTION[self.theorem_id]

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "function": self.function_id,
            "lambda": self.scale.lam,
            "mu": self.scale.mu,
            **self.params.as_dict(),
            "g": self.g.as_dict(),
            "budget": self.budget.as_dict(),
            "in_hypothesis": not self.hypothesis_violations(),
        }


@dataclass(frozen=True)
class FunctionSample:
    """``ln F(t)`` with its error bound (truncation tail plus rounding allowance)."""

    t: float
    log_value: float
    error_bound: float


@dataclass
class MonotoneWitness:
    function_id: str
    params: dict
    direction: str
    samples: list[FunctionSample]
    verdict: str
    violation: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "params": self.params,
            "direction": self.direction,
            "samples": [[s.t, s.log_value, s.error_bound] for s in self.samples],
            "verdict": self.verdict,
            "violation": list(self.violation) if self.violation else None,
        }


@dataclass
class ChainCertificate:
    theorem_id: int
    x: float
    y: float
    left_log: float
    mid_log: float
    right_log: float
    margins: tuple[float, float]
    error_bounds: tuple[float, float]
    verdict: str
    monotone_verdict: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "x": self.x,
            "y": self.y,
            "left_log": self.left_log,
            "mid_log": self.mid_log,
            "right_log": self.right_log,
            "margins": list(self.margins),
            "error_bounds": list(self.error_bounds),
            "verdict": self.verdict,
            "monotone_verdict": self.monotone_verdict,
            "params": self.params,
        }


# ---------------------------------------------------------------------------
# component evaluation


@dataclass(frozen=True)
class _Terms:
    """Generalized log-Gamma values entering ``ln F`` at one ``g`` value."""

    gt: float
    a: LogGammaValue  # raised to lambda
    b: LogGammaValue  # raised to mu


def _terms(setup: TheoremSetup, gt: float) -> _Terms:
    p = setup.params
    tid = setup.theorem_id
    budget = setup.budget
    if tid in (1, 2):
        a = log_gamma_q(p.q, gt, budget)
    else:
        a = log_gamma_k(p.k, gt)
    if tid in (1, 3):
        b = log_gamma_pq(p.p, p.q, gt)
    else:
        b = log_gamma_qk(p.q, p.k, gt, budget)
    return _Terms(gt, a, b)


def _linear_pieces(setup: TheoremSetup, gt: float) -> tuple[float, ...]:
    """Non-Gamma pieces of ``ln F`` at ``g(t) = gt``."""
    lam, mu = setup.scale.lam, setup.scale.mu
    p = setup.params
    tid = setup.theorem_id
    if tid == 1:
        return (lam * gt * math.log1p(-p.q), mu * gt * log_q_bracket(p.p, p.q))
    if tid == 2:
        l1q = math.log1p(-p.q)
        return (lam * gt * l1q, -(mu * gt / p.k) * l1q)
    lnk = math.log(p.k)
    common = (lam * math.log(gt), lam * EULER_GAMMA * gt / p.k, -(lam * gt / p.k) * lnk)
    if tid == 3:
        return (mu * gt * log_q_bracket(p.p, p.q),) + common
    return common + (-(mu * gt / p.k) * math.log1p(-p.q),)


def _sample(setup: TheoremSetup, t: float, terms: _Terms) -> FunctionSample:
    lam, mu = setup.scale.lam, setup.scale.mu
    pieces = _linear_pieces(setup, terms.gt) + (lam * terms.a.log_value, -mu * terms.b.log_value)
    magnitude = math.fsum(abs(x) for x in pieces[:-2]) + lam * terms.a.magnitude + mu * terms.b.magnitude
    tail = lam * terms.a.tail_bound + mu * terms.b.tail_bound
    return FunctionSample(t, math.fsum(pieces), tail + roundoff(magnitude))


def _check_t(t: float) -> float:
    t = float(t)
    if not (t >= 0.0) or not math.isfinite(t):
        raise DomainError(f"t must be a finite real >= 0, got {t!r}")
    return t


def log_aux(setup: TheoremSetup, t: float) -> FunctionSample:
    """``ln F(t)`` for the auxiliary function of ``setup.theorem_id``."""
    t = _check_t(t)
    return _sample(setup, t, _terms(setup, setup.g(t)))


def log_G(t: float, s: ScalePair, p: int, q: float, g: GFunction, budget: SeriesBudget = DEFAULT_BUDGET):
    """``ln G(t)`` and its error bound; ``G`` is non-increasing when ``lambda >= mu``."""
    sample = log_aux(TheoremSetup(1, s, ParamSet(p_value=p, q_value=q), g, budget), t)
    return sample.log_value, sample.error_bound


def log_H(t: float, s: ScalePair, q: float, k: float, g: GFunction, budget: SeriesBudget = DEFAULT_BUDGET):
    """``ln H(t)`` and its error bound; ``H`` is non-increasing when ``lambda >= mu`` and ``k >= 1``."""
    sample = log_aux(TheoremSetup(2, s, ParamSet(q_value=q, k_value=k), g, budget), t)
    return sample.log_value, sample.error_bound


def log_S(t: float, s: ScalePair, k: float, p: int, q: float, g: GFunction, budget: SeriesBudget = DEFAULT_BUDGET):
    """``ln S(t)`` and its error bound; ``S`` is increasing."""
    sample = log_aux(TheoremSetup(3, s, ParamSet(p_value=p, q_value=q, k_value=k), g, budget), t)
    return sample.log_value, sample.error_bound


def log_T(t: float, s: ScalePair, q: float, k: float, g: GFunction, budget: SeriesBudget = DEFAULT_BUDGET):
    """``ln T(t)`` and its error bound; ``T`` is increasing."""
    sample = log_aux(TheoremSetup(4, s, ParamSet(q_value=q, k_value=k), g, budget), t)
    return sample.log_value, sample.error_bound


# ---------------------------------------------------------------------------
# comparisons


def _compare(direction: str, earlier: float, later: float, err: float):
    """Return ``(margin, verdict)`` for ``F(earlier)`` versus ``F(later)``.

    Non-increasing claims are non-strict and only fail on a certified
    increase; increasing claims are strict and need a margin above ``err``.
    """
    if direction == NONINCREASING:
        margin = earlier - later
        return margin, "violation" if margin < -err else "holds"
    margin = later - earlier
    if margin > err:
        return margin, "holds"
    return margin, "violation" if margin < -err else "inconclusive"


def _combine(verdicts: Iterable[str]) -> str:
    verdicts = list(verdicts)
    if "violation" in verdicts:
        return "violation"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "holds"


def _witness(setup: TheoremSetup, samples: Sequence[FunctionSample]) -> MonotoneWitness:
    verdict = "certified_monotone"
    violation = None
    for i, j in itertools.combinations(range(len(samples)), 2):
        a, b = samples[i], samples[j]
        _, v = _compare(setup.direction, a.log_value, b.log_value, a.error_bound + b.error_bound)
        if v == "violation":
            verdict, violation = "violation", (a.t, b.t)
            break
        if v == "inconclusive":
            verdict = "inconclusive"
    return MonotoneWitness(setup.function_id, setup.as_dict(), setup.direction, list(samples), verdict, violation)


def _check_grid(t_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(_check_t(t) for t in t_grid)
    if len(grid) < 8:
        raise DomainError(f"t_grid needs at least 8 points, got {len(grid)}")
    if grid[0] != 0.0:
        raise DomainError("t_grid must start at 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("t_grid must be strictly increasing")
    return grid


def _match(setup: TheoremSetup, function_id=None, theorem_id=None) -> None:
    if function_id is not None and function_id != setup.function_id:
        raise DomainError(f"function {function_id!r} does not match setup for {setup.function_id!r}")
    if theorem_id is not None and theorem_id != setup.theorem_id:
        raise DomainError(f"theorem {theorem_id!r} does not match setup for theorem {setup.theorem_id}")


def certify_monotone(function_id: str, setup: TheoremSetup,
                     t_grid: Sequence[float] = DEFAULT_T_GRID) -> MonotoneWitness:
    """Sample ``ln F`` on ``t_grid`` and check every pair against the claimed direction."""
    _match(setup, function_id=function_id)
    grid = _check_grid(t_grid)
    return _witness(setup, [log_aux(setup, t) for t in grid])


def _displayed(setup: TheoremSetup, at: _Terms, ref: _Terms):
    """Log of the displayed outer ratio with endpoint ``at`` normalized at ``ref``.

    Returns ``(value, magnitude)``.
    """
    lam, mu = setup.scale.lam, setup.scale.mu
    p = setup.params
    tid = setup.theorem_id
    d = at.gt - ref.gt
    gammas = (lam * at.a.log_value, -mu * at.b.log_value)
    if tid == 1:
        pieces = (lam * d * math.log1p(-p.q), mu * d * log_q_bracket(p.p, p.q))
    elif tid == 2:
        l1q = math.log1p(-p.q)
        pieces = (lam * d * l1q, -(mu / p.k) * d * l1q)
    else:
        lnk = math.log(p.k)
        pieces = (
            lam * math.log(at.gt),
            -lam * math.log(ref.gt),
            (lam * EULER_GAMMA / p.k) * d,
            -(lam / p.k) * d * lnk,
        )
        if tid == 3:
            pieces += (mu * d * log_q_bracket(p.p, p.q),)
        else:
            pieces += (-(mu / p.k) * d * math.log1p(-p.q),)
    magnitude = math.fsum(abs(x) for x in pieces) + lam * at.a.magnitude + mu * at.b.magnitude
    return math.fsum(pieces + gammas), magnitude


def _chain(setup: TheoremSetup, t0: _Terms, tx: _Terms, ty: _Terms, x: float, y: float,
           s0: FunctionSample, sx: FunctionSample, sy: FunctionSample) -> ChainCertificate:
    lam, mu = setup.scale.lam, setup.scale.mu
    left, left_mag = _displayed(setup, t0, tx)
    right, right_mag = _displayed(setup, ty, tx)
    mid = lam * tx.a.log_value - mu * tx.b.log_value
    mid_mag = lam * tx.a.magnitude + mu * tx.b.magnitude

    def tails(*ts):
        return sum(lam * z.a.tail_bound + mu * z.b.tail_bound for z in ts)

    err1 = tails(t0, tx) + roundoff(left_mag, mid_mag)
    err2 = tails(tx, ty) + roundoff(mid_mag, right_mag)
    m1, v1 = _compare(setup.direction, left, mid, err1)
    m2, v2 = _compare(setup.direction, mid, right, err2)

    # monotone route on the same points
    n1, w1 = _compare(setup.direction, s0.log_value, sx.log_value, s0.error_bound + sx.error_bound)
    n2, w2 = _compare(setup.direction, sx.log_value, sy.log_value, sx.error_bound + sy.error_bound)
    for direct, mono, bound in ((m1, n1, err1 + s0.error_bound + sx.error_bound),
                                (m2, n2, err2 + sx.error_bound + sy.error_bound)):
        if abs(direct - mono) > bound:
            raise InconsistentFormsError(
                f"theorem {setup.theorem_id}: chain margin {direct!r} and monotone margin {mono!r} "
                f"differ beyond {bound:.3g} at x={x}, y={y}"
            )
    return ChainCertificate(
        theorem_id=setup.theorem_id,
        x=x,
        y=y,
        left_log=left,
        mid_log=mid,
        right_log=right,
        margins=(m1, m2),
        error_bounds=(err1, err2),
        verdict=_combine((v1, v2)),
        monotone_verdict=_combine((w1, w2)),
        params=setup.as_dict(),
    )


def verify_chain(theorem_id: int, x: float, y: float, setup: TheoremSetup) -> ChainCertificate:
    """Check the displayed double inequality at ``(0, x, y)`` by both routes."""
    _match(setup, theorem_id=theorem_id)
    x, y = _check_t(x), _check_t(y)
    if not (0.0 < x < y):
        raise DomainError(f"need 0 < x < y, got x={x}, y={y}")
    terms = [_terms(setup, setup.g(t)) for t in (0.0, x, y)]
    samples = [_sample(setup, t, z) for t, z in zip((0.0, x, y), terms)]
    return _chain(setup, *terms, x, y, *samples)


def derivative_identity(setup: TheoremSetup, t: float, h: float = 1e-4):
    """Central difference of ``ln F`` at ``t`` next to ``g'(t)`` times the lemma expression.

    The lemma is evaluated with the definitional (p,q)-psi, which is the exact
    derivative of the closed-form (p,q)-Gamma inside ``G`` and ``S``.
    Returns ``(finite_difference, expected, certificate)``.
    """
    t = _check_t(t)
    if t - h < 0.0:
        raise DomainError(f"t={t} too close to 0 for step h={h}")
    fd = (log_aux(setup, t + h).log_value - log_aux(setup, t - h).log_value) / (2.0 * h)
    p = setup.params
    kwargs = {"p": p.p_value, "q": p.q_value, "k": p.k_value}
    cert: SignCertificate = lemma_value(
        setup.theorem_id, setup.scale, setup.g(t), budget=setup.budget,
        pq_form="definitional", check_hypotheses=setup.check_hypotheses, **kwargs,
    )
    return fd, setup.g.derivative(t) * cert.value, cert


# ---------------------------------------------------------------------------
# default grids

DEFAULT_THEOREM_GRID = {
    "p": (1, 2, 5, 10, 50),
    "q": (0.1, 0.3, 0.5, 0.7, 0.9),
    "k_ge_1": (1.0, 1.5, 2.0, 5.0),
    "k_any": (0.25, 0.5, 1.0, 1.5, 2.0, 5.0),
    "scales": ((1.0, 1.0), (2.0, 1.0), (1.0, 0.5), (5.0, 0.1)),
    "g": (
        GFunction("affine", 1.0, 1.0),
        GFunction("affine", 0.5, 2.0),
        GFunction("affine_unit_slope", 1.0),
        GFunction("exponential_saturating", 1.0, 2.0),
    ),
}

UNIT_INTERVAL_GRID = {
    "p": (1, 5, 50),
    "q": (0.1, 0.5, 0.9),
    "k_ge_1": (1.0, 2.0, 5.0),
    "k_any": (0.5, 1.0, 2.0),
    "scales": ((1.0, 1.0), (2.0, 1.0)),
    "g": tuple(GFunction("affine", a, b) for a in (0.25, 1.0, 3.0) for b in (0.5, 1.0, 2.0)),
}


def _setups(theorem_ids, grid, budget, check_hypotheses=True) -> Iterator[TheoremSetup]:
    for tid in theorem_ids:
        if tid == 1:
            params = [ParamSet(p_value=p, q_value=q) for p in grid["p"] for q in grid["q"]]
        elif tid == 2:
            params = [ParamSet(q_value=q, k_value=k) for q in grid["q"] for k in grid["k_ge_1"]]
        elif tid == 3:
            params = [ParamSet(p_value=p, q_value=q, k_value=k)
                      for k in grid["k_any"] for p in grid["p"] for q in grid["q"]]
        else:
            params = [ParamSet(q_value=q, k_value=k) for q in grid["q"] for k in grid["k_any"]]
        for ps, (lam, mu), g in itertools.product(params, grid["scales"], grid["g"]):
            yield TheoremSetup(tid, ScalePair(lam, mu), ps, g, budget, check_hypotheses)


def default_setups(theorem_ids=(1, 2, 3, 4), grid: dict | None = None,
                   budget: SeriesBudget = DEFAULT_BUDGET, check_hypotheses: bool = True) -> Iterator[TheoremSetup]:
    """Setups over ``DEFAULT_THEOREM_GRID`` with optional overrides."""
    merged = dict(DEFAULT_THEOREM_GRID)
    if grid:
        merged.update(grid)
    return _setups(theorem_ids, merged, budget, check_hypotheses)


def unit_interval_setups(theorem_ids=(1, 2, 3, 4), budget: SeriesBudget = DEFAULT_BUDGET) -> Iterator[TheoremSetup]:
    """Affine ``g`` on ``0 < t < 1``, plus ``g = alpha + t`` with ``lambda = mu = 1``."""
    yield from _setups(theorem_ids, UNIT_INTERVAL_GRID, budget)
    unit = dict(UNIT_INTERVAL_GRID)
    unit["scales"] = ((1.0, 1.0),)
    unit["g"] = tuple(GFunction("affine_unit_slope", a) for a in (0.25, 1.0, 3.0))
    yield from _setups(theorem_ids, unit, budget)


def run_setup(setup: TheoremSetup, t_grid: Sequence[float] = DEFAULT_T_GRID):
    """Witness plus every chain ``(0, x, y)`` with ``x < y`` taken from ``t_grid``.

    Log-Gamma values are computed once per grid point and shared by both routes.
    """
    grid = _check_grid(t_grid)
    terms = [_terms(setup, setup.g(t)) for t in grid]
    samples = [_sample(setup, t, z) for t, z in zip(grid, terms)]
    witness = _witness(setup, samples)
    chains = [
        _chain(setup, terms[0], terms[i], terms[j], grid[i], grid[j], samples[0], samples[i], samples[j])
        for i, j in itertools.combinations(range(1, len(grid)), 2)
    ]
    return witness, chains
