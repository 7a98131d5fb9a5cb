"""Sign certification of the four psi-difference inequalities.

Each ``lemmaN_value`` evaluates its expression twice: once by composing the
psi evaluators (the *direct* form) and once from the single collapsed series
obtained after the constant terms cancel. The two must agree within their
combined error bounds; the verdict comes from the collapsed form.

Lemmas 1 and 2 claim ``<= 0`` (under ``lambda >= mu``, and ``k >= 1`` for
Lemma 2); Lemmas 3 and 4 claim ``> 0`` for any positive scales.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator, Literal

from ._series import k_series, q_series, q_series_finite, roundoff, shifted_q_series_finite
from .errors import DomainError, HypothesisError, InconsistentFormsError
from .gamma import log_q_bracket
from .params import DEFAULT_BUDGET, SeriesBudget, check_k, check_p, check_q, check_t
from .psi import EULER_GAMMA, psi_k, psi_pq_definitional, psi_pq_series, psi_q, psi_qk

__all__ = [
    "ScalePair",
    "GFunction",
    "SignCertificate",
    "certify_sign",
    "lemma1_value",
    "lemma2_value",
    "lemma3_value",
    "lemma4_value",
    "lemma_value",
    "LEMMA_CLAIMS",
    "check_outcome",
    "DEFAULT_LEMMA_GRID",
    "lemma_grid_points",
]

PqForm = Literal["series", "definitional"]

CERTIFIED_POSITIVE = "certified_positive"
CERTIFIED_NONPOSITIVE = "certified_nonpositive"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ScalePair:
    """Exponent pair ``(lambda, mu)``; ``ordering='lambda_ge_mu'`` enforces ``lambda >= mu``."""

    lam: float
    mu: float
    ordering: Literal["lambda_ge_mu", "free"] = "free"

    def __post_init__(self):
        lam, mu = float(self.lam), float(self.mu)
        if not (lam > 0.0 and mu > 0.0) or not (math.isfinite(lam) and math.isfinite(mu)):
            raise DomainError(f"lambda and mu must be positive, got ({self.lam!r}, {self.mu!r})")
        if self.ordering not in ("lambda_ge_mu", "free"):
            raise DomainError(f"unknown ordering {self.ordering!r}")
        if self.ordering == "lambda_ge_mu" and lam < mu:
            raise HypothesisError(f"ordering requires lambda >= mu, got lambda={lam}, mu={mu}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)


GFAMILIES = ("affine", "affine_unit_slope", "exponential_saturating")


@dataclass(frozen=True)
class GFunction:
    """Positive increasing ``g`` on ``[0, inf)`` with an exact derivative.

    ``affine``: ``alpha + beta t``; ``affine_unit_slope``: ``alpha + t``;
    ``exponential_saturating``: ``alpha + beta (1 - exp(-t))``.
    """

    family: str = "affine"
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.family not in GFAMILIES:
            raise DomainError(f"unknown g family {self.family!r}; expected one of {GFAMILIES}")
        alpha, beta = float(self.alpha), float(self.beta)
        if self.family == "affine_unit_slope":
            beta = 1.0
        if not (alpha > 0.0 and math.isfinite(alpha)):
            raise DomainError(f"g requires alpha > 0 so that g(0) > 0, got {self.alpha!r}")
        if not (beta > 0.0 and math.isfinite(beta)):
            raise DomainError(f"g must be strictly increasing (beta > 0), got {self.beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __call__(self, t: float) -> float:
        if self.family == "exponential_saturating":
            return self.alpha - self.beta * math.expm1(-t)
        return self.alpha + self.beta * t

    def derivative(self, t: float) -> float:
        if self.family == "exponential_saturating":
            return self.beta * math.exp(-t)
        return self.beta

    def as_dict(self) -> dict:
        return {"family": self.family, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class SignCertificate:
    """Sign verdict for one evaluated expression.

    ``value``/``tail_bound`` belong to the route the verdict is taken from;
    ``tail_bound`` includes the rounding allowance. ``alt_value`` is the
    independent second route, when there is one.
    """

    check: str
    inputs: dict
    value: float
    tail_bound: float
    verdict: str
    alt_value: float | None = None
    alt_tail_bound: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        if not out["extra"]:
            del out["extra"]
        return out


def certify_sign(value: float, bound: float) -> str:
    if value > bound:
        return CERTIFIED_POSITIVE
    if value < -bound:
        return CERTIFIED_NONPOSITIVE
    return INCONCLUSIVE


def _finish(check, inputs, direct, direct_tail, direct_scale, collapsed, collapsed_tail, collapsed_scale):
    direct_err = direct_tail + roundoff(direct_scale)
    collapsed_err = collapsed_tail + roundoff(collapsed_scale)
    if abs(direct - collapsed) > direct_err + collapsed_err:
        raise InconsistentFormsError(
            f"{check}: direct form {direct!r} and collapsed form {collapsed!r} differ by "
            f"{abs(direct - collapsed):.3g} > {direct_err + collapsed_err:.3g} at {inputs}"
        )
    return SignCertificate(
        check=check,
        inputs=inputs,
        value=collapsed,
        tail_bound=collapsed_err,
        verdict=certify_sign(collapsed, collapsed_err),
        alt_value=direct,
        alt_tail_bound=direct_err,
    )


def _check_pq_form(pq_form):
    if pq_form not in ("series", "definitional"):
        raise DomainError(f"pq_form must be 'series' or 'definitional', got {pq_form!r}")


def _pq_parts(p, q, gt, pq_form):
    """(PsiValue, finite sum) for the chosen (p,q)-psi form."""
    if pq_form == "series":
        psi = psi_pq_series(p, q, gt)
        total = q_series_finite(q, gt, p)
    else:
        psi = psi_pq_definitional(p, q, gt)
        total = shifted_q_series_finite(q, gt, p)
    return psi, total


def lemma1_value(
    s: ScalePair,
    p: int,
    q: float,
    gt: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    *,
    pq_form: PqForm = "series",
    check_hypotheses: bool = True,
) -> SignCertificate:
    """``lam ln(1-q) + mu ln[p]_q + lam psi_q(g) - mu psi_(p,q)(g)``; claimed ``<= 0``."""
    p, q, gt = check_p(p), check_q(q), check_t(gt, "g(t)")
    _check_pq_form(pq_form)
    lam, mu = s.lam, s.mu
    if check_hypotheses and lam < mu:
        raise HypothesisError(f"lemma 1 requires lambda >= mu, got {lam} < {mu}")
    lnq = math.log(q)
    l1q = math.log1p(-q)
    lp = log_q_bracket(p, q)

    pq_psi, pq_total = _pq_parts(p, q, gt, pq_form)
    qpsi = psi_q(q, gt, budget.scaled(lam))
    direct = lam * l1q + mu * lp + lam * qpsi.value - mu * pq_psi.value
    direct_scale = lam * abs(l1q) + mu * abs(lp) + lam * qpsi.magnitude + mu * pq_psi.magnitude

    infinite, tail, _ = q_series(q, gt, 1.0, budget.scaled(lam * abs(lnq)), "lemma1")
    collapsed = lnq * (lam * infinite - mu * pq_total)
    collapsed_scale = abs(lnq) * (lam * infinite + mu * pq_total)

    inputs = {"lambda": lam, "mu": mu, "p": p, "q": q, "gt": gt, "pq_form": pq_form}
    return _finish("lemma1", inputs, direct, lam * qpsi.tail_bound, direct_scale,
                   collapsed, lam * abs(lnq) * tail, collapsed_scale)


def lemma2_value(
    s: ScalePair,
    q: float,
    k: float,
    gt: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    *,
    check_hypotheses: bool = True,
) -> SignCertificate:
    """``lam ln(1-q) - mu ln(1-q)/k + lam psi_q(g) - mu psi_(q,k)(g)``; claimed ``<= 0``."""
    q, k, gt = check_q(q), check_k(k), check_t(gt, "g(t)")
    lam, mu = s.lam, s.mu
    if check_hypotheses and lam < mu:
        raise HypothesisError(f"lemma 2 requires lambda >= mu, got {lam} < {mu}")
    if check_hypotheses and k < 1.0:
        raise HypothesisError(f"lemma 2 requires k >= 1, got k={k}")
    lnq = math.log(q)
    l1q = math.log1p(-q)

    qpsi = psi_q(q, gt, budget.scaled(2.0 * lam))
    qkpsi = psi_qk(q, k, gt, budget.scaled(2.0 * mu))
    direct = lam * l1q - mu * l1q / k + lam * qpsi.value - mu * qkpsi.value
    direct_tail = lam * qpsi.tail_bound + mu * qkpsi.tail_bound
    direct_scale = lam * abs(l1q) + mu * abs(l1q) / k + lam * qpsi.magnitude + mu * qkpsi.magnitude

    s_q, tail_q, _ = q_series(q, gt, 1.0, budget.scaled(2.0 * lam * abs(lnq)), "lemma2")
    s_qk, tail_qk, _ = q_series(q, k * gt, k, budget.scaled(2.0 * mu * abs(lnq)), "lemma2")
    collapsed = lnq * (lam * s_q - mu * s_qk)
    collapsed_tail = abs(lnq) * (lam * tail_q + mu * tail_qk)
    collapsed_scale = abs(lnq) * (lam * s_q + mu * s_qk)

    inputs = {"lambda": lam, "mu": mu, "q": q, "k": k, "gt": gt}
    return _finish("lemma2", inputs, direct, direct_tail, direct_scale,
                   collapsed, collapsed_tail, collapsed_scale)


def lemma3_value(
    s: ScalePair,
    k: float,
    p: int,
    q: float,
    gt: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    *,
    pq_form: PqForm = "series",
) -> SignCertificate:
    """``mu ln[p]_q - lam ln k/k + lam gamma/k + lam/g + lam psi_k(g) - mu psi_(p,q)(g)``; claimed ``> 0``."""
    k, p, q, gt = check_k(k), check_p(p), check_q(q), check_t(gt, "g(t)")
    _check_pq_form(pq_form)
    lam, mu = s.lam, s.mu
    lnq = math.log(q)
    lp = log_q_bracket(p, q)
    lnk = math.log(k)

    pq_psi, pq_total = _pq_parts(p, q, gt, pq_form)
    kpsi = psi_k(k, gt, budget.scaled(lam))
    consts = (mu * lp, -lam * lnk / k, lam * EULER_GAMMA / k, lam / gt)
    direct = math.fsum(consts) + lam * kpsi.value - mu * pq_psi.value
    direct_scale = math.fsum(abs(c) for c in consts) + lam * kpsi.magnitude + mu * pq_psi.magnitude

    k_total, k_tail, _ = k_series(gt, k, budget.scaled(lam), "lemma3")
    collapsed = lam * k_total - mu * lnq * pq_total
    collapsed_scale = lam * k_total + mu * abs(lnq) * pq_total

    inputs = {"lambda": lam, "mu": mu, "k": k, "p": p, "q": q, "gt": gt, "pq_form": pq_form}
    return _finish("lemma3", inputs, direct, lam * kpsi.tail_bound, direct_scale,
                   collapsed, lam * k_tail, collapsed_scale)


def lemma4_value(
    s: ScalePair,
    q: float,
    k: float,
    gt: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
) -> SignCertificate:
    """``lam gamma/k + lam/g - ln(k**lam (1-q)**mu)/k + lam psi_k(g) - mu psi_(q,k)(g)``; claimed ``> 0``."""
    q, k, gt = check_q(q), check_k(k), check_t(gt, "g(t)")
    lam, mu = s.lam, s.mu
    lnq = math.log(q)
    l1q = math.log1p(-q)
    lnk = math.log(k)

    kpsi = psi_k(k, gt, budget.scaled(2.0 * lam))
    qkpsi = psi_qk(q, k, gt, budget.scaled(2.0 * mu))
    consts = (lam * EULER_GAMMA / k, lam / gt, -(lam * lnk + mu * l1q) / k)
    direct = math.fsum(consts) + lam * kpsi.value - mu * qkpsi.value
    direct_tail = lam * kpsi.tail_bound + mu * qkpsi.tail_bound
    direct_scale = lam * (EULER_GAMMA / k + 1.0 / gt + abs(lnk) / k) + mu * abs(l1q) / k \
        + lam * kpsi.magnitude + mu * qkpsi.magnitude

    k_total, k_tail, _ = k_series(gt, k, budget.scaled(2.0 * lam), "lemma4")
    s_qk, tail_qk, _ = q_series(q, k * gt, k, budget.scaled(2.0 * mu * abs(lnq)), "lemma4")
    collapsed = lam * k_total - mu * lnq * s_qk
    collapsed_tail = lam * k_tail + mu * abs(lnq) * tail_qk
    collapsed_scale = lam * k_total + mu * abs(lnq) * s_qk

    inputs = {"lambda": lam, "mu": mu, "q": q, "k": k, "gt": gt}
    return _finish("lemma4", inputs, direct, direct_tail, direct_scale,
                   collapsed, collapsed_tail, collapsed_scale)


# lemma id -> sign the lemma asserts; "nonpositive" claims are non-strict
LEMMA_CLAIMS = {1: "nonpositive", 2: "nonpositive", 3: "positive", 4: "positive"}


def lemma_value(lemma_id: int, s: ScalePair, gt: float, p=None, q=None, k=None,
                budget: SeriesBudget = DEFAULT_BUDGET, pq_form: PqForm = "series",
                check_hypotheses: bool = True) -> SignCertificate:
    """Dispatch to ``lemmaN_value`` with keyword parameters."""
    if lemma_id == 1:
        return lemma1_value(s, p, q, gt, budget, pq_form=pq_form, check_hypotheses=check_hypotheses)
    if lemma_id == 2:
        return lemma2_value(s, q, k, gt, budget, check_hypotheses=check_hypotheses)
    if lemma_id == 3:
        return lemma3_value(s, k, p, q, gt, budget, pq_form=pq_form)
    if lemma_id == 4:
        return lemma4_value(s, q, k, gt, budget)
    raise DomainError(f"unknown lemma id {lemma_id!r}")


def check_outcome(claim: str, verdict: str) -> str:
    """Map a sign verdict onto ``passed``/``failed``/``inconclusive`` for a claim.

    A point only counts as failed when the opposite sign is certified.
    """
    if claim == "positive":
        return {CERTIFIED_POSITIVE: "passed", CERTIFIED_NONPOSITIVE: "failed"}.get(verdict, "inconclusive")
    return {CERTIFIED_NONPOSITIVE: "passed", CERTIFIED_POSITIVE: "failed"}.get(verdict, "inconclusive")


DEFAULT_LEMMA_GRID = {
    "p": (1, 2, 5, 10, 50),
    "q": (0.1, 0.3, 0.5, 0.7, 0.9),
    "k_ge_1": (1.0, 1.5, 2.0, 5.0),
    "k_any": (0.25, 0.5, 1.0, 1.5, 2.0, 5.0),
    "scales": ((1.0, 1.0), (2.0, 1.0), (1.0, 0.5), (5.0, 0.1)),
    "gt": (0.1, 0.5, 1.0, 2.0, 10.0),
}


def lemma_grid_points(lemma_id: int, grid: dict | None = None) -> Iterator[dict]:
    """Parameter dictionaries for one lemma over a grid (default: ``DEFAULT_LEMMA_GRID``)."""
    g = dict(DEFAULT_LEMMA_GRID)
    if grid:
        g.update({key: tuple(val) for key, val in grid.items()})
    if lemma_id == 1:
        axes = {"p": g["p"], "q": g["q"]}
    elif lemma_id == 2:
        axes = {"q": g["q"], "k": g["k_ge_1"]}
    elif lemma_id == 3:
        axes = {"k": g["k_any"], "p": g["p"], "q": g["q"]}
    elif lemma_id == 4:
        axes = {"q": g["q"], "k": g["k_any"]}
    else:
        raise DomainError(f"unknown lemma id {lemma_id!r}")
    names = list(axes)
    for values in itertools.product(*axes.values()):
        point = dict(zip(names, values))
        for (lam, mu), gt in itertools.product(g["scales"], g["gt"]):
            yield {**point, "lambda": lam, "mu": mu, "gt": gt}
