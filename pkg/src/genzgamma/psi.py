"""Classical and generalized psi (digamma) functions from their series.

``psi_pq_series`` is the standard finite series for the (p,q)-psi function and is
what the inequality certifiers consume. ``psi_pq_definitional`` is the exact
log-derivative of the closed-form (p,q)-Gamma. The two differ for finite ``p``;
``psi_pq_discrepancy`` reports the gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._series import k_series, q_series, q_series_finite, shifted_q_series_finite
from .gamma import log_q_bracket
from .params import DEFAULT_BUDGET, SeriesBudget, check_k, check_p, check_q, check_t

__all__ = [
    "EULER_GAMMA",
    "PsiValue",
    "psi_classical",
    "psi_p",
    "psi_q",
    "psi_k",
    "psi_pq_series",
    "psi_pq_definitional",
    "psi_pq_discrepancy",
    "psi_qk",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class PsiValue:
    """Series value, its truncation tail bound and the summed magnitude."""

    value: float
    tail_bound: float = 0.0
    n_terms: int = 0
    magnitude: float = 0.0


# B_{2j} / (2j) for j = 1..6; the asymptotic series is
# psi(z) ~ ln z - 1/(2z) - sum_j B_{2j} / (2j z**(2j)).
_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
)
# |B_14| / 14, the first omitted coefficient
_ASYMPTOTIC_NEXT = 1.0 / 12.0
_SHIFT_TO = 10.0


def psi_classical(t: float) -> PsiValue:
    """Digamma by upward recurrence to ``z >= 10`` then the Stirling series.

    The series is enveloping for real ``z > 0``, so the first omitted term
    ``1 / (12 z**14)`` bounds the truncation error.
    """
    t = check_t(t)
    shift = 0.0
    z = t
    while z < _SHIFT_TO:
        shift += 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    poly = 0.0
    for coeff in reversed(_ASYMPTOTIC):
        poly = poly * inv2 + coeff
    poly *= inv2
    value = math.log(z) - 0.5 / z - poly - shift
    return PsiValue(value, _ASYMPTOTIC_NEXT * inv2**7, 0, abs(math.log(z)) + 0.5 / z + abs(poly) + shift)


def psi_p(p: int, t: float) -> PsiValue:
    """``ln p - sum_{n=0..p} 1/(n + t)``."""
    p = check_p(p)
    t = check_t(t)
    harmonic = math.fsum(1.0 / (n + t) for n in range(p + 1))
    return PsiValue(math.log(p) - harmonic, 0.0, p + 1, math.log(p) + harmonic)


def psi_q(q: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> PsiValue:
    """``-ln(1-q) + ln q * sum_{n>=1} q**(nt) / (1 - q**n)``."""
    q = check_q(q)
    t = check_t(t)
    lnq = math.log(q)
    total, tail, n = q_series(q, t, 1.0, budget.scaled(abs(lnq)), "psi_q")
    lead = -math.log1p(-q)
    return PsiValue(lead + lnq * total, abs(lnq) * tail, n, lead + abs(lnq) * total)


def psi_k(k: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> PsiValue:
    """``(ln k - gamma)/k - 1/t + sum_{n>=1} t / (nk (nk + t))``."""
    k = check_k(k)
    t = check_t(t)
    total, tail, n = k_series(t, k, budget, "psi_k")
    lead = (math.log(k) - EULER_GAMMA) / k
    return PsiValue(lead - 1.0 / t + total, tail, n, abs(lead) + 1.0 / t + total)


def psi_pq_series(p: int, q: float, t: float) -> PsiValue:
    """``ln [p]_q + ln q * sum_{n=1..p} q**(nt) / (1 - q**n)``."""
    p = check_p(p)
    q = check_q(q)
    t = check_t(t)
    lead = log_q_bracket(p, q)
    total = q_series_finite(q, t, p)
    return PsiValue(lead + math.log(q) * total, 0.0, p, abs(lead) - math.log(q) * total)


def psi_pq_definitional(p: int, q: float, t: float) -> PsiValue:
    """Exact t-derivative of ``ln Gamma_(p,q)(t)``:
    ``ln [p]_q + ln q * sum_{j=0..p} q**(t+j) / (1 - q**(t+j))``.
    """
    p = check_p(p)
    q = check_q(q)
    t = check_t(t)
    lead = log_q_bracket(p, q)
    total = shifted_q_series_finite(q, t, p)
    return PsiValue(lead + math.log(q) * total, 0.0, p + 1, abs(lead) - math.log(q) * total)


def psi_pq_discrepancy(p: int, q: float, t: float) -> float:
    """``psi_pq_series - psi_pq_definitional``, without the shared ``ln [p]_q``."""
    p = check_p(p)
    q = check_q(q)
    t = check_t(t)
    return math.log(q) * (q_series_finite(q, t, p) - shifted_q_series_finite(q, t, p))


def psi_qk(q: float, k: float, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> PsiValue:
    """``-ln(1-q)/k + ln q * sum_{n>=1} q**(nkt) / (1 - q**(nk))``."""
    q = check_q(q)
    k = check_k(k)
    t = check_t(t)
    lnq = math.log(q)
    total, tail, n = q_series(q, k * t, k, budget.scaled(abs(lnq)), "psi_qk")
    lead = -math.log1p(-q) / k
    return PsiValue(lead + lnq * total, abs(lnq) * tail, n, lead + abs(lnq) * total)
