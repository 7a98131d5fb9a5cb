"""Truncated series kernels with a-priori tail bounds.

Every kernel picks its truncation point from a closed-form bound before
summing, so the number of terms is known up front and the budget check is
exact rather than iterative.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BudgetExceededError
from .params import SeriesBudget

EPS = float(np.finfo(float).eps)
# Rounding allowance, in ulps of the summed magnitudes, used wherever two
# evaluation routes are compared or a sign is certified.
ROUNDOFF_ULPS = 64


def roundoff(*magnitudes: float) -> float:
    return ROUNDOFF_ULPS * EPS * math.fsum(abs(m) for m in magnitudes)


def geometric_cutoff(log_ratio: float, prefactor: float, tol: float, max_terms: int, what: str) -> int:
    """Smallest ``N >= 1`` with ``prefactor * exp((N + 1) * log_ratio) <= tol``."""
    if log_ratio == -math.inf or prefactor == 0.0:
        return 1
    if prefactor * math.exp(2.0 * log_ratio) <= tol:
        return 1
    n = math.ceil(math.log(tol / prefactor) / log_ratio) - 1
    while prefactor * math.exp((n + 1) * log_ratio) > tol:
        n += 1
    if n > max_terms:
        raise BudgetExceededError(
            f"{what}: tail tolerance {tol:g} needs {n} terms, cap is {max_terms}",
            needed_terms=n,
            max_terms=max_terms,
        )
    return max(n, 1)


def q_series(q: float, s: float, step: float, budget: SeriesBudget, what: str = "q-series"):
    """Sum ``q**(n*s) / (1 - q**(n*step))`` over ``n >= 1``.

    Returns ``(total, tail_bound, n_terms)``. The tail past ``N`` is bounded by
    ``q**((N+1)*s) / ((1 - q**step) * (1 - q**s))``.
    """
    lnq = math.log(q)
    prefactor = 1.0 / ((-math.expm1(step * lnq)) * (-math.expm1(s * lnq)))
    n_terms = geometric_cutoff(s * lnq, prefactor, budget.tail_tol, budget.max_terms, what)
    n = np.arange(1, n_terms + 1, dtype=float)
    terms = np.exp(n * (s * lnq)) / -np.expm1(n * (step * lnq))
    tail = prefactor * math.exp((n_terms + 1) * s * lnq)
    return float(np.sum(terms[::-1])), tail, n_terms


def q_series_finite(q: float, s: float, count: int) -> float:
    """Sum ``q**(n*s) / (1 - q**n)`` for ``n = 1..count`` (no tail)."""
    lnq = math.log(q)
    n = np.arange(1, count + 1, dtype=float)
    terms = np.exp(n * (s * lnq)) / -np.expm1(n * lnq)
    return float(np.sum(terms[::-1]))


def shifted_q_series_finite(q: float, t: float, count: int) -> float:
    """Sum ``q**(t+j) / (1 - q**(t+j))`` for ``j = 0..count``."""
    lnq = math.log(q)
    x = (t + np.arange(count + 1, dtype=float)) * lnq
    terms = np.exp(x) / -np.expm1(x)
    return float(np.sum(terms[::-1]))


def _power_gap(n: float, c: float, m: int) -> float:
    # n**-m - (n + c)**-m without cancellation
    return n ** (-m) * -math.expm1(-m * math.log1p(c / n))


def k_series(t: float, k: float, budget: SeriesBudget, what: str = "k-series"):
    """Sum ``t / (n*k*(n*k + t))`` over ``n >= 1``.

    The summand is ``f(x) = (1/x - 1/(x + c)) / k`` with ``c = t/k``, whose
    derivatives all have constant sign. Terms ``n < N`` are summed directly and
    the tail from ``N`` uses Euler-Maclaurin through the ``B_6`` correction; the
    remainder is at most ``|f^(5)(N)| / 30240``.

    Returns ``(total, tail_bound, n_terms)``.
    """
    c = t / k
    n_terms = max(8, math.ceil((1.0 / (252.0 * k * budget.tail_tol)) ** (1.0 / 6.0)))
    if n_terms > budget.max_terms:
        raise BudgetExceededError(
            f"{what}: tail tolerance {budget.tail_tol:g} needs {n_terms} terms, cap is {budget.max_terms}",
            needed_terms=n_terms,
            max_terms=budget.max_terms,
        )
    n = np.arange(1, n_terms, dtype=float)
    head = float(np.sum((t / (n * k * (n * k + t)))[::-1]))

    big_n = float(n_terms)
    f0 = t / (big_n * k * (big_n * k + t))
    f1 = -_power_gap(big_n, c, 2) / k
    f3 = -6.0 * _power_gap(big_n, c, 4) / k
    f5 = -120.0 * _power_gap(big_n, c, 6) / k
    integral = math.log1p(c / big_n) / k
    tail = integral + f0 / 2.0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0
    bound = abs(f5) / 30240.0
    return head + tail, bound, n_terms
