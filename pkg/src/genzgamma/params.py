"""Parameter records and truncation budgets."""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

__all__ = [
    "ParamSet",
    "SeriesBudget",
    "DEFAULT_BUDGET",
    "check_t",
    "check_p",
    "check_q",
    "check_k",
]


def check_t(t: float, name: str = "t") -> float:
    t = float(t)
    if not (t > 0.0) or not math.isfinite(t):
        raise DomainError(f"{name} must be a finite positive real, got {t!r}")
    return t


def check_p(p) -> int:
    if isinstance(p, bool) or not isinstance(p, numbers.Integral):
        if isinstance(p, float) and p.is_integer():
            p = int(p)
        else:
            raise DomainError(f"p must be a positive integer, got {p!r}")
    p = int(p)
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return p


def check_q(q: float) -> float:
    q = float(q)
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in the open interval (0, 1), got {q!r}")
    return q


def check_k(k: float) -> float:
    k = float(k)
    if not (k > 0.0) or not math.isfinite(k):
        raise DomainError(f"k must be a finite positive real, got {k!r}")
    return k


@dataclass(frozen=True)
class ParamSet:
    """Generalization parameters ``p``, ``q`` and ``k``.

    A field left as ``None`` is marked unused for the family at hand; reading
    it through the accessor properties raises :class:`DomainError`.
    """

    p_value: Optional[int] = None
    q_value: Optional[float] = None
    k_value: Optional[float] = None

    def __post_init__(self):
        if self.p_value is not None:
            object.__setattr__(self, "p_value", check_p(self.p_value))
        if self.q_value is not None:
            object.__setattr__(self, "q_value", check_q(self.q_value))
        if self.k_value is not None:
            object.__setattr__(self, "k_value", check_k(self.k_value))

    def _get(self, name):
        value = getattr(self, f"{name}_value")
        if value is None:
            raise DomainError(f"parameter {name!r} is unused in this parameter set")
        return value

    @property
    def p(self) -> int:
        return self._get("p")

    @property
    def q(self) -> float:
        return self._get("q")

    @property
    def k(self) -> float:
        return self._get("k")

    def as_dict(self) -> dict:
        return {
            name: getattr(self, f"{name}_value")
            for name in ("p", "q", "k")
            if getattr(self, f"{name}_value") is not None
        }


@dataclass(frozen=True)
class SeriesBudget:
    """Truncation policy: absolute tail tolerance and a hard cap on terms."""

    tail_tol: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not (self.tail_tol > 0.0):
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        object.__setattr__(self, "max_terms", int(self.max_terms))

    def scaled(self, factor: float) -> "SeriesBudget":
        """Budget whose tolerance is divided by ``factor`` (for weighted sums)."""
        if factor <= 0.0:
            return self
        return SeriesBudget(self.tail_tol / factor, self.max_terms)

    def as_dict(self) -> dict:
        return {"tail_tol": self.tail_tol, "max_terms": self.max_terms}


DEFAULT_BUDGET = SeriesBudget()
