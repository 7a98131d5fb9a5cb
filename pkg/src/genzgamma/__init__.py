"""Generalized Gamma and psi functions with certified inequality checks."""

from ._version import __version__
from .errors import BudgetExceededError, DomainError, GenzGammaError, HypothesisError, InconsistentFormsError
from .explorer import Axis, RegionMap, problem1_value, problem2_value, scan
from .gamma import (
    LogGammaValue,
    log_gamma_classical,
    log_gamma_k,
    log_gamma_p,
    log_gamma_pq,
    log_gamma_q,
    log_gamma_qk,
    log_q_bracket,
    pochhammer_k,
    q_bracket,
)
from .lemmas import (
    GFunction,
    ScalePair,
    SignCertificate,
    lemma1_value,
    lemma2_value,
    lemma3_value,
    lemma4_value,
    lemma_value,
)
from .params import DEFAULT_BUDGET, ParamSet, SeriesBudget
from .psi import (
    EULER_GAMMA,
    PsiValue,
    psi_classical,
    psi_k,
    psi_p,
    psi_pq_definitional,
    psi_pq_discrepancy,
    psi_pq_series,
    psi_q,
    psi_qk,
)
from .report import RunReport
from .theorems import (
    ChainCertificate,
    MonotoneWitness,
    TheoremSetup,
    certify_monotone,
    derivative_identity,
    log_G,
    log_H,
    log_S,
    log_T,
    verify_chain,
)

__all__ = [
    "__version__",
    "LogGammaValue",
    "log_gamma_classical",
    "log_gamma_k",
    "log_gamma_p",
    "log_gamma_pq",
    "log_gamma_q",
    "log_gamma_qk",
    "log_q_bracket",
    "pochhammer_k",
    "q_bracket",
    "GFunction",
    "ScalePair",
    "SignCertificate",
    "lemma1_value",
    "lemma2_value",
    "lemma3_value",
    "lemma4_value",
    "lemma_value",
    "EULER_GAMMA",
    "PsiValue",
    "psi_classical",
    "psi_k",
    "psi_p",
    "psi_pq_definitional",
    "psi_pq_discrepancy",
    "psi_pq_series",
    "psi_q",
    "psi_qk",
    "ChainCertificate",
    "MonotoneWitness",
    "TheoremSetup",
    "certify_monotone",
    "derivative_identity",
    "log_G",
    "log_H",
    "log_S",
    "log_T",
    "verify_chain",
    "BudgetExceededError",
    "DomainError",
    "GenzGammaError",
    "HypothesisError",
    "InconsistentFormsError",
    "Axis",
    "RegionMap",
    "problem1_value",
    "problem2_value",
    "scan",
    "DEFAULT_BUDGET",
    "ParamSet",
    "SeriesBudget",
    "RunReport",
]
