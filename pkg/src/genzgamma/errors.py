"""Exception types shared across the package."""


class GenzGammaError(Exception):
    """Base class for all package errors."""


class DomainError(GenzGammaError, ValueError):
    """An argument lies outside the domain of the requested function."""


class BudgetExceededError(GenzGammaError):
    """The requested tail tolerance cannot be met within the term cap."""

    def __init__(self, message, needed_terms=None, max_terms=None):
        super().__init__(message)
        self.needed_terms = needed_terms
        self.max_terms = max_terms


class InconsistentFormsError(GenzGammaError):
    """Two algebraically equal evaluation routes disagree beyond their error bounds."""


class HypothesisError(DomainError):
    """Inputs are valid numbers but violate a lemma or theorem hypothesis."""
