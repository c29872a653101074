"""
Toolkit Exceptions

Author: Mohammed Ismail AbdElmageid
"""
from typing import Optional


class ToricToolkitError(Exception):
    """Base class for all toolkit errors"""


class FanValidationError(ToricToolkitError):
    """Fan input violates the fan axioms"""
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class FanFileError(ToricToolkitError):
    """Malformed .fan file"""
    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConfigurationError(ToricToolkitError):
    """Invalid configuration or run parameters"""


class UnsupportedInputError(ToricToolkitError):
    """Input outside the supported scope (torsion Picard group, weight-inf block, ...)"""


class DivergenceError(ToricToolkitError):
    """Divergent integral or evaluation below the convergence abscissa"""


class BudgetExceededError(ToricToolkitError):
    """Search space of the generic enumerator exceeds the configured budget"""
    def __init__(self, message: str, estimate: int = 0, budget: int = 0):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class InternalConsistencyError(ToricToolkitError):
    """An internal invariant failed; indicates a bug or malformed internal data"""
