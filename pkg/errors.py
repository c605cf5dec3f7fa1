"""
Exception hierarchy shared by every module
"""


class CouplingError(Exception):
    """Base class for all errors raised by the toolkit"""


class NegativeMass(CouplingError):
    pass


class NotNormalized(CouplingError):
    pass


class ZeroLength(CouplingError):
    pass


class LengthMismatch(CouplingError):
    pass


class OutOfRange(CouplingError):
    pass


class DimensionMismatch(CouplingError):
    pass


class InvalidP(CouplingError):
    pass


class DegenerateMarginal(CouplingError):
    pass


class InvariantViolation(CouplingError):
    pass


class ParseError(CouplingError):
    """Input could not be read; `source` names the inline string or file"""

    def __init__(self, message, source=None):
        self.source = source
        if source is not None:
            message = f"{source}: {message}"
        super().__init__(message)


class LimitExceeded(CouplingError):
    """Common base for the cap/budget errors (CLI exit status 3)"""


class VertexCapExceeded(LimitExceeded):
    def __init__(self, count_so_far, cap):
        self.count_so_far = count_so_far
        self.cap = cap
        super().__init__(f"vertex cap {cap} exceeded ({count_so_far} vertices found so far)")


class BudgetExceeded(LimitExceeded):
    def __init__(self, required, budget, what="search"):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} steps, budget is {budget}")
