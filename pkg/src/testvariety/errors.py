"""Exception types shared across the package."""


class TestVarietyError(Exception):
    """Base class for all package errors."""


class NotPrime(TestVarietyError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class SizeCapExceeded(TestVarietyError):
    pass


class CapExceeded(TestVarietyError):
    """An enumeration would exceed the configured assignment cap."""


class DegreeNotDividing(TestVarietyError):
    pass


class FieldMismatch(TestVarietyError):
    pass


class DegreeBoundViolated(TestVarietyError):
    pass


class SingularModel(TestVarietyError):
    def __init__(self, chart, witness=None):
        msg = f"singular model on the {chart} chart"
        if witness is not None:
            msg += f" (witness x = {witness})"
        super().__init__(msg)
        self.chart = chart
        self.witness = witness


class InconsistentCounts(TestVarietyError):
    pass


class NegativeCount(TestVarietyError):
    pass


class BudgetExhausted(TestVarietyError):
    def __init__(self, message, space_exhausted=False):
        super().__init__(message)
        self.space_exhausted = space_exhausted


class NotASolution(TestVarietyError):
    pass


class AssertionFailed(TestVarietyError):
    def __init__(self, message, m=None):
        super().__init__(message)
        self.m = m


class NotCompiled(TestVarietyError):
    pass


class PrescriptionInvalid(TestVarietyError):
    pass


class SentenceSyntaxError(TestVarietyError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position
