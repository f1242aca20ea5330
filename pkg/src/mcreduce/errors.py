"""Exception hierarchy.

Every error raised by the library derives from :class:`MCReduceError`. The
three intermediate classes map onto CLI exit codes: input validation (2),
computation failure (1), and resource caps (3).
"""


class MCReduceError(Exception):
    exit_code = 1


class ValidationError(MCReduceError, ValueError):
    exit_code = 2


class ComputationError(MCReduceError, ArithmeticError):
    exit_code = 1


class ResourceLimitError(MCReduceError):
    exit_code = 3


# -- input validation -------------------------------------------------------

class ParseError(ValidationError):
    pass


class NegativeEntry(ValidationError):
    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"negative entry {value!r} at row {row + 1}, column {col + 1}")


class RowSumViolation(ValidationError):
    def __init__(self, row, total):
        self.row, self.total = row, total
        super().__init__(f"row {row + 1} sums to {total!r}, expected 1")


class ZeroRow(ValidationError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row + 1} is all zeros and cannot be renormalized")


class EmptyClass(ValidationError):
    pass


class NonPositivePi(ValidationError):
    pass


class InvalidFixedSet(ValidationError):
    pass


class BadTarget(ValidationError):
    pass


class AggregationMismatch(ValidationError):
    pass


class LambdaTooSmall(ValidationError):
    pass


class TargetNotInStateList(ValidationError):
    pass


# -- computation ------------------------------------------------------------

class NotConverged(ComputationError):
    pass


class NotRegular(ComputationError):
    pass


class AbsoluteContinuityViolation(ComputationError):
    def __init__(self, row=None, col=None, message=None):
        self.row, self.col = row, col
        if message is None:
            message = (
                f"absolute continuity violated at ({row + 1}, {col + 1}): "
                "reference probability is 0 where the source is positive"
            )
        super().__init__(message)


# -- resource caps ----------------------------------------------------------

class TooLarge(ResourceLimitError):
    pass


class TooManySequences(ResourceLimitError):
    pass


class StateSpaceExceeded(ResourceLimitError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"reachable state space exceeds cap of {cap} states")
