"""Exception types raised by the toolkit.

Every error carries a short machine-readable ``code`` so the CLI can surface it
verbatim in reports.
"""


class KinetsError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class DimensionMismatch(KinetsError):
    code = "DIMENSION_MISMATCH"


class DegenerateFrame(KinetsError):
    code = "DEGENERATE_FRAME"


class DegenerateInput(KinetsError):
    code = "DEGENERATE_INPUT"


class SizeMismatch(KinetsError):
    code = "SIZE_MISMATCH"


class TooFewPoints(KinetsError):
    code = "TOO_FEW_POINTS"


class InternalFailure(KinetsError):
    code = "INTERNAL_FAILURE"


class ZeroPolynomial(KinetsError):
    code = "ZERO_POLYNOMIAL"


class IdenticalPoints(KinetsError):
    code = "IDENTICAL_POINTS"


class OutOfRange(KinetsError):
    code = "OUT_OF_RANGE"


class GeneralPositionViolation(KinetsError):
    code = "GENERAL_POSITION_VIOLATION"


class PreconditionError(KinetsError):
    code = "PRECONDITION"


class UnboundedProblem(KinetsError):
    code = "UNBOUNDED"


class SpecInvalid(KinetsError):
    code = "SPEC_INVALID"


class ResampleLimit(KinetsError):
    code = "RESAMPLE_LIMIT"


class ParseError(KinetsError):
    code = "PARSE_ERROR"
