"""Exception types shared across the package."""


class DiophlabError(Exception):
    """Base class for all package errors."""


# --- algebraic number construction ---

class ConstantPolynomial(DiophlabError):
    pass


class NoRootInInterval(DiophlabError):
    pass


class MultipleRootsInInterval(DiophlabError):
    pass


class RationalInput(DiophlabError):
    pass


# --- integer point / multivector geometry ---

class LengthTooShort(DiophlabError):
    pass


class WrongLength(DiophlabError):
    pass


class NotSquare(DiophlabError):
    pass


class ZeroPoint(DiophlabError):
    pass


class ZeroInput(DiophlabError):
    pass


class ZeroSpan(DiophlabError):
    pass


class GradeOutOfRange(DiophlabError):
    pass


class NotNormalized(DiophlabError):
    pass


# --- polynomial maps ---

class FormMismatch(DiophlabError):
    """Two formulas for the same map disagreed: an implementation bug, not data."""


class DegenerateBasis(DiophlabError):
    pass


class NoNontrivialSolution(DiophlabError):
    """Internal error: a 2x3 homogeneous system reported a trivial kernel."""


# --- minimal point engine ---

class XiOutOfRange(DiophlabError):
    pass


class DegreeTooSmall(DiophlabError):
    pass


class MismatchFound(DiophlabError):
    """Engine output disagrees with the brute-force definition."""


# --- derived structure ---

class TooFewRecords(DiophlabError):
    pass


class DimensionCollapse(DiophlabError):
    pass


class IndexNotInI(DiophlabError):
    pass


class GridOutOfRange(DiophlabError):
    pass


# --- constants ---

class ResidualTooLarge(DiophlabError):
    pass


class PrecisionError(DiophlabError):
    """A certified comparison failed to resolve within the iteration budget."""
