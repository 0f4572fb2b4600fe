"""Exception hierarchy shared by every module.

The command line maps the input-side errors to exit code 1 and the
validation-side errors to exit code 2 (see ``cli.EXIT_CODES``).
"""


class KummerHeightError(Exception):
    """Base class for all errors raised by this package."""


class InputError(KummerHeightError):
    """Malformed curve, point or place description."""


class NonIntegralPart(KummerHeightError):
    """A reduction-type formula produced a non-integer part."""


class BadReduction(KummerHeightError):
    """The curve has bad reduction where good reduction is required."""


class NotOnKummer(KummerHeightError):
    """The Kummer quartic does not vanish at the given coordinates."""


class InvalidPoint(KummerHeightError):
    """Mumford data fails b^2 = F (mod a) or is otherwise malformed."""


class AmbiguousDivision(KummerHeightError):
    """Pseudo-addition cannot recover w from w * z = B(x, y)."""


class UnsupportedTransformation(KummerHeightError):
    """Only diagonal, swap and scaling transformations are supported."""


class NonIntegralModel(KummerHeightError):
    """The model is not integral at the requested place."""


class PrecisionExhausted(KummerHeightError):
    """Truncated local arithmetic ran out of digits."""


class Disconnected(KummerHeightError):
    """Resistance requested between disconnected vertices."""


class RangeError(KummerHeightError):
    """Component coordinates outside their valid range."""


class NoConvergence(KummerHeightError):
    """Precision escalation hit the ceiling without two agreeing results."""


class RootIsolationFailure(KummerHeightError):
    """Polynomial roots could not be separated at the working precision."""


class FactorizationTimeout(KummerHeightError):
    """Integer factorization exceeded its time budget."""


class ValidationFailure(KummerHeightError):
    """A self-validation identity failed."""


class ChartError(KummerHeightError):
    """No affine chart with a non-square leading coefficient was found."""
