"""Exception taxonomy shared across the package.

User-facing input problems derive from :class:`InputError` (a ``ValueError``),
internal guard failures from :class:`InternalCheckError` (a ``RuntimeError``).
The CLI maps the former to exit code 1 and the latter to exit code 2.
"""


class SpectralRegError(Exception):
    """Base class for all package errors."""


class InputError(SpectralRegError, ValueError):
    """Invalid user input: bad parameters, malformed or unusable data."""


class InternalCheckError(SpectralRegError, RuntimeError):
    """A guarded impossibility happened anyway; indicates a bug, not bad input."""


# graph construction
class ParseError(InputError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_number, message):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SelfLoopError(InputError):
    pass


class NonPositiveWeightError(InputError):
    pass


class DisconnectedGraphError(InputError):
    pass


class AlphaOutOfRangeError(InputError):
    pass


# spectral decomposition and density matrices
class DegenerateTrivialSpaceError(InputError):
    """More than one near-zero eigenvalue: a disconnected operator slipped through."""


class SingularFunctionValueError(InputError):
    """Scalar function applied to the spectrum is undefined at some eigenvalue."""


class NegativeWeightError(InputError):
    pass


# diffusion operators
class NegativeTimeError(InputError):
    pass


class GammaOutOfRangeError(InputError):
    pass


class SingularResolventError(InternalCheckError):
    """The resolvent system was singular; cannot occur for gamma > 0 on a connected graph."""


class BadPreferenceVectorError(InputError):
    pass


class NegativeEigenvalueFractionalPowerError(InputError):
    """Non-integer walk power requested while the symmetrized walk is indefinite."""


class ZeroStartVectorError(InputError):
    pass


# regularizers and parameter maps
class DomainError(InputError):
    """Argument outside the regularizer's domain."""


class RangeError(InputError):
    """Argument outside the range of a gradient (inverse-gradient input)."""


class LambdaOutOfRangeError(InputError):
    pass


# solver
class EtaNonPositiveError(InputError):
    pass


class BisectionFailureError(InternalCheckError):
    """No unit-trace multiplier exists in the admissible interval, or bracketing failed."""


class NonConvergenceError(InternalCheckError):
    """The independent simplex solver did not reach its residual target."""


# equivalence checks
class AlphaTooSmallForFractionalPowerError(InputError):
    """Laziness below the positive-semidefiniteness threshold for a fractional step count."""
