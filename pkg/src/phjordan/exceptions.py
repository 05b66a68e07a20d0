"""Exception hierarchy.

Numerical failures (ill-posed clustering, conditioning) are separated from
input errors so the command line front end can map them to distinct exit
codes.
"""


class PHJordanError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PHJordanError, ValueError):
    """Raised when an argument is malformed."""


class DimensionError(InputError):
    """Raised when a matrix has the wrong shape."""


class NonSquare(DimensionError):
    pass


class TooLarge(DimensionError):
    pass


class ParseError(InputError):
    """Raised when a matrix file cannot be parsed.

    ``line`` and ``column`` are 1-based and may be ``None`` when the error
    is structural rather than lexical.
    """

    def __init__(self, msg, line=None, column=None):
        if line is not None:
            msg = f"{msg} (line {line}, column {column})"
        super().__init__(msg)
        self.line = line
        self.column = column


class FamilyParseError(ParseError):
    pass


class NumericalError(PHJordanError):
    """Raised when a computation cannot be certified at the given tolerances."""


class SingularMatrix(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class ClusterAmbiguity(NumericalError):
    """Two eigenvalue clusters sit too close to the clustering threshold."""


class IllConditioned(NumericalError):
    pass


class AmbiguousRealness(NumericalError):
    pass


class NearSingular(NumericalError):
    pass


class NoInvertibleM(NumericalError):
    pass


class ConditionViolated(PHJordanError):
    """The spectrum does not satisfy the real-or-conjugate-pair condition."""


class PairingMismatch(PHJordanError):
    pass


class PairingUnavailable(PHJordanError):
    pass


class NotASymmetry(PHJordanError):
    pass


class NotInvolutory(PHJordanError):
    pass


class NotTSymmetric(PHJordanError):
    pass
