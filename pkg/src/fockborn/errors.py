"""Exception types shared across the package."""


class FockBornError(Exception):
    """Base class for all package-specific errors."""


class DimMismatch(FockBornError):
    """Operands act on spaces of different dimensions."""


class NotUnitary(FockBornError):
    """Operator expected to be unitary within tolerance is not."""


class NotSelfAdjoint(FockBornError):
    """Operator expected to be self-adjoint within tolerance is not."""


class DegenerateSpectrum(FockBornError):
    """Two eigenvalues coincide within tolerance, so rank-1 spectral
    projectors are not defined."""


class NotProjector(FockBornError):
    """Matrix fails the orthogonal-projector checks."""


class ZeroWeight(FockBornError):
    """Torus weights must be nonzero integers."""


class NotNormalized(FockBornError):
    """Vector expected to have unit norm does not."""


class ZeroDenominator(FockBornError):
    """Normalizing matrix element of an averaging functional vanished."""


class BadDistribution(FockBornError):
    """Probability vector is negative or does not sum to one."""


class WindowTooLarge(FockBornError):
    """Diagnostic window exceeds the trace length."""


class ParseError(FockBornError):
    """Scenario file could not be parsed."""


class ValidationError(FockBornError):
    """Scenario contents violate an invariant."""
