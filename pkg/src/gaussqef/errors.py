"""Exception and warning hierarchy.

Two families matter to callers (and to the CLI exit codes): ``InputError`` for
malformed or inconsistent input, ``DomainError`` for well-formed input that
falls outside the region where a formula applies.
"""


class GaussQefError(ValueError):
    """Base class for all library errors."""


class InputError(GaussQefError):
    """Malformed input: wrong shape, wrong symmetry, unparseable data."""


class DomainError(GaussQefError):
    """Well-formed input outside the admissible domain of an operation."""


class DimensionError(InputError):
    pass


class MalformedCCRError(InputError):
    """CCR matrix is not antisymmetric within tolerance."""


class SymmetryError(InputError):
    """A matrix required to be (anti)symmetric is not."""


class SchemaError(InputError):
    """Problem file violates the expected schema.

    Args:
        path (str): dotted location of the offending field, e.g. ``weights[2].sigma``
        message (str): what is wrong with it
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class SingularCCRError(DomainError):
    pass


class SingularMatrixError(DomainError):
    pass


class BranchCutError(DomainError):
    """A matrix logarithm or square root was requested on its branch cut.

    The offending value (eigenvalue or determinant) is kept on ``value``.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class HeisenbergViolationError(DomainError):
    """``P + i Theta`` is not positive semidefinite."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotPositiveDefiniteError(DomainError):
    pass


class InfeasibleError(DomainError):
    """A moment or estimator does not exist for the given parameters."""


class DivergenceError(DomainError):
    """An integration or iteration escaped to infinity."""


class ConjugationSymmetryError(DomainError):
    """A matrix which must be real came out with a large imaginary part."""


class DegeneracyWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    pass


class BranchRiskWarning(UserWarning):
    """A principal logarithm was taken outside the norm guard."""
