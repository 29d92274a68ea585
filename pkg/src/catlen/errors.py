"""Shared exception hierarchy.

ValidationError means bad input (CLI exit code 2); InternalInconsistencyError
means a computation contradicted itself and signals a bug (CLI exit code 3).
"""


class CatlenError(Exception):
    pass


class ValidationError(CatlenError):
    pass


class InternalInconsistencyError(CatlenError):
    pass


class NonDynkinError(ValidationError):
    pass


class PosetTooLargeError(ValidationError):
    pass


class InfiniteDimensionalError(ValidationError):
    pass


class WindowTooSmallError(ValidationError):
    pass


class NotPrimitiveError(ValidationError):
    pass


class NotSmoothError(ValidationError):
    pass


class NotCompleteError(ValidationError):
    pass


class NotMonomialError(ValidationError):
    pass


class ExceptionalityFailureError(InternalInconsistencyError):
    pass


class CertificationFailureError(InternalInconsistencyError):
    pass
