"""Exception hierarchy shared by every module."""


class BlackBoxError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(BlackBoxError):
    pass


class PartialityError(BlackBoxError, ZeroDivisionError):
    """An operation was applied at a point where it is undefined."""


class BoundExceededError(BlackBoxError):
    pass


class CapExceededError(BlackBoxError):
    """Enumeration grew past its cap; ``partial`` holds what was collected."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class ContractViolation(BlackBoxError):
    pass


class ValidationError(BlackBoxError, ValueError):
    pass


class InconsistencyError(BlackBoxError):
    pass


class NotInnerError(BlackBoxError):
    pass


class CharacteristicMismatch(BlackBoxError):
    pass


class DomainError(BlackBoxError, ValueError):
    pass


class NoSolutionError(BlackBoxError):
    pass


class DegenerateSamplerError(BlackBoxError):
    pass


class RecognitionInconsistency(BlackBoxError):
    pass


class WrongStructureError(BlackBoxError):
    pass


class InsufficientPlaintextError(BlackBoxError):
    """Known plaintexts leave more than one automorphism hypothesis alive."""

    def __init__(self, message, survivors=(), report=None):
        super().__init__(message)
        self.survivors = list(survivors)
        self.report = report
