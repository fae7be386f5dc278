"""Exception hierarchy. Everything raised on bad input derives from DomainError."""


class DomainError(ValueError):
    """Input violates a documented precondition."""


class LengthError(DomainError):
    pass


class NegativeWeightError(DomainError):
    pass


class ZeroMassError(DomainError):
    pass


class NormalizationError(DomainError):
    pass


class CapExceededError(DomainError):
    """A dense or joint-dimension cap would be exceeded."""


class CutoffError(DomainError):
    """Fock cutoff too small for the norm-deficit rule."""


class ConvergenceError(DomainError):
    pass
