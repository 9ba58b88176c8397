class DomainError(ValueError):
    """Argument outside the domain of a function."""


class ConstraintError(ValueError):
    """Parameters violate a structural constraint of a construction."""


class SizeError(ValueError):
    """Exact computation requested beyond the enumeration cap."""


class BracketError(RuntimeError):
    """A root-finding bracket does not straddle the target."""


class CertificationError(RuntimeError):
    """A certified sweep could not establish the claimed inequality.

    The failing cell is kept on the exception for debugging.
    """

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell
