"""Exception types shared across the package."""


class CovlindError(Exception):
    """Base class for all package errors."""


class ContractError(CovlindError):
    """An input violates a documented precondition (non-Hermitian Hamiltonian,
    negative rate, non-nilpotent jump operator, ...)."""


class DimensionError(CovlindError):
    """Incompatible or malformed operator dimensions."""


class TruncationError(CovlindError):
    """A Fock-space truncation lost more weight than the caller allowed."""

    def __init__(self, message, deficit=None):
        super().__init__(message)
        self.deficit = deficit


class IntegrationError(CovlindError):
    """A time integration drifted outside its accuracy contract."""


class PositivityError(IntegrationError):
    """An integrated state developed a negative eigenvalue beyond tolerance."""


class ConfigError(CovlindError):
    """Invalid or unknown experiment configuration."""
