"""Exception hierarchy shared by every module."""


class OKBError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(OKBError, ValueError):
    """An input violates a documented precondition or invariant."""


class FlagError(ValidationError):
    """A flag is inadmissible for the model it is paired with.

    ``witness`` carries the offending datum (e.g. a lattice point that gets a
    negative value) so the failure can be reported without rerunning.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnboundedError(OKBError, ValueError):
    """A slice or fiber would be unbounded."""


class NotDivisibleError(OKBError, ArithmeticError):
    """Exact polynomial division has a nonzero remainder."""


class ZeroSectionError(ValidationError):
    """The valuation of the zero section is undefined."""
