"""Exception hierarchy shared by every nfbeam module."""


class NearFieldError(Exception):
    """Base class for all library errors."""

    category = "error"


class DomainError(NearFieldError, ValueError):
    """Argument outside the mathematical domain of a function."""

    category = "config"


class ConfigError(NearFieldError, ValueError):
    category = "config"


class KindError(ConfigError):
    """Operation only defined for the other array kind."""


class ValidityError(ConfigError):
    """Point closer than the 1.2*D radiative near-field limit."""


class NumericalError(NearFieldError, ArithmeticError):
    category = "numerical"


class BracketError(NumericalError):
    """No sign change on the supplied root bracket."""


class DegenerateError(NumericalError):
    pass
