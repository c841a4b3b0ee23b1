"""Exception types raised by the analysis routines."""


class SEAPassivityError(Exception):
    """Base class for all errors raised by this package."""


class ZeroPolynomial(SEAPassivityError, ValueError):
    pass


class NotSimplePole(SEAPassivityError, ValueError):
    pass


class EvalAtPole(SEAPassivityError, ValueError):
    pass


class InsufficientSpan(SEAPassivityError, ValueError):
    """A regime boundary lies outside the swept frequency range."""


class InvalidTarget(SEAPassivityError, ValueError):
    pass


class Infeasible(SEAPassivityError):
    """No gain set satisfies the requested targets and margins."""


class UnknownScenario(SEAPassivityError, KeyError):
    pass


class ConfigError(SEAPassivityError, ValueError):
    """Malformed analysis configuration.

    ``field`` names the offending entry (dotted path) and ``line`` the
    JSON source line when known.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = (", ".join(where) + ": ") if where else ""
        super().__init__(prefix + message)
