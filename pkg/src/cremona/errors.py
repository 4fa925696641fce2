"""Exception hierarchy shared by every module.

Everything raised on purpose derives from :class:`CremonaError`, which the
command-line front end maps to exit code 1.
"""


class CremonaError(Exception):
    """Base class for domain errors."""


class FieldMismatchError(CremonaError, ValueError):
    """Operands live over different coefficient fields."""


class VariableCountError(CremonaError, ValueError):
    """Operands have a different number of variables."""


class ParseError(CremonaError, ValueError):
    """Malformed polynomial text."""


class NoRealRootError(CremonaError, ValueError):
    pass


class DegenerateCompositionError(CremonaError):
    """Every component of a composite vanished identically."""


class WorkBoundExceeded(CremonaError):
    pass


class SamplingError(CremonaError):
    """A randomized protocol could not find a usable sample."""


class NotOnHypersurfaceError(CremonaError, ValueError):
    pass


class DegenerateSigmaError(CremonaError):
    pass


class ConfigurationError(CremonaError, ValueError):
    pass


class BasePointError(CremonaError):
    """The point handed to the bullet action is a base point."""


class ResidualBaseLocusError(CremonaError):
    """Part of a base locus is not defined over the working field."""
