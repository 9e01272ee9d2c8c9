"""Exception hierarchy shared by all modules."""

import os


class FotwError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 3)."""


class FormulaSyntaxError(FotwError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class VocabularyError(FotwError):
    """Arity conflicts, undeclared constants, reserved names."""


class EmptyWitnessError(FotwError):
    """No atom uses any variable of the requested set."""


class NotPrenexError(FotwError):
    pass


class ReplacementError(FotwError):
    """A rewrite site does not satisfy the replacement's side conditions."""


class OrderingError(FotwError):
    """An elimination ordering does not respect the depth function."""


class InvalidDecompositionError(FotwError):
    pass


class NotNormalizedError(FotwError):
    pass


class WidthError(FotwError):
    """A formula or decomposition exceeds the requested width bound."""


class StructureError(FotwError):
    pass


class TooLargeError(FotwError):
    """Input exceeds an exhaustive-search guard (lift with FOTW_GUARD_OVERRIDE=1)."""


def guard(condition, message):
    """Raise TooLargeError unless `condition` holds or the override is set."""
    if not condition and os.environ.get("FOTW_GUARD_OVERRIDE") != "1":
        raise TooLargeError(message)
