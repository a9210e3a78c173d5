"""Exception hierarchy shared by all modules."""


class SpellnormError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SpellnormError):
    """Missing or inconsistent configuration (wrong flags, missing lexicon, ...)."""


class IngestionError(SpellnormError):
    """Input bytes could not be read (bad encoding, reserved symbol present)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(IngestionError):
    """A line has the wrong shape (e.g. column count)."""


class TrainingError(SpellnormError):
    """A backend could not be trained on the given data."""


class EvaluationError(SpellnormError):
    """Gold/prediction data that cannot be scored together."""
