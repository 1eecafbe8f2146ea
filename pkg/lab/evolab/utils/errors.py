class EvolabError(Exception):
    """Base class for every error raised by the lab."""


class InvalidInputError(EvolabError, ValueError):
    """An argument violates the documented preconditions of an operation."""


class ProtocolViolationError(EvolabError, RuntimeError):
    """An object was used out of order, e.g. stepping a finished episode."""


class DegenerateDataError(EvolabError, ValueError):
    """The data carries no information for the requested statistic."""


class FormatError(EvolabError, ValueError):
    """An input file does not have the expected columns or shape."""


class CheckpointNotFoundError(EvolabError, FileNotFoundError):
    """A run directory lacks the checkpoint a command needs."""


class ConfigError(EvolabError, ValueError):
    """
    A configuration document could not be parsed or validated.

    Attributes:
        field (str): Dotted path of the offending field, empty if unknown.
        line (int | None): 1-based line number in the source document, if known.
    """

    def __init__(self, message: str, field: str = "", line: int | None = None):
        self.field = field
        self.line = line
        location = ""
        if field:
            location += f" [field {field}]"
        if line is not None:
            location += f" [line {line}]"
        super().__init__(f"{message}{location}")


class EvolutionAborted(EvolabError, RuntimeError):
    """
    An evaluation error stopped an evolution run.

    Attributes:
        partial_logs (list): The GenerationLog records completed before the failure.
    """

    def __init__(self, message: str, partial_logs: list):
        self.partial_logs = partial_logs
        super().__init__(message)
