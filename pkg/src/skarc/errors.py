"""Exception hierarchy shared by every skarc module."""


class SkarcError(Exception):
    """Base class for domain errors raised by skarc (CLI exit code 1)."""


class DomainError(SkarcError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ResourceLimitError(SkarcError):
    """A request would exceed a hard resource limit (e.g. base-net size)."""


class SynthesisError(SkarcError):
    """The synthesizer could not reach the requested precision."""

    def __init__(self, message, best_distance=None, best_word=None):
        super().__init__(message)
        self.best_distance = best_distance
        self.best_word = best_word


class EnsembleShortfallError(SkarcError):
    """Fewer unique sequences than requested were found within the attempt budget."""

    def __init__(self, message, found, requested):
        super().__init__(message)
        self.found = found
        self.requested = requested
