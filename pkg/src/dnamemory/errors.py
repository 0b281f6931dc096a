"""Exception hierarchy shared by all modules."""


class DNAMemoryError(Exception):
    pass


class DesignError(DNAMemoryError):
    """Carrier design failed; ``constraint`` names what could not be met."""

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class LigationError(DNAMemoryError):
    def __init__(self, message, junction=None):
        super().__init__(message)
        self.junction = junction


class DecodeError(DNAMemoryError):
    pass


class UnreadableError(DecodeError):
    """No state (or no consistent mapping) explains the observation."""


class AmbiguousError(DecodeError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)
