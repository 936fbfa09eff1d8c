class FlatforgeError(Exception):
    pass


class UsageError(FlatforgeError, ValueError):
    """Malformed input: wrong dimensions, bad parameters, non-flats, etc."""


class HypothesisError(FlatforgeError):
    """A lemma's hypotheses are violated by the supplied configuration."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(FlatforgeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ScaleRefusal(FlatforgeError):
    """The requested exhaustive computation exceeds the supported scale."""


class LemmaViolation(FlatforgeError):
    """A computation contradicted a proven statement; indicates a bug."""
