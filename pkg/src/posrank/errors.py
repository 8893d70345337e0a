"""Exception types shared across the toolkit."""


class PosrankError(Exception):
    """Base class for all toolkit errors."""


class MalformedLine(PosrankError):
    """A lexicon database line could not be parsed."""

    def __init__(self, filename, lineno, reason):
        super().__init__(f"{filename}:{lineno}: {reason}")
        self.filename = filename
        self.lineno = lineno
        self.reason = reason


class RecordError(PosrankError):
    """A corpus record is missing required fields."""

    def __init__(self, lineno, reason):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class CorpusLoadError(PosrankError):
    """Raised after a full pass when any record failed to load."""

    def __init__(self, record_errors):
        self.record_errors = record_errors
        lines = "; ".join(str(e) for e in record_errors)
        super().__init__(f"{len(record_errors)} bad record(s): {lines}")


class NoSuchPos(PosrankError):
    """The caption has no token of the requested part-of-speech."""


class NoAdjacentPair(PosrankError):
    """The caption has no two consecutive perturbable tokens."""


class UnknownCaption(PosrankError):
    """A score row or query references a caption id not in the suite/corpus."""


class LengthMismatch(PosrankError):
    """A score row has the wrong number of values for its negative set."""


class NonFiniteScore(PosrankError):
    """A score row contains NaN or infinity."""


class MissingGroundTruth(PosrankError):
    """A retrieval query has no ground-truth match in the score matrix."""


class EmptyInput(PosrankError):
    """A metric was asked to aggregate over zero items."""


class DivergenceDetected(PosrankError):
    """The toy training loss became non-finite."""
