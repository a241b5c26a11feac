"""Shared exception types."""


class ConceptSpaceError(Exception):
    """Base class for all library errors."""


class EmptyCorpus(ConceptSpaceError):
    pass


class MalformedRecord(ConceptSpaceError):
    def __init__(self, line: int, reason: str = ""):
        self.line = line
        super().__init__(f"malformed record at line {line}: {reason}")


class UnknownScoringKind(ConceptSpaceError):
    pass


class DimensionMismatch(ConceptSpaceError):
    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        super().__init__(f"row {row}: expected dim {expected}, got {got}")


class MissingFile(ConceptSpaceError):
    pass


class UnknownWord(ConceptSpaceError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown word: {word!r}")


class UnknownConcept(ConceptSpaceError):
    pass


class DuplicateDescriptor(ConceptSpaceError):
    pass


class ConvergenceFailure(ConceptSpaceError):
    pass


class LevelOutOfRange(ConceptSpaceError):
    pass


class StaleIndex(ConceptSpaceError):
    pass


class NoConcepts(ConceptSpaceError):
    pass


class DegenerateExtent(ConceptSpaceError):
    pass


class UntrainedModel(ConceptSpaceError):
    pass


class ForbiddenAction(ConceptSpaceError):
    def __init__(self, level: str, kind: str):
        self.level = level
        self.kind = kind
        super().__init__(f"action {kind} not permitted on level {level}")


class UnknownTarget(ConceptSpaceError):
    pass


class LastConcept(ConceptSpaceError):
    pass


class EmptyQueue(ConceptSpaceError):
    pass


class JobAlreadyRunning(ConceptSpaceError):
    pass
