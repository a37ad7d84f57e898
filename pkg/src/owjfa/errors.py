"""Exception hierarchy shared by every module of the workbench.

Each error carries the name of the module that raised it so the CLI can
report where a failure originated.
"""


class WorkbenchError(Exception):
    module = "owjfa"


# core

class CoreError(WorkbenchError):
    module = "core"


class ValidationError(CoreError):
    pass


class DuplicateState(ValidationError):
    pass


class DuplicateSymbol(ValidationError):
    pass


class OutOfRangeReference(ValidationError):
    pass


class DuplicateTransition(ValidationError):
    pass


class MissingStart(ValidationError):
    pass


class FormatError(CoreError):
    """Malformed automaton text. ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class AlphabetMismatch(CoreError):
    pass


# engines

class EngineError(WorkbenchError):
    module = "engines"


class SearchBudgetExceeded(EngineError):
    pass


class AlreadyHalted(EngineError):
    pass


class UnsupportedEngine(EngineError):
    pass


# analysis

class AnalysisError(WorkbenchError):
    module = "analysis"


class InsufficientData(AnalysisError):
    pass


class BoundViolation(AnalysisError):
    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


# langtools

class LangtoolsError(WorkbenchError):
    module = "langtools"


class CapExceeded(LangtoolsError):
    pass


class BoundsExceedSample(LangtoolsError):
    pass


class StateCapExceeded(LangtoolsError):
    pass


class NotComplete(LangtoolsError):
    pass


class UnknownFamily(LangtoolsError):
    pass


class BadParameter(LangtoolsError):
    pass
