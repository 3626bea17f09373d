"""Exception hierarchy shared by the model, parser, and engine."""

from __future__ import annotations


class ModelError(Exception):
    """Base class for every failure raised while building or querying a model.

    ``code`` is a stable short name used in validation reports and CLI
    diagnostics. ``subject`` names the offending symbol or rule, and
    ``line``/``col`` are filled in when the error is traced back to a
    source document.
    """

    code = "ModelError"

    def __init__(
        self,
        message: str,
        subject: str | None = None,
        line: int | None = None,
        col: int | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.subject = subject
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        if self.col is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, col {self.col}: {self.message}"


class InvalidTokenError(ModelError):
    code = "InvalidToken"


class EmptyModelError(ModelError):
    code = "EmptyModel"


class EmptyRhsError(ModelError):
    code = "EmptyRhs"


class DuplicateRuleIdError(ModelError):
    code = "DuplicateRuleId"


class MembershipOutOfRangeError(ModelError):
    code = "MembershipOutOfRange"


class CycleDetectedError(ModelError):
    code = "CycleDetected"

    def __init__(self, message: str, cycle: tuple[str, ...] = (), **kwargs) -> None:
        super().__init__(message, **kwargs)
        self.cycle = cycle


class KindConflictError(ModelError):
    code = "KindConflict"


class UnknownRootError(ModelError):
    code = "UnknownRoot"


class UnknownSymbolError(ModelError):
    code = "UnknownSymbol"


class UnknownRuleError(ModelError):
    code = "UnknownRule"


class NotAGoalError(ModelError):
    code = "NotAGoal"


class InvalidChainError(ModelError):
    code = "InvalidChain"


class MatrixModelMismatchError(ModelError):
    code = "MatrixModelMismatch"


class UnknownInterventionError(ModelError):
    code = "UnknownIntervention"


class DegreeOutOfRangeError(ModelError):
    code = "DegreeOutOfRange"


class ModelSyntaxError(ModelError):
    """Malformed model document. Always carries ``line`` and ``col``."""

    code = "SyntaxError"

    def __init__(self, message: str, line: int, col: int, expected: str = "") -> None:
        super().__init__(message, line=line, col=col)
        self.expected = expected
