"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Input violates a structural precondition (mismatched rings, bad prime, ...)."""


class NotDivisible(ArithmeticError):
    pass


class NotIntegral(ArithmeticError):
    pass


class HeuristicGCDFailed(ArithmeticError):
    pass


class NotSquarefreeError(StructuralError):
    pass


class UnluckyEvaluation(Exception):
    """A substitution image lost or corrupted structure; try another weight."""


class NotXDistinct(Exception):
    pass


class OracleInconclusive(Exception):
    pass


class BackendError(RuntimeError):
    """External bivariate backend failed; ``fallback`` holds the built-in result."""

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class PolySyntaxError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
