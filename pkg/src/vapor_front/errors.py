"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VaporFrontError(Exception):
    pass


class DomainError(VaporFrontError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(VaporFrontError, ArithmeticError):
    pass


class QuadratureError(NumericError):
    """Adaptive quadrature gave up; carries the best value seen so far."""

    def __init__(self, message: str, value: float, err_estimate: float):
        super().__init__(f"{message} (best value {value!r}, error estimate {err_estimate!r})")
        self.value = value
        self.err_estimate = err_estimate


class OdeError(NumericError):
    pass


class SimulationError(NumericError):
    """Front integration failed; ``partial`` holds the samples computed so far."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ScenarioError(VaporFrontError):
    pass


class ScenarioParseError(ScenarioError):
    def __init__(self, message: str, line: int, column: int, path: str | None = None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ScenarioValidationError(ScenarioError, ValueError):
    pass
