"""
Error types and exit-code mapping for the PI-BB-TL toolkit

Every library failure derives from PibbError. The CLI maps exceptions to the
stable exit-code contract through exit_code_for().
"""

from typing import Iterable, Optional


class PibbError(ValueError):
    """Base class for all toolkit errors"""


# ============================================================================
# FORMULA ERRORS
# ============================================================================

class FormulaError(PibbError):
    """Formula text or structure is invalid"""


class FormulaSyntaxError(FormulaError):
    """
    Raised by the parser with the position of the offending token.

    Args:
        message: Human readable description
        line: 1-based line of the offending token
        column: 1-based column of the offending token
        expected: Token kinds that would have been accepted
    """

    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{detail}")


class FormulaArityError(FormulaError):
    """Operator received the wrong number of operands or weights"""


class FormulaWeightError(FormulaError):
    """Weight literal is not strictly positive and finite"""


# ============================================================================
# EVALUATION ERRORS
# ============================================================================

class EvaluationError(PibbError):
    """Formula could not be evaluated over a trace"""


class UnknownPredicateError(EvaluationError):
    """Predicate name/arity is not registered"""


class EmptyTraceError(EvaluationError):
    """Trace holds no states"""


class TraceDimensionError(EvaluationError):
    """Trace states do not match the dimension a predicate expects"""


# ============================================================================
# DMP ERRORS
# ============================================================================

class DmpError(PibbError):
    """Invalid DMP definition or failed integration"""


class DegenerateLayoutError(DmpError):
    """All kernel activations underflowed to zero"""


class NonFiniteStateError(DmpError):
    """Integration produced NaN/inf"""

    def __init__(self, step: int, detail: str = ""):
        self.step = step
        suffix = f": {detail}" if detail else ""
        super().__init__(f"non-finite DMP state at step {step}{suffix}")


# ============================================================================
# OPTIMIZER ERRORS
# ============================================================================

class OptimizerError(PibbError):
    """Invalid search distribution or update input"""


class CovarianceError(OptimizerError):
    """Covariance matrix is not square/symmetric"""


class WeightSumError(OptimizerError):
    """Sample weights do not sum to one"""


class SampleEvaluationError(OptimizerError):
    """Rollout or cost evaluation failed for one sample"""

    def __init__(self, update: int, sample: Optional[int], cause: Exception):
        self.update = update
        self.sample = sample
        self.cause = cause
        where = f"update {update}, sample {sample}" if sample is not None else f"update {update}, mean"
        super().__init__(f"evaluation failed at {where}: {cause}")


# ============================================================================
# INPUT ERRORS
# ============================================================================

class ScenarioConfigError(PibbError):
    """Scenario file failed validation"""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        prefix = f"{path}: " if path else ""
        super().__init__(f"{prefix}{message}")


class TraceFormatError(PibbError):
    """Trace or parameter CSV is malformed"""


# ============================================================================
# EXIT CODES
# ============================================================================

EXIT_SUCCESS = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT_ERROR = 2

EXIT_CODES = {
    EXIT_SUCCESS: "Optimization converged to a satisfying trajectory",
    EXIT_NOT_CONVERGED: "Optimization stopped without a satisfying trajectory",
    EXIT_INPUT_ERROR: "Invalid input - config, formula, trace or parameter file",
}

INPUT_ERRORS = (
    FormulaError,
    ScenarioConfigError,
    TraceFormatError,
    UnknownPredicateError,
    EmptyTraceError,
    TraceDimensionError,
)


def is_input_error(exc: BaseException) -> bool:
    """Check if the exception was caused by user input rather than the run"""
    return isinstance(exc, INPUT_ERRORS) or isinstance(exc, (FileNotFoundError, IsADirectoryError))


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception to the CLI exit-code contract.

    Args:
        exc: Exception raised while running a command

    Returns:
        EXIT_INPUT_ERROR for bad input, EXIT_NOT_CONVERGED otherwise
    """
    if is_input_error(exc):
        return EXIT_INPUT_ERROR
    return EXIT_NOT_CONVERGED
