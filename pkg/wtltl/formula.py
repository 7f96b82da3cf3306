"""
Formula AST for weighted truncated linear temporal logic

Formulas are immutable; construct them with the builder functions below or
with wtltl.parse(). Weights only live on `and`/`or` nodes and are stored
unnormalized; semantics normalize them at evaluation time.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

from errors import FormulaArityError, FormulaWeightError
from .constants import (
    BINARY_KINDS,
    INFIX_SYMBOLS,
    LEAF_KINDS,
    NARY_KINDS,
    PREFIX_SYMBOLS,
    UNARY_KINDS,
    Kind,
)

Arg = Union[float, str]


@dataclass(frozen=True)
class Comparison:
    """`f(y) < threshold` or `f(y) > threshold`"""
    op: str
    threshold: float

    def __post_init__(self):
        if self.op not in ("<", ">"):
            raise FormulaArityError(f"Unknown comparison operator {self.op!r}")
        if not math.isfinite(self.threshold):
            raise FormulaWeightError(f"Comparison threshold must be finite, got {self.threshold}")


@dataclass(frozen=True)
class Formula:
    kind: Kind
    children: Tuple["Formula", ...] = ()
    weights: Tuple[float, ...] = ()
    name: Optional[str] = None
    args: Tuple[Arg, ...] = ()
    comparison: Optional[Comparison] = field(default=None)

    def __post_init__(self):
        n = len(self.children)
        if self.kind in LEAF_KINDS and n != 0:
            raise FormulaArityError(f"{self.kind.value} takes no operands, got {n}")
        if self.kind in UNARY_KINDS and n != 1:
            raise FormulaArityError(f"{self.kind.value} takes exactly 1 operand, got {n}")
        if self.kind in BINARY_KINDS and n != 2:
            raise FormulaArityError(f"{self.kind.value} takes exactly 2 operands, got {n}")
        if self.kind in NARY_KINDS:
            if n < 2:
                raise FormulaArityError(f"{self.kind.value} needs at least 2 operands, got {n}")
            if len(self.weights) != n:
                raise FormulaArityError(
                    f"{self.kind.value} has {n} operands but {len(self.weights)} weights"
                )
            for w in self.weights:
                if not (w > 0 and math.isfinite(w)):
                    raise FormulaWeightError(f"Weights must be positive and finite, got {w}")
        elif self.weights:
            raise FormulaArityError(f"{self.kind.value} does not take weights")
        if self.kind is Kind.PREDICATE:
            if not self.name:
                raise FormulaArityError("Predicate needs a name")
        elif self.name is not None or self.args or self.comparison is not None:
            raise FormulaArityError(f"{self.kind.value} cannot carry a predicate payload")

    def __str__(self):
        return to_text(self)


# ============================================================================
# BUILDERS
# ============================================================================

TRUE = Formula(Kind.TRUE)


def predicate(name: str, args: Sequence[Arg] = (), comparison: Optional[Tuple[str, float]] = None) -> Formula:
    cmp = Comparison(comparison[0], float(comparison[1])) if comparison else None
    return Formula(Kind.PREDICATE, name=name, args=tuple(args), comparison=cmp)


def negate(child: Formula) -> Formula:
    return Formula(Kind.NOT, (child,))


def conj(children: Iterable[Formula], weights: Optional[Sequence[float]] = None) -> Formula:
    children = tuple(children)
    weights = tuple(float(w) for w in weights) if weights is not None else (1.0,) * len(children)
    return Formula(Kind.AND, children, weights)


def disj(children: Iterable[Formula], weights: Optional[Sequence[float]] = None) -> Formula:
    children = tuple(children)
    weights = tuple(float(w) for w in weights) if weights is not None else (1.0,) * len(children)
    return Formula(Kind.OR, children, weights)


def eventually(child: Formula) -> Formula:
    return Formula(Kind.EVENTUALLY, (child,))


def always(child: Formula) -> Formula:
    return Formula(Kind.ALWAYS, (child,))


def until(left: Formula, right: Formula) -> Formula:
    return Formula(Kind.UNTIL, (left, right))


def then(left: Formula, right: Formula) -> Formula:
    return Formula(Kind.THEN, (left, right))


def implies(left: Formula, right: Formula) -> Formula:
    return Formula(Kind.IMPLIES, (left, right))


# ============================================================================
# STRUCTURAL HELPERS
# ============================================================================

def _number(value: float) -> str:
    return repr(float(value))


def _arg(value: Arg) -> str:
    return value if isinstance(value, str) else _number(value)


def to_text(formula: Formula) -> str:
    """
    Render a formula in the concrete grammar accepted by parse().

    Binary and n-ary nodes are always parenthesized so the output re-parses
    to an equal AST. Unit weights are omitted.
    """
    kind = formula.kind
    if kind is Kind.TRUE:
        return "true"
    if kind is Kind.PREDICATE:
        text = formula.name
        if formula.args:
            text += "(" + ", ".join(_arg(a) for a in formula.args) + ")"
        if formula.comparison is not None:
            text += f" {formula.comparison.op} {_number(formula.comparison.threshold)}"
        return text
    if kind in UNARY_KINDS:
        child = to_text(formula.children[0])
        if formula.children[0].kind is Kind.PREDICATE and formula.children[0].comparison is not None:
            child = f"({child})"
        return f"{PREFIX_SYMBOLS[kind]}{child}" if kind is Kind.NOT else f"{PREFIX_SYMBOLS[kind]} {child}"
    symbol = INFIX_SYMBOLS[kind]
    parts = [to_text(c) for c in formula.children]
    if kind in NARY_KINDS:
        first_op = symbol
        if any(w != 1.0 for w in formula.weights):
            first_op += "{" + ",".join(_number(w) for w in formula.weights) + "}"
        text = parts[0] + f" {first_op} " + f" {symbol} ".join(parts[1:])
        return f"({text})"
    return f"({parts[0]} {symbol} {parts[1]})"


def depth(formula: Formula) -> int:
    """Leaves have depth 0"""
    if not formula.children:
        return 0
    return 1 + max(depth(c) for c in formula.children)


def predicates(formula: Formula) -> set:
    """Set of (name, arity) pairs used by the formula"""
    if formula.kind is Kind.PREDICATE:
        return {(formula.name, len(formula.args))}
    found = set()
    for child in formula.children:
        found |= predicates(child)
    return found


def is_nnf(formula: Formula) -> bool:
    """Negation normal form: `!` only directly above leaves, no `->`"""
    if formula.kind is Kind.IMPLIES:
        return False
    if formula.kind is Kind.NOT:
        return formula.children[0].kind in LEAF_KINDS
    return all(is_nnf(c) for c in formula.children)
