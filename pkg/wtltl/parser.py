"""
Recursive-descent parser for wTLTL formulas

Precedence, loosest first:
    ->            (non-associative)
    ||  &&        (n-ary, optional weight list after one operator)
    U  T          (left-associative)
    !  F  G       (prefix)
    atoms         true, predicates, parenthesized formulas

Weighted operators carry one positive number per operand:
    (in(A) ||{2,1} in(B)) && F in(G)
"""

from typing import List, Mapping, Optional, Set

from errors import FormulaArityError, FormulaSyntaxError, FormulaWeightError
from .formula import (
    TRUE,
    Formula,
    conj,
    disj,
    eventually,
    always,
    implies,
    negate,
    predicate,
    then,
    until,
)
from .lexer import DISPLAY, Token, tokenize


# Reserved words are plain names inside predicate argument lists, so `in(G)` works
_ARG_WORDS = {"NAME", "EVENTUALLY", "ALWAYS", "UNTIL", "THEN", "TRUE"}


class _Parser:
    def __init__(self, tokens: List[Token], bindings: Mapping[str, float]):
        self.tokens = tokens
        self.bindings = bindings
        self.pos = 0
        # Tokens that would have been accepted at the current position
        self.expected: Set[str] = set()

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _check(self, *types: str) -> bool:
        self.expected.update(types)
        return self.current.type in types

    def _advance(self) -> Token:
        tok = self.current
        self.pos += 1
        self.expected = set()
        return tok

    def _expect(self, *types: str) -> Token:
        if self._check(*types):
            return self._advance()
        self._fail()

    def _fail(self, message: Optional[str] = None):
        tok = self.current
        if message is None:
            message = "unexpected end of input" if tok.type == "EOF" else f"unexpected token {tok.display}"
        raise FormulaSyntaxError(
            message,
            tok.line,
            tok.column,
            [DISPLAY.get(t, t) for t in self.expected],
        )

    # ------------------------------------------------------------------
    # Grammar rules
    # ------------------------------------------------------------------

    def parse(self) -> Formula:
        result = self.formula()
        self._expect("EOF")
        return result

    def formula(self) -> Formula:
        left = self.nary("OR")
        if self._check("IMPLIES"):
            self._advance()
            right = self.nary("OR")
            return implies(left, right)
        return left

    def nary(self, op: str) -> Formula:
        operand = (lambda: self.nary("AND")) if op == "OR" else self.until
        operands = [operand()]
        weights = None
        weights_tok = None
        while self._check(op):
            self._advance()
            if self._check("LBRACE"):
                if weights is not None:
                    self._fail("weights may be given only once per operator chain")
                weights_tok = self.current
                weights = self.weights()
            operands.append(operand())
        if len(operands) == 1:
            return operands[0]
        if weights is not None and len(weights) != len(operands):
            raise FormulaArityError(
                f"line {weights_tok.line}, column {weights_tok.column}: "
                f"{len(weights)} weights given for {len(operands)} operands"
            )
        build = disj if op == "OR" else conj
        return build(operands, weights)

    def weights(self) -> List[float]:
        self._expect("LBRACE")
        values = [self._weight()]
        while self._check("COMMA"):
            self._advance()
            values.append(self._weight())
        self._expect("RBRACE")
        return values

    def _weight(self) -> float:
        tok = self._expect("NUMBER", "NAME")
        value = tok.value
        if tok.type == "NAME":
            if tok.value not in self.bindings:
                raise FormulaWeightError(
                    f"line {tok.line}, column {tok.column}: no value bound to weight {tok.value!r}"
                )
            value = float(self.bindings[tok.value])
        if not value > 0:
            raise FormulaWeightError(
                f"line {tok.line}, column {tok.column}: weight must be positive, got {value}"
            )
        return value

    def until(self) -> Formula:
        left = self.unary()
        while self._check("UNTIL", "THEN"):
            op = self._advance()
            right = self.unary()
            left = until(left, right) if op.type == "UNTIL" else then(left, right)
        return left

    def unary(self) -> Formula:
        if self._check("NOT"):
            self._advance()
            return negate(self.unary())
        if self._check("EVENTUALLY"):
            self._advance()
            return eventually(self.unary())
        if self._check("ALWAYS"):
            self._advance()
            return always(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        if self._check("LPAREN"):
            self._advance()
            inner = self.formula()
            self._expect("RPAREN")
            return inner
        if self._check("TRUE"):
            self._advance()
            return TRUE
        if self._check("NAME"):
            return self.predicate()
        self._fail()

    def predicate(self) -> Formula:
        name = self._advance().value
        args = []
        if self._check("LPAREN"):
            self._advance()
            args.append(self._arg())
            while self._check("COMMA"):
                self._advance()
                args.append(self._arg())
            self._expect("RPAREN")
        comparison = None
        if self._check("LT", "GT"):
            op = "<" if self._advance().type == "LT" else ">"
            threshold = self._expect("NUMBER").value
            comparison = (op, threshold)
        return predicate(name, args, comparison)

    def _arg(self):
        tok = self._expect("NUMBER", *_ARG_WORDS)
        return tok.value


def parse(text: str, weights: Optional[Mapping[str, float]] = None) -> Formula:
    """
    Parse wTLTL formula text into a Formula.

    Weight lists may name values instead of writing them, e.g. `||{wA,wB}`;
    names are looked up in `weights`.

    Args:
        text: Formula source, e.g. "(in(A) T in(B)) && G clear(O1)"
        weights: Values for named weights

    Returns:
        The formula AST

    Raises:
        FormulaSyntaxError: Malformed text, with line/column and expected tokens
        FormulaWeightError: Non-positive or unbound weight
        FormulaArityError: Weight count differs from operand count
    """
    return _Parser(tokenize(text), weights or {}).parse()


