import numpy as np
import pytest

from errors import FormulaArityError, FormulaSyntaxError, FormulaWeightError
from helpers import random_formula
from wtltl import (
    TRUE,
    Kind,
    conj,
    depth,
    disj,
    eventually,
    is_nnf,
    negate,
    parse,
    predicate,
    predicates,
    to_text,
)
from wtltl.lexer import tokenize


def test_eventually_predicate():
    f = parse("F in(A)")
    assert f == eventually(predicate("in", ["A"]))


def test_weighted_or_inside_and():
    f = parse("(in(A) ||{2,1} in(B)) && F in(G)")
    assert f.kind is Kind.AND
    assert f.weights == (1.0, 1.0)
    left, right = f.children
    assert left.kind is Kind.OR
    assert left.weights == (2.0, 1.0)
    assert left.children == (predicate("in", ["A"]), predicate("in", ["B"]))
    assert right == eventually(predicate("in", ["G"]))


def test_missing_right_operand_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("in(A) U")
    err = info.value
    assert (err.line, err.column) == (1, 8)
    assert "'!'" in err.expected
    assert "name" in err.expected


def test_error_position_on_second_line():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("F in(A)\n  && )")
    assert (info.value.line, info.value.column) == (2, 6)


def test_illegal_character():
    with pytest.raises(FormulaSyntaxError, match="illegal character '#'"):
        parse("F in(A) # note")


def test_precedence_binds_until_tighter_than_and():
    f = parse("a U b && c")
    assert f.kind is Kind.AND
    assert f.children[0].kind is Kind.UNTIL


def test_until_is_left_associative():
    f = parse("a U b T c")
    assert f.kind is Kind.THEN
    assert f.children[0].kind is Kind.UNTIL


def test_and_binds_tighter_than_or_and_implies():
    f = parse("a || b && c -> d")
    assert f.kind is Kind.IMPLIES
    assert f.children[0].kind is Kind.OR
    assert f.children[0].children[1].kind is Kind.AND


def test_nary_chain_is_flat():
    f = parse("a && b && c")
    assert f.kind is Kind.AND
    assert len(f.children) == 3


def test_comparison_predicate():
    f = parse("x(1) < 0.5")
    assert f.name == "x"
    assert f.args == (1.0,)
    assert (f.comparison.op, f.comparison.threshold) == ("<", 0.5)


def test_reserved_words_are_plain_arguments():
    assert parse("in(G)").args == ("G",)
    assert parse("in(T)").args == ("T",)


def test_true_constant():
    assert parse("true") == TRUE
    assert parse("G true").children[0] == TRUE


def test_zero_weight_rejected():
    with pytest.raises(FormulaWeightError):
        parse("a ||{0,1} b")


def test_weight_count_mismatch():
    with pytest.raises(FormulaArityError):
        parse("a &&{1,2,3} b")


def test_weights_given_twice():
    with pytest.raises(FormulaSyntaxError, match="only once"):
        parse("a &&{1,2,3} b &&{1,1,1} c")


def test_named_weights_bound_at_parse_time():
    f = parse("a ||{wA,wB} b", {"wA": 2, "wB": 1})
    assert f.weights == (2.0, 1.0)


def test_unbound_named_weight():
    with pytest.raises(FormulaWeightError, match="wB"):
        parse("a ||{wA,wB} b", {"wA": 2})


def test_tokens_carry_columns():
    toks = tokenize("F  in(A)")
    assert [(t.type, t.column) for t in toks[:2]] == [("EVENTUALLY", 1), ("NAME", 4)]
    assert toks[-1].type == "EOF"


def test_to_text_round_trip_examples():
    for text in [
        "(in(A) T in(B)) && (!in(B) U in(A)) && G (clear(O1) && clear(O2))",
        "(F in(A) ||{2,1} F in(B)) && F in(G)",
        "!(y > 0.5) -> F x(0) < 1e-05",
        "true U (a &&{1,3} b)",
    ]:
        f = parse(text)
        assert parse(to_text(f)) == f


def test_to_text_round_trip_random(rng):
    for _ in range(300):
        f = random_formula(rng, 4)
        assert parse(to_text(f)) == f


def test_structural_helpers():
    f = parse("(a T b) && !c && G (x(0) > 1)")
    assert depth(f) == 2
    assert predicates(f) == {("a", 0), ("b", 0), ("c", 0), ("x", 1)}
    assert is_nnf(f)
    assert not is_nnf(parse("!(a && b)"))
    assert not is_nnf(parse("a -> b"))


def test_builders_validate_arity():
    with pytest.raises(FormulaArityError):
        conj([predicate("a")])
    with pytest.raises(FormulaArityError):
        disj([predicate("a"), predicate("b")], [1.0])
    with pytest.raises(FormulaWeightError):
        conj([predicate("a"), predicate("b")], [1.0, np.inf])
    assert negate(negate(TRUE)).children[0].children[0] == TRUE
