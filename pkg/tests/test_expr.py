import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeglushkov.expr import (
    Apply,
    ExprSyntaxError,
    Product,
    Star,
    Sum,
    as_linear,
    contains_nullary,
    delinearize,
    is_linear,
    linearize,
    parse,
    sym,
    validate,
)
from treeglushkov.oracle import EnumerationBound, enumerate_language, random_expression
from treeglushkov.trees import Symbol, leaf

from conftest import POS, RUNNING

a, b = Symbol("a", 0), Symbol("b", 0)


def test_parse_running_example(running):
    expected = Product(
        Star(Sum(sym("f", sym("a"), sym("a")), sym("g", sym("b"))), a),
        b,
        sym("f", sym("g", sym("a")), sym("b")),
    )
    assert running == expected
    assert parse(str(running)) == running


def test_parse_single_symbol():
    assert parse("a") == Apply(a, ())


@pytest.mark.parametrize(
    "text, offset",
    [("f(a", 4), ("", 1), ("f(a,)", 5), ("a+", 3), ("a.b", 4)],
)
def test_syntax_error_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse(text)
    assert err.value.offset == offset


def test_mixed_arities_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("f(a)+f(a,a)")


def test_precedence():
    # star binds tighter than product, which binds tighter than sum
    e = parse("a+f(a,a)*a.ab")
    assert isinstance(e, Sum)
    assert isinstance(e.right, Product)
    assert isinstance(e.right.left, Star)


def test_validate(running):
    assert validate(running) == []
    problems = validate(Product(Apply(a), b, Apply(b)))
    assert any("absent from left operand" in p for p in problems)
    problems = validate(Apply(Symbol("f", 2), (Apply(a),)))
    assert any("arity mismatch" in p for p in problems)


def test_linearize_running_example(lin):
    assert str(lin) == "(f1(a,a)+g2(b))*a.bf3(g4(a),b)"
    assert lin.positions == frozenset(POS.values())
    single = linearize(parse("a"))
    assert single.positions == {a}
    assert single.expr == parse("a")


def test_is_linear(lin):
    assert is_linear(lin.expr)
    assert is_linear(parse("f(a,a)"))
    assert not is_linear(parse("g(a)+g(b)"))
    with pytest.raises(ValueError):
        as_linear(parse("g(a)+g(b)"))


def test_contains_nullary(lin):
    assert contains_nullary(Star(Apply(POS["f1"], (Apply(a), Apply(a))), a), a)
    assert contains_nullary(lin.expr, a)
    assert not contains_nullary(parse("f(a,a)"), a)


@given(st.integers(0, 10_000))
@settings(max_examples=100)
def test_linearize_roundtrip(seed):
    e = random_expression(seed)
    lin = linearize(e)
    assert is_linear(lin.expr)
    assert delinearize(lin) == e
    assert all(lin.delinearizer[p] == p.base for p in lin.positions)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_contains_nullary_matches_enumeration(seed):
    e = random_expression(seed, 4)
    lang = enumerate_language(e, EnumerationBound(1))
    for s in {x for x in lang} | {leaf(a), leaf(b)}:
        assert contains_nullary(e, s.label) == (s in lang)


@given(st.integers(0, 10_000))
def test_printer_roundtrip(seed):
    e = random_expression(seed)
    assert parse(str(e)) == e


def test_running_text_constant(running):
    assert str(running) == RUNNING
