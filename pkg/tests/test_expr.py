from fractions import Fraction

import pytest

from vertexalg.expr import (
    BinOp,
    Gluing,
    Ident,
    Neg,
    NProd,
    Num,
    ParseError,
    Power,
    Translate,
    parse_expr,
)


def test_monomial():
    tree = parse_expr("y1^2*y2^-1")
    assert tree == BinOp("*", Power(Ident("y1"), 2), Power(Ident("y2"), -1))


def test_section_expression():
    tree = parse_expr("y2*d1 - k*T(y2)*y1^-1")
    assert tree == BinOp(
        "-",
        BinOp("*", Ident("y2"), Ident("d1")),
        BinOp("*", BinOp("*", Ident("k"), Translate(Ident("y2"))),
              Power(Ident("y1"), -1)),
    )


def test_nprod_node():
    tree = parse_expr("y1 .(0) d1")
    assert tree == NProd(Ident("y1"), 0, Ident("d1"))
    tree = parse_expr("y1 .(-1) d1 .(1) d2")
    assert tree == NProd(NProd(Ident("y1"), -1, Ident("d1")), 1, Ident("d2"))


def test_gluing_and_rational():
    assert parse_expr("w[1,2]") == Gluing(1, 2)
    assert parse_expr("3/2") == Num(Fraction(3, 2))
    assert parse_expr("-w[1,1] + 2*w[2,1]") == BinOp(
        "+", Neg(Gluing(1, 1)), BinOp("*", Num(Fraction(2)), Gluing(2, 1)))


def test_whitespace_invariance():
    a = parse_expr("y2*d1-k*T(y2)*y1^-1")
    b = parse_expr("  y2 * d1 -  k * T( y2 ) * y1 ^ -1 ")
    assert a == b


def test_parenthesized():
    assert parse_expr("(y1 + y2)^2") == Power(
        BinOp("+", Ident("y1"), Ident("y2")), 2)


def test_parse_errors():
    with pytest.raises(ParseError) as err:
        parse_expr("y1 *")
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_expr("(y1 + y2")
    with pytest.raises(ParseError):
        parse_expr("y1 ^ y2")
    with pytest.raises(ParseError):
        parse_expr("w[1]")
    with pytest.raises(ParseError):
        parse_expr("y1 y2")
