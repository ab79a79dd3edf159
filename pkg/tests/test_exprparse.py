import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracvel.exceptions import ParseError
from fracvel.exprparse import TokenKind, parse, to_source, tokenize
from fracvel.functions import (
    Abs, Add, Const, Cos, Div, Mul, Pow, Sin, Sub, Var, Weierstrass, X, make_cusp,
)

# (source, x, value) with the value worked out by hand
VALUES = [
    ("1", 3.0, 1.0),
    ("x", 3.0, 3.0),
    ("x + 2", 3.0, 5.0),
    ("x - 2 - 1", 3.0, 0.0),
    ("x * 2 + 1", 3.0, 7.0),
    ("1 + x * 2", 3.0, 7.0),
    ("(1 + x) * 2", 3.0, 8.0),
    ("12 / 4 / 3", 0.0, 1.0),
    ("2^3^2", 0.0, 512.0),
    ("-x^2", 3.0, -9.0),
    ("(-x)^2", 3.0, 9.0),
    ("-2^2", 0.0, -4.0),
    ("2^-1", 0.0, 0.5),
    ("x^-2", 2.0, 0.25),
    ("--x", 3.0, 3.0),
    ("-(x - 5)", 3.0, 2.0),
    ("2 * -x", 3.0, -6.0),
    ("x^0.5", 16.0, 4.0),
    ("sqrt(x)", 16.0, 4.0),
    ("cbrt(x)", 27.0, 3.0),
    ("abs(x - 5)", 3.0, 2.0),
    ("sin(0)", 1.0, 0.0),
    ("cos(0) + x", 1.0, 2.0),
    ("pow(x, 3)", 2.0, 8.0),
    ("pow(x + 1, 0.5)", 3.0, 2.0),
    ("cusp(0.5, 1)", 5.0, 2.0),
    ("cusp(0.5, 1)", -3.0, 2.0),
    ("x^(1/2)", 9.0, 3.0),
    ("x^(2-1)", 7.0, 7.0),
    ("1e2 * x", 0.5, 50.0),
    ("2.5E-1 + x", 0.75, 1.0),
    (".5 * x", 4.0, 2.0),
    ("3. * x", 2.0, 6.0),
    ("pi", 0.0, math.pi),
    ("cos(pi * x)", 1.0, -1.0),
    ("  x\t*\n3 ", 2.0, 6.0),
    ("x / (x + 1)", 1.0, 0.5),
    ("(x)", 2.0, 2.0),
    ("((((x))))", 2.0, 2.0),
    ("x*x*x", 2.0, 8.0),
    ("x - (x - 1)", 9.0, 1.0),
    ("x / 2 * 4", 1.0, 2.0),
    ("x ^ 2 ^ 0.5", 3.0, 3.0 ** (2 ** 0.5)),
    ("abs(-x)", 2.0, 2.0),
    ("sqrt(abs(x))", -4.0, 2.0),
    ("1/(1+x^2)", 1.0, 0.5),
    ("weierstrass(0.5, 3, 1)", 0.0, 1.0),
    ("weierstrass(0.5, 3, 2)", 0.0, 1.5),
    ("x^0", 7.0, 1.0),
    ("-1", 0.0, -1.0),
    ("-x", 2.0, -2.0),
    ("2 - -x", 2.0, 4.0),
    ("sqrt(x)", -1.0, 1j),
]


@pytest.mark.parametrize("src,x,want", VALUES)
def test_evaluates_to_hand_value(src, x, want):
    assert parse(src)(x) == pytest.approx(want, rel=1e-14, abs=1e-14)


@pytest.mark.parametrize("src", [s for s, _, _ in VALUES])
def test_corpus_round_trips(src):
    e = parse(src)
    assert parse(to_source(e)) == e


def test_corpus_is_large_enough():
    assert len({s for s, _, _ in VALUES}) >= 50


def test_unary_minus_binds_looser_than_power():
    assert parse("-x^2") == Mul(Const(-1.0), Pow(Var(), 2.0))
    assert parse("-3") == Const(-3.0)


def test_power_is_right_associative():
    assert parse("x^2^3") == Pow(Var(), 8.0)


def test_functions_build_expected_nodes():
    assert parse("sqrt(x)") == Pow(X, 0.5)
    assert parse("cbrt(x)") == Pow(X, 1 / 3)
    assert parse("cusp(0.3, 2)") == make_cusp(0.3, 2.0)
    assert parse("weierstrass(0.5, 3, 10)") == Weierstrass(0.5, 3.0, 10)


def test_bytes_are_accepted():
    assert parse(b"x + 1") == Add(X, Const(1.0))


def test_tokenizer_positions():
    toks = tokenize("sin( x)+2")
    assert [(t.kind, t.position) for t in toks] == [
        (TokenKind.IDENT, 0), (TokenKind.LPAREN, 3), (TokenKind.IDENT, 5),
        (TokenKind.RPAREN, 6), (TokenKind.PLUS, 7), (TokenKind.NUMBER, 8), (TokenKind.END, 9),
    ]


ERRORS = [
    ("", 0, "empty"),
    ("   ", 0, "empty"),
    ("x +", 3, "unexpected end of input"),
    ("sqrt(x", 6, "expected ')'"),
    ("(x", 2, "expected ')'"),
    ("x )", 2, "unexpected ')'"),
    ("x $ 1", 2, "unexpected character"),
    ("foo(x)", 0, "unknown name"),
    ("y + 1", 0, "unknown name"),
    ("2^x", 2, "non-constant exponent"),
    ("x^(1+x)", 2, "non-constant exponent"),
    ("sin(x, 2)", 0, "takes 1 argument"),
    ("pow(x)", 0, "takes 2 arguments"),
    ("cusp(x, 0)", 5, "must be constant"),
    ("cusp(1.5, 0)", 0, "cusp exponent"),
    ("weierstrass(0.5, 3, 2.5)", 20, "integer"),
    ("weierstrass(2, 3, 5)", 0, "0 < a < 1"),
    ("x x", 2, "unexpected 'x'"),
    ("1e999", 0, "out of range"),
    ("2^(-1)^0.5", 2, "finite real"),
    ("x^(0^-1)", 2, "invalid constant"),
    ("x ^ é", 4, "non-ASCII"),
    ("*x", 0, "unexpected '*'"),
]


@pytest.mark.parametrize("src,position,fragment", ERRORS)
def test_errors_carry_position(src, position, fragment):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.position == position
    assert fragment in str(info.value)
    assert f"position {position}" in str(info.value)


def test_non_ascii_bytes_report_byte_offset():
    with pytest.raises(ParseError) as info:
        parse(b"x + \xff")
    assert info.value.position == 4


@given(st.binary(max_size=64))
def test_arbitrary_bytes_never_escape_as_other_errors(data):
    try:
        e = parse(data)
    except ParseError as exc:
        assert 0 <= exc.position <= len(data)
        return
    assert parse(to_source(e)) == e


@given(st.text(alphabet="x0123456789.+-*/^() ,sqrtabcinpoweul", max_size=40))
def test_grammar_alphabet_fuzz(src):
    try:
        parse(src)
    except ParseError as exc:
        assert 0 <= exc.position <= len(src)


constants = st.floats(-1e6, 1e6, allow_nan=False).map(Const)
exponents = st.sampled_from([0.5, 1 / 3, 2.0, 3.0, -1.0, 0.25, 1.5])


def _trees():
    leaves = st.one_of(st.just(Var()), constants)
    return st.recursive(leaves, lambda sub: st.one_of(
        st.builds(Add, sub, sub), st.builds(Sub, sub, sub),
        st.builds(Mul, sub, sub), st.builds(Div, sub, sub),
        st.builds(Pow, sub, exponents),
        st.builds(Abs, sub), st.builds(Sin, sub), st.builds(Cos, sub),
    ), max_leaves=12)




@given(_trees())
def test_printer_parser_round_trip(e):
    back = parse(to_source(e))
    assert back == e


@given(_trees(), st.floats(-2, 2))
def test_round_trip_preserves_values(e, x):
    try:
        want = e(x)
    except Exception:
        return
    got = parse(to_source(e))(x)
    if np.isnan(want):
        assert np.isnan(got)
    else:
        assert got == want
