"""Recursive-descent parser for the expression mini-language.

Grammar (``^`` is right-associative, unary minus binds looser than ``^``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | 'x' | 'pi' | NAME '(' args ')' | '(' expr ')'

Exponents must reduce to real constants.  Functions: ``sqrt``, ``cbrt``,
``abs``, ``sin``, ``cos``, ``pow(e, c)``, ``cusp(alpha, center)`` and
``weierstrass(a, b, n)``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import List

from .exceptions import FracvelError, ParseError
from .functions import (
    Abs,
    Add,
    Const,
    Cos,
    Div,
    Expr,
    Mul,
    Pow,
    Sin,
    Sub,
    Var,
    Weierstrass,
    is_constant,
    make_cusp,
)


class TokenKind(enum.Enum):
    NUMBER = "number"
    IDENT = "identifier"
    PLUS = "'+'"
    MINUS = "'-'"
    STAR = "'*'"
    SLASH = "'/'"
    CARET = "'^'"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    END = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    position: int


_PUNCT = {
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "^": TokenKind.CARET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
}
_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_FUNCS = {"sqrt": 1, "cbrt": 1, "abs": 1, "sin": 1, "cos": 1,
          "pow": 2, "cusp": 2, "weierstrass": 3}


def tokenize(src: str) -> List[Token]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            tokens.append(Token(TokenKind.NUMBER, m.group(), i))
            i = m.end()
            continue
        m = _IDENT.match(src, i)
        if m:
            tokens.append(Token(TokenKind.IDENT, m.group(), i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token(TokenKind.END, "", n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: TokenKind) -> Token:
        if self.tok.kind is not kind:
            self.fail(f"unexpected {self._describe(self.tok)}", [kind.value])
        return self.advance()

    def fail(self, message, expected=()):
        raise ParseError(message, self.tok.position, expected)

    @staticmethod
    def _describe(t: Token) -> str:
        return t.kind.value if t.kind is TokenKind.END else repr(t.lexeme)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind is not TokenKind.END:
            self.fail(f"unexpected {self._describe(self.tok)}",
                      ["operator", TokenKind.END.value])
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            op = self.advance()
            right = self.term()
            left = Add(left, right) if op.kind is TokenKind.PLUS else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind in (TokenKind.STAR, TokenKind.SLASH):
            op = self.advance()
            right = self.unary()
            left = Mul(left, right) if op.kind is TokenKind.STAR else Div(left, right)
        return left

    def unary(self) -> Expr:
        if self.tok.kind is TokenKind.MINUS:
            self.advance()
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Mul(Const(-1.0), operand)
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind is TokenKind.CARET:
            self.advance()
            start = self.tok.position
            exponent = self.constant(self.unary(), start, "non-constant exponent")
            return Pow(base, exponent)
        return base

    def constant(self, e: Expr, position: int, message: str) -> float:
        if not is_constant(e):
            raise ParseError(message, position, ["constant"])
        try:
            v = e(0.0)
        except FracvelError as exc:
            raise ParseError(f"invalid constant ({exc})", position) from None
        if isinstance(v, complex) or not math.isfinite(v):
            raise ParseError("constant must be a finite real number", position)
        return float(v)

    def primary(self) -> Expr:
        t = self.tok
        if t.kind is TokenKind.NUMBER:
            self.advance()
            v = float(t.lexeme)
            if not math.isfinite(v):
                raise ParseError("number out of range", t.position)
            return Const(v)
        if t.kind is TokenKind.LPAREN:
            self.advance()
            e = self.expr()
            self.expect(TokenKind.RPAREN)
            return e
        if t.kind is TokenKind.IDENT:
            self.advance()
            if t.lexeme == "x":
                return Var()
            if t.lexeme == "pi":
                return Const(math.pi)
            if t.lexeme in _FUNCS:
                return self.call(t)
            raise ParseError(f"unknown name {t.lexeme!r}", t.position,
                             ["x", "pi"] + sorted(_FUNCS))
        self.fail(f"unexpected {self._describe(t)}",
                  ["number", "x", "function", TokenKind.LPAREN.value])

    def call(self, name: Token) -> Expr:
        self.expect(TokenKind.LPAREN)
        args = []  # (expr, position)
        if self.tok.kind is not TokenKind.RPAREN:
            while True:
                args.append((self.tok.position, self.expr()))
                if self.tok.kind is TokenKind.COMMA:
                    self.advance()
                    continue
                break
        self.expect(TokenKind.RPAREN)
        want = _FUNCS[name.lexeme]
        if len(args) != want:
            raise ParseError(
                f"{name.lexeme}() takes {want} argument{'s' if want > 1 else ''}, "
                f"got {len(args)}", name.position)
        fn = name.lexeme
        if fn == "sqrt":
            return Pow(args[0][1], 0.5)
        if fn == "cbrt":
            return Pow(args[0][1], 1.0 / 3.0)
        if fn == "abs":
            return Abs(args[0][1])
        if fn == "sin":
            return Sin(args[0][1])
        if fn == "cos":
            return Cos(args[0][1])
        consts = [self.constant(e, p, f"{fn}() parameter must be constant")
                  for p, e in (args[1:] if fn == "pow" else args)]
        try:
            if fn == "pow":
                return Pow(args[0][1], consts[0])
            if fn == "cusp":
                return make_cusp(consts[0], consts[1])
            a, b, n = consts
            if not float(n).is_integer():
                raise ParseError("weierstrass() term count must be an integer", args[2][0])
            return Weierstrass(a, b, int(n))
        except ParseError:
            raise
        except FracvelError as exc:
            raise ParseError(str(exc), name.position) from None


def parse(src) -> Expr:
    """Parse source text (``str`` or ``bytes``) into an expression tree.

    Raises ``ParseError`` carrying the offending byte offset.
    """
    if isinstance(src, (bytes, bytearray)):
        try:
            src = bytes(src).decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("non-ASCII byte", exc.start) from None
    elif any(ord(c) > 127 for c in src):
        bad = next(i for i, c in enumerate(src) if ord(c) > 127)
        raise ParseError("non-ASCII character", len(src[:bad].encode("utf-8")))
    if not src.strip():
        raise ParseError("empty expression", 0, ["expression"])
    return _Parser(tokenize(src)).parse()


# -- printing -----------------------------------------------------------------

_SUM, _PROD, _UNARY, _POW, _ATOM = range(5)


def _num(v: float) -> str:
    s = repr(float(v))
    return f"({s})" if s.startswith("-") else s


def _fmt(e: Expr, min_prec: int) -> str:
    if isinstance(e, Var):
        text, prec = "x", _ATOM
    elif isinstance(e, Const):
        if isinstance(e.value, complex):
            raise ValueError("complex constants have no source form")
        text, prec = _num(e.value), _ATOM
    elif isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        text = f"{_fmt(e.left, _SUM)} {op} {_fmt(e.right, _PROD)}"
        prec = _SUM
    elif isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        text = f"{_fmt(e.left, _PROD)} {op} {_fmt(e.right, _UNARY)}"
        prec = _PROD
    elif isinstance(e, Pow):
        text, prec = f"{_fmt(e.base, _ATOM)}^{_num(e.exponent)}", _POW
    elif isinstance(e, (Abs, Sin, Cos)):
        text, prec = f"{type(e).__name__.lower()}({_fmt(e.arg, _SUM)})", _ATOM
    elif isinstance(e, Weierstrass):
        text, prec = f"weierstrass({_num(e.a)}, {_num(e.b)}, {e.terms})", _ATOM
    else:
        raise TypeError(f"cannot print {type(e).__name__}")
    return f"({text})" if prec < min_prec else text


def to_source(e: Expr) -> str:
    """Source text that parses back to a structurally identical tree."""
    return _fmt(e, _SUM)
