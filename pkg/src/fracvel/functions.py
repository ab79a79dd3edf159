"""Function model: closed-form expression trees and uniformly sampled signals.

Both kinds are callables accepting a scalar or a numpy array of abscissae and
expose a ``domain`` pair, which is all the difference operators need.

>>> f = sqrt(X)
>>> f(0.04)
0.2
>>> f(-0.04)
0.2j
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exceptions import (
    DomainError,
    NotDifferentiableError,
    ParameterError,
    RangeError,
)
from .scalar import as_python, spow

DEFAULT_WEIERSTRASS_TERMS = 40


def _wrap(v) -> "Expr":
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float, complex, np.number)):
        return Const(v)
    raise TypeError(f"cannot use {type(v).__name__} in an expression")


class Expr:
    """Base class of expression nodes.

    Nodes are immutable dataclasses compared structurally.  Arithmetic
    operators build new trees, so ``X**0.5 * cbrt(X)`` is a valid expression.
    """

    domain: Tuple[float, float] = (-math.inf, math.inf)

    @property
    def children(self) -> tuple:
        return ()

    def __call__(self, x):
        """Evaluate at a scalar or an array of points."""
        scalar_in = np.ndim(x) == 0
        arr = np.asarray(x)
        if not np.iscomplexobj(arr):
            arr = arr.astype(float, copy=False)
        out = np.asarray(self._eval(arr))
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return as_python(out[()]) if scalar_in else out

    def _eval(self, x):
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Sub(self, _wrap(other))

    def __rsub__(self, other):
        return Sub(_wrap(other), self)

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __rmul__(self, other):
        return Mul(_wrap(other), self)

    def __truediv__(self, other):
        return Div(self, _wrap(other))

    def __rtruediv__(self, other):
        return Div(_wrap(other), self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            raise TypeError("exponent must be a real constant")
        return Pow(self, float(exponent))

    def __neg__(self):
        return Mul(Const(-1.0), self)

    def __str__(self):
        from .exprparse import to_source

        return to_source(self)


@dataclass(frozen=True, eq=True, repr=False)
class Var(Expr):
    def _eval(self, x):
        return x

    def __repr__(self):
        return "Var()"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: complex | float

    def __post_init__(self):
        v = self.value
        if isinstance(v, (complex, np.complexfloating)):
            v = complex(v)
        else:
            v = float(v)
        object.__setattr__(self, "value", v)

    def _eval(self, x):
        return np.full(np.shape(x), self.value)

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Expr):
    left: Expr
    right: Expr

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(_Binary):
    def _eval(self, x):
        return self.left._eval(x) + self.right._eval(x)


class Sub(_Binary):
    def _eval(self, x):
        return self.left._eval(x) - self.right._eval(x)


class Mul(_Binary):
    def _eval(self, x):
        return self.left._eval(x) * self.right._eval(x)


class Div(_Binary):
    def _eval(self, x):
        den = self.right._eval(x)
        if np.any(den == 0):
            raise DomainError(f"division by zero in {self}", expr=self)
        return self.left._eval(x) / den


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: float

    def __post_init__(self):
        e = float(self.exponent)
        if not math.isfinite(e):
            raise ParameterError("exponent must be finite")
        object.__setattr__(self, "exponent", e)

    @property
    def children(self):
        return (self.base,)

    def _eval(self, x):
        try:
            return spow(self.base._eval(x), self.exponent)
        except DomainError as exc:
            raise DomainError(f"{exc} in {self}", expr=self) from None

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exponent!r})"


@dataclass(frozen=True, repr=False)
class _Unary(Expr):
    arg: Expr

    @property
    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"{type(self).__name__}({self.arg!r})"


class Abs(_Unary):
    def _eval(self, x):
        return np.abs(self.arg._eval(x))


class Sin(_Unary):
    def _eval(self, x):
        return np.sin(self.arg._eval(x))


class Cos(_Unary):
    def _eval(self, x):
        return np.cos(self.arg._eval(x))


@dataclass(frozen=True)
class Weierstrass(Expr):
    """Truncated Weierstrass sum ``sum_{n<terms} a**n cos(b**n pi x)``."""

    a: float
    b: float
    terms: int = DEFAULT_WEIERSTRASS_TERMS

    def __post_init__(self):
        if not (0 < self.a < 1):
            raise ParameterError(f"weierstrass requires 0 < a < 1, got {self.a}")
        if not self.b > 1:
            raise ParameterError(f"weierstrass requires b > 1, got {self.b}")
        if int(self.terms) != self.terms or self.terms < 1:
            raise ParameterError(f"weierstrass requires terms >= 1, got {self.terms}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "terms", int(self.terms))

    def _eval(self, x):
        total = np.zeros(np.shape(x), dtype=np.result_type(x, float))
        for n in range(self.terms):
            total = total + self.a**n * np.cos(self.b**n * np.pi * x)
        return total


X = Var()


def sqrt(e) -> Pow:
    return Pow(_wrap(e), 0.5)


def cbrt(e) -> Pow:
    return Pow(_wrap(e), 1.0 / 3.0)


def make_cusp(alpha: float, center: float = 0.0, sign: int = 1) -> Expr:
    """``sign * |x - center|**alpha``: sharp Hölder exponent ``alpha`` at ``center``."""
    if not (0 < alpha <= 1):
        raise ParameterError(f"cusp exponent must lie in (0, 1], got {alpha}")
    if sign not in (1, -1):
        raise ParameterError("sign must be +1 or -1")
    e = Pow(Abs(Sub(X, Const(center))), alpha)
    return e if sign == 1 else Mul(Const(-1.0), e)


def weierstrass(a: float, b: float, terms: int = DEFAULT_WEIERSTRASS_TERMS) -> Weierstrass:
    return Weierstrass(a, b, terms)


def is_constant(e: Expr) -> bool:
    """True when the tree does not depend on ``x``."""
    if isinstance(e, (Var, Weierstrass)):
        return False
    return all(is_constant(c) for c in e.children)


# -- symbolic derivative ----------------------------------------------------

def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and a.value == 0 or isinstance(b, Const) and b.value == 0:
        return Const(0.0)
    if isinstance(a, Const) and a.value == 1:
        return b
    if isinstance(b, Const) and b.value == 1:
        return a
    return Mul(a, b)


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and a.value == 0:
        return b
    if isinstance(b, Const) and b.value == 0:
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value == 0:
        return a
    return Sub(a, b)


def derivative(e: Expr, allow_kinks: bool = False) -> Expr:
    """Symbolic first derivative.

    ``Abs`` nodes are rejected unless ``allow_kinks`` is set, in which case
    ``d|u| = u/|u| * du`` is used (valid away from ``u = 0``).  Weierstrass
    sums are never differentiated.
    """
    if isinstance(e, Var):
        return Const(1.0)
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Add):
        return _add(derivative(e.left, allow_kinks), derivative(e.right, allow_kinks))
    if isinstance(e, Sub):
        return _sub(derivative(e.left, allow_kinks), derivative(e.right, allow_kinks))
    if isinstance(e, Mul):
        du = derivative(e.left, allow_kinks)
        dv = derivative(e.right, allow_kinks)
        return _add(_mul(du, e.right), _mul(e.left, dv))
    if isinstance(e, Div):
        du = derivative(e.left, allow_kinks)
        dv = derivative(e.right, allow_kinks)
        num = _sub(_mul(du, e.right), _mul(e.left, dv))
        if isinstance(num, Const) and num.value == 0:
            return Const(0.0)
        return Div(num, Pow(e.right, 2.0))
    if isinstance(e, Pow):
        a = e.exponent
        du = derivative(e.base, allow_kinks)
        if a == 0:
            return Const(0.0)
        outer = Const(1.0) if a == 1 else _mul(Const(a), Pow(e.base, a - 1.0) if a != 2 else e.base)
        return _mul(outer, du)
    if isinstance(e, Sin):
        return _mul(Cos(e.arg), derivative(e.arg, allow_kinks))
    if isinstance(e, Cos):
        return _mul(Mul(Const(-1.0), Sin(e.arg)), derivative(e.arg, allow_kinks))
    if isinstance(e, Abs):
        if not allow_kinks:
            raise NotDifferentiableError(
                f"abs() has a kink; derivative of {e} is only valid away from it", node=e
            )
        return _mul(Div(e.arg, Abs(e.arg)), derivative(e.arg, allow_kinks))
    raise NotDifferentiableError(f"{type(e).__name__} node is not differentiable", node=e)


# -- sampled data -------------------------------------------------------------

@dataclass(frozen=True)
class SampledSignal:
    """Real samples on a uniform grid ``origin + k * step``.

    Evaluation returns the nearest sample; no interpolation is performed so
    the regularity of the data is not altered.
    """

    values: np.ndarray = field(repr=False)
    origin: float = 0.0
    step: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ParameterError("sampled signal needs at least one value")
        if not np.all(np.isfinite(v)):
            raise ParameterError("sampled signal values must be finite")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ParameterError(f"step must be positive, got {self.step}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))

    def __len__(self):
        return self.values.size

    @property
    def end(self) -> float:
        return self.origin + self.step * (self.values.size - 1)

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.origin, self.end)

    @property
    def grid(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.values.size)

    def index_of(self, x):
        """Nearest-sample index, raising ``RangeError`` outside the support."""
        x = np.asarray(x, dtype=float)
        pos = (x - self.origin) / self.step
        slack = 1e-9
        if np.any(pos < -slack) or np.any(pos > self.values.size - 1 + slack):
            raise RangeError(
                f"abscissa outside sampled range [{self.origin}, {self.end}]"
            )
        return np.clip(np.rint(pos).astype(int), 0, self.values.size - 1)

    def __call__(self, x):
        idx = self.index_of(x)
        out = self.values[idx]
        return float(out) if np.ndim(out) == 0 else out

    @classmethod
    def from_csv(cls, path, origin=None, step=None, rtol=1e-9):
        """Read ``x,y`` columns (header required) or a single ``y`` column.

        A ``y``-only file needs ``origin`` and ``step``.
        """
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
        if not rows:
            raise ParameterError(f"{path}: empty file")
        header = [c.strip().lower() for c in rows[0]]
        body = rows[1:]
        try:
            if header == ["x", "y"]:
                data = np.array([[float(a), float(b)] for a, b in body])
                if data.shape[0] < 2:
                    raise ParameterError(f"{path}: need at least two samples")
                xs, ys = data[:, 0], data[:, 1]
                d = np.diff(xs)
                h = (xs[-1] - xs[0]) / (xs.size - 1)
                if h <= 0 or np.any(np.abs(d - h) > rtol * abs(h)):
                    raise ParameterError(f"{path}: x column is not uniformly spaced")
                return cls(ys, origin=xs[0], step=h)
            if header == ["y"] or len(header) == 1:
                if origin is None or step is None:
                    raise ParameterError(f"{path}: y-only data needs origin and step")
                start = body if header == ["y"] else rows
                ys = [float(r[0]) for r in start]
                return cls(ys, origin=origin, step=step)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"{path}: malformed row ({exc})") from None
        raise ParameterError(f"{path}: expected header 'x,y' or 'y'")
