"""Product, square, quotient and reciprocal rules for fractional variation.

At finite eps the product rules are exact algebra::

    v+(f g) = v+(f) g(x) + v+(g) f(x) + [f, g]+
    v-(f g) = v-(f) g(x) + v-(g) f(x) - [f, g]-

Every check here evaluates both sides independently, through the same
evaluation pipeline, and reports the outcome as a :class:`RuleReport`.
Limit-level comparisons first require matching classifications; values are
compared only when both sides are finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ._validation import Direction, check_direction, check_order
from .covar import covariation, covariation_at
from .diffops import delta_minus, delta_plus
from .exceptions import DomainError, InsufficientDataError
from .functions import Const, Div, Expr, Mul
from .limits import EpsLadder, Limit, LimitEstimate, classify
from .scalar import Scalar, as_python, to_dict
from .velocity import _derivative_for_c1, frac_variation, velocity

LEMMA_TOL = 1e-12
VALUE_RTOL = 1e-6
VALUE_ATOL = 1e-9
G_GUARD = 1e-9


@dataclass(frozen=True)
class RuleReport:
    """Outcome of one identity check.

    For finite-eps checks ``lhs``/``rhs`` are scalars and ``residual`` is
    compared with ``tolerance``.  For limit checks they are
    :class:`LimitEstimate` objects; ``limits_match`` is ``None`` when either
    side is inconclusive.
    """

    rule: str
    direction: Optional[str]
    lhs: Union[Scalar, LimitEstimate, None]
    rhs: Union[Scalar, LimitEstimate, None]
    residual: float
    tolerance: float
    passed: bool
    limits_match: Optional[bool] = None
    parts: Tuple["RuleReport", ...] = field(default=(), repr=False)
    note: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.limits_match is None and any(
            isinstance(s, LimitEstimate) for s in (self.lhs, self.rhs)
        )

    def to_dict(self) -> dict:
        def side(v):
            if isinstance(v, LimitEstimate):
                return v.to_dict()
            if v is None:
                return None
            return to_dict(v)

        out = {
            "rule": self.rule,
            "direction": self.direction,
            "passed": bool(self.passed),
            "residual": _num(self.residual),
            "tolerance": _num(self.tolerance),
            "lhs": side(self.lhs),
            "rhs": side(self.rhs),
        }
        if self.limits_match is not None or isinstance(self.lhs, LimitEstimate):
            out["limits_match"] = self.limits_match
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        if self.note:
            out["note"] = self.note
        return out


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else None


# -- building products and quotients ------------------------------------------

class _Pointwise:
    """Pointwise combination of evaluables when an AST node is not available."""

    def __init__(self, op, *parts):
        self.op = op
        self.parts = parts
        steps = [getattr(p, "step", None) for p in parts]
        steps = [s for s in steps if s]
        if steps:
            self.step = max(steps)
        self.domain = (
            max(getattr(p, "domain", (-math.inf, math.inf))[0] for p in parts),
            min(getattr(p, "domain", (-math.inf, math.inf))[1] for p in parts),
        )

    def __call__(self, x):
        return self.op(*(np.asarray(p(x)) for p in self.parts))


def _value(f, x):
    return as_python(np.asarray(f(x))[()])


def product(f, g):
    if isinstance(f, Expr) and isinstance(g, Expr):
        return Mul(f, g)
    return _Pointwise(np.multiply, f, g)


def quotient(f, g):
    if isinstance(f, Expr) and isinstance(g, Expr):
        return Div(f, g)
    return _Pointwise(np.divide, f, g)


def reciprocal(g):
    if isinstance(g, Expr):
        return Div(Const(1.0), g)
    return _Pointwise(lambda v: 1.0 / v, g)


def _ladder(f, g, ladder):
    ladder = ladder or EpsLadder()
    steps = [s for s in (getattr(f, "step", None), getattr(g, "step", None)) if s]
    return ladder.values(max(steps) if steps else None)


# -- limit algebra ---------------------------------------------------------------

def _safe_classify(eps, q) -> LimitEstimate:
    try:
        return classify(eps, q)
    except InsufficientDataError:
        samples = tuple((float(e), as_python(v)) for e, v in zip(eps, np.asarray(q)))
        return LimitEstimate(Limit.INCONCLUSIVE, None, math.nan, math.nan, samples)


def combine(terms: Sequence[LimitEstimate]) -> LimitEstimate:
    """Limit of a sum from the limits of its terms.

    Any inconclusive term, or two divergent terms that might cancel, makes
    the sum inconclusive.  Finite values add; a sum of finite terms that
    cancels to rounding level is reported as zero.
    """
    eps = terms[0].eps
    total = sum(t.quotients for t in terms)
    samples = tuple((float(e), as_python(v)) for e, v in zip(eps, total))
    classes = [t.classification for t in terms]
    nan = math.nan
    if Limit.INCONCLUSIVE in classes or classes.count(Limit.DIVERGENT) > 1:
        return LimitEstimate(Limit.INCONCLUSIVE, None, nan, nan, samples)
    if Limit.DIVERGENT in classes:
        return LimitEstimate(Limit.DIVERGENT, None, nan, nan, samples)
    finite = [t.value for t in terms if t.classification is Limit.FINITE]
    if not finite:
        return LimitEstimate(Limit.ZERO, None, nan, nan, samples)
    value = sum(finite)
    if abs(value) <= VALUE_ATOL + VALUE_RTOL * max(abs(v) for v in finite):
        return LimitEstimate(Limit.ZERO, None, nan, nan, samples)
    return LimitEstimate(Limit.FINITE, as_python(value), nan, nan, samples)


def compare_limits(a: LimitEstimate, b: LimitEstimate, rtol=VALUE_RTOL, atol=VALUE_ATOL):
    """``(match, residual, tolerance)``; ``match`` is ``None`` if either is inconclusive."""
    if Limit.INCONCLUSIVE in (a.classification, b.classification):
        return None, math.nan, math.nan
    if a.classification is not b.classification:
        return False, math.inf, 0.0
    if a.classification is Limit.FINITE:
        resid = abs(a.value - b.value)
        tol = atol + rtol * max(abs(a.value), abs(b.value))
        return resid <= tol, resid, tol
    return True, 0.0, 0.0


def _limit_report(rule, direction, lhs, rhs, rtol, atol, residual=0.0, tolerance=0.0, note=""):
    match, resid, tol = compare_limits(lhs, rhs, rtol, atol)
    finite_ok = residual <= tolerance
    if match is None:
        note = (note + "; " if note else "") + "a side is inconclusive"
    return RuleReport(
        rule=rule,
        direction=direction,
        lhs=lhs,
        rhs=rhs,
        residual=max(residual, resid) if match is not None else residual,
        tolerance=max(tolerance, tol) if match is not None else tolerance,
        passed=bool(match) and finite_ok,
        limits_match=match,
        note=note,
    )


# -- checks -----------------------------------------------------------------------

def check_product_lemma(f, g, x: float, eps: float, direction="plus") -> RuleReport:
    """Finite-eps product lemma.

    Forward:  ``D+(fg) = D+f D+g + g D+f + f D+g``.
    Backward: ``D-(fg) = -D-f D-g + g D-f + f D-g``.
    The residual is compared with ``1e-12 * (1 + scale)``, ``scale`` being the
    largest product magnitude entering the identity.
    """
    d = check_direction(direction)
    op = delta_plus if d is Direction.PLUS else delta_minus
    fg = product(f, g)
    lhs = op(fg, x, eps)
    df, dg = op(f, x, eps), op(g, x, eps)
    fx, gx = _value(f, x), _value(g, x)
    cross = df * dg
    rhs = d.sign * cross + gx * df + fx * dg
    other = x + d.sign * eps
    scale = max(abs(fx * gx), abs(_value(fg, other)), abs(lhs), abs(cross),
                abs(gx * df), abs(fx * dg))
    residual = abs(lhs - rhs)
    tol = LEMMA_TOL * (1.0 + scale)
    return RuleReport("product_lemma", d.value, as_python(lhs), as_python(rhs),
                      residual, tol, residual <= tol)


def _product_terms(f, g, x, beta, d: Direction, eps, sign):
    vf = np.asarray(frac_variation(f, x, beta, eps, d))
    vg = np.asarray(frac_variation(g, x, beta, eps, d))
    cov = np.asarray(covariation_at(f, g, x, beta, eps, d))
    fx, gx = _value(f, x), _value(g, x)
    return vf * gx, vg * fx, sign * cov, fx, gx


def check_product_rule(
    f,
    g,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    correction_sign: Optional[int] = None,
    rtol: float = VALUE_RTOL,
    atol: float = VALUE_ATOL,
    rule: str = "product",
) -> RuleReport:
    """Product rule for fractional variation and its limiting form.

    At every ladder eps the finite identity is checked, normalised by
    ``eps**beta`` and the magnitude of the products involved (tolerance
    1e-12).  The limit of ``v(fg)`` is then compared with the term-wise
    limit of the right-hand side.  ``correction_sign`` overrides the sign in
    front of the co-variation (forward ``+1``, backward ``-1``).
    """
    beta = check_order(beta)
    d = check_direction(direction)
    sign = d.sign if correction_sign is None else int(correction_sign)
    eps = _ladder(f, g, ladder)
    fg = product(f, g)
    lhs_q = np.asarray(frac_variation(fg, x, beta, eps, d))
    t1, t2, t3, fx, gx = _product_terms(f, g, x, beta, d, eps, sign)
    rhs_q = t1 + t2 + t3

    ebeta = np.power(eps, beta)
    shifted = np.abs(np.asarray(fg(x + d.sign * eps)))
    scale = 1.0 + shifted + abs(fx * gx) + np.abs(t3) * ebeta \
        + np.abs(t1) * ebeta + np.abs(t2) * ebeta
    residual = float(np.max(np.abs(lhs_q - rhs_q) * ebeta / scale))

    lhs = _safe_classify(eps, lhs_q)
    rhs = combine([_safe_classify(eps, t) for t in (t1, t2, t3)])
    return _limit_report(rule, d.value, lhs, rhs, rtol, atol, residual, LEMMA_TOL)


def check_square_rule(f, x: float, beta: float = 1.0, direction="plus",
                      ladder: Optional[EpsLadder] = None, **kw) -> RuleReport:
    """``v(f^2) = 2 v(f) f(x) +/- [f, f]``."""
    return check_product_rule(f, f, x, beta, direction, ladder, rule="square", **kw)


def _guard(g, x):
    gx = _value(g, x)
    if abs(gx) < G_GUARD:
        raise DomainError(f"|g(x)| = {abs(gx):.3g} is below {G_GUARD}; rule needs g(x) != 0")
    return gx


def check_quotient_rule(
    f,
    g,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    rtol: float = VALUE_RTOL,
    atol: float = VALUE_ATOL,
) -> RuleReport:
    """``v(f/g) = (v(f) g - v(g) f -/+ [f, g]) / g^2`` (``-`` forward, ``+`` backward)."""
    beta = check_order(beta)
    d = check_direction(direction)
    gx = _guard(g, x)
    eps = _ladder(f, g, ladder)
    lhs = _safe_classify(eps, frac_variation(quotient(f, g), x, beta, eps, d))
    vf = np.asarray(frac_variation(f, x, beta, eps, d))
    vg = np.asarray(frac_variation(g, x, beta, eps, d))
    cov = np.asarray(covariation_at(f, g, x, beta, eps, d))
    fx = _value(f, x)
    g2 = gx * gx
    terms = (vf * gx / g2, -vg * fx / g2, -d.sign * cov / g2)
    rhs = combine([_safe_classify(eps, t) for t in terms])
    return _limit_report("quotient", d.value, lhs, rhs, rtol, atol)


def reciprocal_identities(
    f,
    g,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    rtol: float = VALUE_RTOL,
    atol: float = VALUE_ATOL,
) -> RuleReport:
    """``[f, 1/g] = -[f, g] / g^2`` and ``v(1/g) = -v(g) / g^2``, each side on its own ladder run."""
    beta = check_order(beta)
    d = check_direction(direction)
    gx = _guard(g, x)
    eps = _ladder(f, g, ladder)
    inv = reciprocal(g)
    g2 = gx * gx

    cov_lhs = _safe_classify(eps, covariation_at(f, inv, x, beta, eps, d))
    cov_rhs = _safe_classify(eps, -np.asarray(covariation_at(f, g, x, beta, eps, d)) / g2)
    covar_part = _limit_report("reciprocal_covariation", d.value, cov_lhs, cov_rhs, rtol, atol)

    vel_lhs = _safe_classify(eps, frac_variation(inv, x, beta, eps, d))
    vel_rhs = _safe_classify(eps, -np.asarray(frac_variation(g, x, beta, eps, d)) / g2)
    vel_part = _limit_report("reciprocal_velocity", d.value, vel_lhs, vel_rhs, rtol, atol)

    parts = (covar_part, vel_part)
    matches = [p.limits_match for p in parts]
    return RuleReport(
        rule="reciprocal",
        direction=d.value,
        lhs=None,
        rhs=None,
        residual=max(p.residual for p in parts),
        tolerance=max(p.tolerance for p in parts),
        passed=all(p.passed for p in parts),
        limits_match=None if None in matches else all(matches),
        parts=parts,
    )


def leibniz_limit_check(
    f: Expr,
    g: Expr,
    x: float,
    ladder: Optional[EpsLadder] = None,
    rtol: float = VALUE_RTOL,
    atol: float = VALUE_ATOL,
) -> RuleReport:
    """Leibniz rule recovered at order 1 for differentiable ``f`` and ``g``.

    In both directions: the finite-eps product identity holds, the
    co-variation vanishes, and the velocity of ``f g`` equals
    ``f'(x) g(x) + g'(x) f(x)``.
    """
    df = _derivative_for_c1(f, "leibniz_limit_check", "check_product_rule")
    dg = _derivative_for_c1(g, "leibniz_limit_check", "check_product_rule")
    expected = _value(df, x) * _value(g, x) + _value(dg, x) * _value(f, x)
    eps = _ladder(f, g, ladder)
    parts = []
    for d in (Direction.PLUS, Direction.MINUS):
        identity = check_product_rule(f, g, x, 1.0, d, ladder, rtol=rtol, atol=atol)
        cov = covariation(f, g, x, 1.0, d, ladder)
        vel = velocity(product(f, g), x, 1.0, d, ladder)
        target = LimitEstimate(
            Limit.FINITE if expected != 0 else Limit.ZERO,
            as_python(expected) if expected != 0 else None,
            0.0, 1.0, tuple((float(e), as_python(expected)) for e in eps),
        )
        vel_part = _limit_report("leibniz_velocity", d.value, vel, target, rtol, atol)
        cov_zero = cov.classification is Limit.ZERO
        cov_part = RuleReport("leibniz_covariation", d.value, cov, None, 0.0, 0.0,
                              cov_zero, limits_match=cov_zero,
                              note="" if cov_zero else f"co-variation is {cov.classification}")
        parts += [identity, cov_part, vel_part]
    return RuleReport(
        rule="leibniz",
        direction=None,
        lhs=None,
        rhs=as_python(expected),
        residual=max(p.residual for p in parts if math.isfinite(p.residual)),
        tolerance=max(p.tolerance for p in parts),
        passed=all(p.passed for p in parts),
        limits_match=all(p.limits_match for p in parts)
        if all(p.limits_match is not None for p in parts) else None,
        parts=tuple(parts),
    )


def combined_c1_product(
    f: Expr,
    g: Expr,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
) -> LimitEstimate:
    """Velocity of ``f g`` from derivatives, Leibniz part plus co-variation part.

    Forward:  ``eps**(1-b)/b * (g'(x+e) f + g f'(x+e)) + eps**(1-b)/b * (g'(x+e) D+f + f'(x+e) D+g)``;
    backward subtracts the second group, built from ``x - eps`` and ``D-``.
    """
    beta = check_order(beta)
    d = check_direction(direction)
    df = _derivative_for_c1(f, "combined_c1_product", "velocity")
    dg = _derivative_for_c1(g, "combined_c1_product", "velocity")
    eps = (ladder or EpsLadder()).values()
    op = delta_plus if d is Direction.PLUS else delta_minus
    shifted = x + d.sign * eps
    fp, gp = np.asarray(df(shifted)), np.asarray(dg(shifted))
    fx, gx = _value(f, x), _value(g, x)
    w = np.power(eps, 1.0 - beta) / beta
    leibniz = w * (gp * fx + gx * fp)
    correction = w * (gp * np.asarray(op(f, x, eps)) + fp * np.asarray(op(g, x, eps)))
    return classify(eps, leibniz + d.sign * correction)
