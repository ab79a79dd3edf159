"""Fractional variation and fractional velocity.

The fractional variation of order ``beta`` is the finite-eps quotient
``Delta(+/-) f(x) / eps**beta``; the fractional velocity is its limit as
``eps -> 0``, estimated on an eps-ladder.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ._validation import Direction, check_direction, check_order
from .diffops import delta_minus, delta_plus, delta_second
from .exceptions import NotDifferentiableError
from .functions import Expr, derivative
from .limits import EpsLadder, LimitEstimate, classify, ladder_for, SLOPE_TOL, FIT_TOL
from .scalar import as_python


def frac_variation(f, x: float, beta: float, eps, direction="plus"):
    """Forward or backward fractional variation at ``x`` for one or many ``eps``.

    >>> from fracvel.functions import sqrt, X
    >>> frac_variation(sqrt(X), 0.0, 0.5, 0.04, "plus")
    1.0
    >>> frac_variation(sqrt(X), 0.0, 0.5, 0.04, "minus")
    -1j
    """
    beta = check_order(beta)
    d = check_direction(direction)
    delta = delta_plus(f, x, eps) if d is Direction.PLUS else delta_minus(f, x, eps)
    out = np.asarray(delta) / np.power(np.asarray(eps, dtype=float), beta)
    return as_python(out[()]) if out.ndim == 0 else out


def velocity(
    f,
    x: float,
    alpha: float,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    slope_tol: float = SLOPE_TOL,
    fit_tol: float = FIT_TOL,
) -> LimitEstimate:
    """Fractional velocity of order ``alpha`` as a classified ladder limit."""
    alpha = check_order(alpha, "alpha")
    eps = ladder_for(f, ladder or EpsLadder())
    q = frac_variation(f, x, alpha, eps, direction)
    return classify(eps, q, slope_tol, fit_tol)


def _derivative_for_c1(f, caller: str, fallback: str) -> Expr:
    if not isinstance(f, Expr):
        raise NotDifferentiableError(
            f"{caller} needs a closed-form expression; use {fallback}() for sampled data"
        )
    try:
        return derivative(f)
    except NotDifferentiableError as exc:
        raise NotDifferentiableError(f"{exc}; use {fallback}() instead", node=exc.node) from None


def velocity_c1(
    f: Expr,
    x: float,
    beta: float,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    slope_tol: float = SLOPE_TOL,
    fit_tol: float = FIT_TOL,
) -> LimitEstimate:
    """Velocity of a differentiable expression through ``eps**(1-beta) f'(x +/- eps) / beta``."""
    beta = check_order(beta)
    d = check_direction(direction)
    df = _derivative_for_c1(f, "velocity_c1", "velocity")
    eps = (ladder or EpsLadder()).values()
    q = np.power(eps, 1.0 - beta) * np.asarray(df(x + d.sign * eps)) / beta
    return classify(eps, q, slope_tol, fit_tol)


def second_variation(
    f, x: float, beta: float, ladder: Optional[EpsLadder] = None
) -> LimitEstimate:
    """Limit of ``Delta^2 f(x) / eps**beta``.

    A finite non-zero or divergent result means the forward and backward
    velocities of order ``beta`` at ``x`` differ.
    """
    beta = check_order(beta)
    eps = ladder_for(f, ladder or EpsLadder())
    q = np.asarray(delta_second(f, x, eps)) / np.power(eps, beta)
    return classify(eps, q)
