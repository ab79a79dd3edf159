"""Fractional co-variation ``[f, g]_beta`` at finite eps and in the limit.

At finite eps the co-variation is the product of the two order-``beta/2``
variations, i.e. ``Delta f * Delta g / eps**beta``.  Order ``beta = 1`` is the
default (quadratic variation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import Direction, check_direction, check_order
from .diffops import delta_minus, delta_plus
from .limits import (
    FIT_TOL,
    SLOPE_TOL,
    EpsLadder,
    LimitEstimate,
    classify,
    ladder_for,
)
from .scalar import as_python
from .velocity import _derivative_for_c1, frac_variation


@dataclass(frozen=True)
class CovarEstimate(LimitEstimate):
    """Limit estimate of a co-variation, tagged with its order."""

    order_beta: float = 1.0

    @classmethod
    def wrap(cls, est: LimitEstimate, beta: float) -> "CovarEstimate":
        return cls(
            est.classification, est.value, est.slope, est.r_squared,
            est.samples, est.intercept, est.deepest, order_beta=beta,
        )

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["beta"] = self.order_beta
        return out


def _common_ladder(f, g, ladder: EpsLadder) -> np.ndarray:
    step = max(getattr(f, "step", 0.0) or 0.0, getattr(g, "step", 0.0) or 0.0)
    return ladder.values(step or None) if step else ladder_for(f, ladder)


def covariation_at(f, g, x: float, beta: float = 1.0, eps=None, direction="plus"):
    """``[f, g]^(eps +/-)_beta(x)`` for one or many ``eps``.

    Computed as the product of the two order ``beta/2`` fractional variations.
    """
    beta = check_order(beta)
    if eps is None:
        raise TypeError("covariation_at requires eps")
    vf = np.asarray(frac_variation(f, x, beta / 2, eps, direction))
    vg = np.asarray(frac_variation(g, x, beta / 2, eps, direction))
    out = vf * vg
    return as_python(out[()]) if out.ndim == 0 else out


def covariation_direct(f, g, x: float, beta: float, eps, direction="plus"):
    """Same quantity as ``covariation_at`` via ``Delta f * Delta g / eps**beta``."""
    beta = check_order(beta)
    d = check_direction(direction)
    op = delta_plus if d is Direction.PLUS else delta_minus
    e = np.asarray(eps, dtype=float)
    out = np.asarray(op(f, x, e)) * np.asarray(op(g, x, e)) / np.power(e, beta)
    return as_python(out[()]) if out.ndim == 0 else out


def covariation(
    f,
    g,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    slope_tol: float = SLOPE_TOL,
    fit_tol: float = FIT_TOL,
) -> CovarEstimate:
    """Classified limit of the co-variation of ``f`` and ``g`` at ``x``."""
    beta = check_order(beta)
    eps = _common_ladder(f, g, ladder or EpsLadder())
    q = covariation_at(f, g, x, beta, eps, direction)
    return CovarEstimate.wrap(classify(eps, q, slope_tol, fit_tol), beta)


def covariation_square(
    f, x: float, beta: float = 1.0, direction="plus", ladder: Optional[EpsLadder] = None
) -> CovarEstimate:
    """``[f, f]_beta``; for ``beta = 1`` the quadratic variation."""
    return covariation(f, f, x, beta, direction, ladder)


def covariation_c1(
    f,
    g,
    x: float,
    beta: float = 1.0,
    direction="plus",
    ladder: Optional[EpsLadder] = None,
    slope_tol: float = SLOPE_TOL,
    fit_tol: float = FIT_TOL,
) -> CovarEstimate:
    """Co-variation of differentiable expressions via derivatives.

    Samples ``eps**(1-beta) / beta * (f'(x +/- eps) Delta g + g'(x +/- eps) Delta f)``.
    """
    beta = check_order(beta)
    d = check_direction(direction)
    df = _derivative_for_c1(f, "covariation_c1", "covariation")
    dg = _derivative_for_c1(g, "covariation_c1", "covariation")
    eps = (ladder or EpsLadder()).values()
    op = delta_plus if d is Direction.PLUS else delta_minus
    shifted = x + d.sign * eps
    inner = np.asarray(df(shifted)) * np.asarray(op(g, x, eps)) \
        + np.asarray(dg(shifted)) * np.asarray(op(f, x, eps))
    q = np.power(eps, 1.0 - beta) * inner / beta
    return CovarEstimate.wrap(classify(eps, q, slope_tol, fit_tol), beta)
