"""Pointwise Hölder exponents from the scaling of one-sided oscillations.

For ``f`` Hölder of exponent ``alpha`` at ``x``, ``osc_[x, x+eps] f`` is
bounded above and below by multiples of ``eps**alpha``, so the log-log
slope of oscillation against window size estimates ``alpha``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ._validation import Direction, check_direction, check_order
from .diffops import oscillation_minus, oscillation_plus
from .exceptions import FlatSignalError, FracvelError, InsufficientDataError, ParameterError
from .limits import FIT_TOL, EpsLadder, Limit, LimitEstimate, _fit, classify, ladder_for
from .velocity import velocity

OSC_FLOOR = 1e-14
ALPHA_MAX = 1.5
LABEL_MARGIN = 0.05
SMOOTH_LABEL = 1.05
SCAN_HEADER = "x,alpha_plus,r2_plus,alpha_minus,r2_minus,label"


@dataclass(frozen=True)
class HolderEstimate:
    """Fitted ``log osc = intercept + alpha * log eps``.

    ``alpha_hat`` is the slope clipped to ``(0, 1.5]``; the raw slope is kept
    in ``slope``.
    """

    alpha_hat: float
    intercept: float
    r_squared: float
    direction: Direction
    window: EpsLadder
    slope: float = math.nan
    eps: np.ndarray = field(default=None, repr=False, compare=False)
    osc: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def smooth(self) -> bool:
        return self.alpha_hat > SMOOTH_LABEL


def _osc(f, x, eps, d: Direction):
    return oscillation_plus(f, x, eps) if d is Direction.PLUS else oscillation_minus(f, x, eps)


def estimate_holder(f, x: float, direction="plus", ladder: Optional[EpsLadder] = None) -> HolderEstimate:
    """Hölder exponent of ``f`` at ``x`` from one-sided oscillations.

    Raises
    ------
    FlatSignalError
        If fewer than four windows have oscillation above 1e-14.
    """
    d = check_direction(direction)
    ladder = ladder or EpsLadder()
    eps = np.atleast_1d(ladder_for(f, ladder))
    if eps.size < 4:
        raise InsufficientDataError(f"snapped ladder has only {eps.size} distinct eps values")
    osc = np.atleast_1d(_osc(f, x, eps, d))
    keep = osc >= OSC_FLOOR
    if keep.sum() < 4:
        raise FlatSignalError(f"function is locally constant at x={x} at this resolution")
    slope, intercept, r2 = _fit(np.log(eps[keep]), np.log(osc[keep]))
    alpha = float(np.clip(slope, np.nextafter(0.0, 1.0), ALPHA_MAX))
    return HolderEstimate(alpha, intercept, r2, d, ladder, slope, eps[keep], osc[keep])


def oscillation_quotient(
    f, x: float, beta: float, direction="plus", ladder: Optional[EpsLadder] = None
) -> LimitEstimate:
    """Classified limit of ``osc / eps**beta``; equals ``|velocity|`` where both exist."""
    beta = check_order(beta)
    d = check_direction(direction)
    eps = ladder_for(f, ladder or EpsLadder())
    return classify(eps, np.asarray(_osc(f, x, eps, d)) / np.power(eps, beta))


def trichotomy_legs(f, x, alpha_hat, direction="plus", ladder=None, step=0.1):
    """``[(beta, expected, estimate), ...]`` for the legs inside ``(0, 1]``."""
    legs = []
    for beta, expect in ((alpha_hat - step, (Limit.ZERO,)),
                         (alpha_hat, (Limit.FINITE, Limit.INCONCLUSIVE)),
                         (alpha_hat + step, (Limit.DIVERGENT,))):
        if not (0 < beta <= 1):
            continue
        legs.append((beta, expect, velocity(f, x, beta, direction, ladder)))
    return legs


def cross_check_trichotomy(f, x: float, alpha_hat: float, direction="plus",
                           ladder: Optional[EpsLadder] = None) -> bool:
    """Velocity must vanish below ``alpha_hat``, stay bounded at it and blow up above it.

    Legs whose order falls outside ``(0, 1]`` are skipped.
    """
    if not (0 < alpha_hat <= 1):
        raise ParameterError(f"alpha_hat must lie in (0, 1], got {alpha_hat}")
    legs = trichotomy_legs(f, x, alpha_hat, direction, ladder)
    return all(est.classification in expect for _, expect, est in legs)


@dataclass(frozen=True)
class ScanRow:
    x: float
    alpha_plus: Optional[HolderEstimate]
    alpha_minus: Optional[HolderEstimate]
    label: str
    error: str = ""


def _label(plus, minus, margin, fit_tol) -> str:
    if plus is None or minus is None:
        return "inconclusive"
    lowest = min(plus.alpha_hat, minus.alpha_hat)
    if lowest < 1 - margin:
        if plus.r_squared >= fit_tol and minus.r_squared >= fit_tol:
            return "singular"
        return "inconclusive"
    return "smooth"


def scan(
    f,
    lo: float,
    hi: float,
    points: int,
    ladder: Optional[EpsLadder] = None,
    label_margin: float = LABEL_MARGIN,
    fit_tol: float = FIT_TOL,
) -> List[ScanRow]:
    """Two-sided Hölder estimates on ``points`` equally spaced abscissae.

    Per-point failures are recorded in the row and labelled inconclusive.
    """
    if not lo < hi:
        raise ParameterError("scan needs lo < hi")
    if int(points) != points or points < 2:
        raise ParameterError("scan needs at least 2 points")
    ladder = ladder or EpsLadder()
    rows = []
    for x in np.linspace(lo, hi, int(points)):
        est = {}
        errors = []
        for d in Direction:
            try:
                est[d] = estimate_holder(f, float(x), d, ladder)
            except FracvelError as exc:
                est[d] = None
                errors.append(f"{d.value}: {exc}")
        plus, minus = est[Direction.PLUS], est[Direction.MINUS]
        rows.append(ScanRow(float(x), plus, minus, _label(plus, minus, label_margin, fit_tol),
                            "; ".join(errors)))
    rows.sort(key=lambda r: r.x)
    return rows


def _fmt(v) -> str:
    return repr(float(v))


def scan_to_csv(rows: List[ScanRow]) -> str:
    """CSV text with header ``x,alpha_plus,r2_plus,alpha_minus,r2_minus,label``."""
    out = io.StringIO()
    out.write(SCAN_HEADER + "\n")
    nan = math.nan
    for r in rows:
        p, m = r.alpha_plus, r.alpha_minus
        fields = [
            _fmt(r.x),
            _fmt(p.alpha_hat if p else nan), _fmt(p.r_squared if p else nan),
            _fmt(m.alpha_hat if m else nan), _fmt(m.r_squared if m else nan),
            r.label,
        ]
        out.write(",".join(fields) + "\n")
    return out.getvalue()
