"""Geometric eps-ladders and classification of ``eps -> 0`` limits.

A quotient sequence ``q_k`` sampled at ``eps_k = eps0 * ratio**k`` is
classified from the least-squares slope of ``log|q_k|`` against
``log eps_k``: a positive slope means the quotient vanishes, a negative one
that it blows up, and a flat one that it tends to a finite value.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .exceptions import InsufficientDataError, ParameterError
from .scalar import Scalar, as_python, is_real, to_dict

SLOPE_TOL = 0.05
FIT_TOL = 0.98
UNDERFLOW_GUARD = 1e-12
MIN_POINTS = 4
_TINY_Q = 1e-300
_SIGN_FLOOR = 1e-12
LADDER_ENV = "FRACVEL_LADDER"


@dataclass(frozen=True)
class EpsLadder:
    """Geometric sequence ``eps0 * ratio**k`` for ``k < count``."""

    eps0: float = 1e-2
    ratio: float = 0.5
    count: int = 16

    def __post_init__(self):
        if not (math.isfinite(self.eps0) and self.eps0 > 0):
            raise ParameterError(f"eps0 must be positive, got {self.eps0}")
        if not (0 < self.ratio < 1):
            raise ParameterError(f"ratio must lie in (0, 1), got {self.ratio}")
        if int(self.count) != self.count or self.count < MIN_POINTS:
            raise ParameterError(f"count must be an integer >= {MIN_POINTS}, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if self.eps0 * self.ratio ** (self.count - 1) <= UNDERFLOW_GUARD:
            raise ParameterError(
                f"smallest ladder eps falls below {UNDERFLOW_GUARD}; reduce count or raise ratio"
            )

    def values(self, step: Optional[float] = None) -> np.ndarray:
        """Ladder values, largest first.

        With a grid ``step`` every value is snapped to a positive multiple of
        the step and duplicates are dropped, so the result may be shorter.
        """
        eps = self.eps0 * self.ratio ** np.arange(self.count)
        if step is None:
            return eps
        mult = np.maximum(1, np.rint(eps / step)).astype(int)
        mult = np.unique(mult)[::-1]
        return mult * float(step)

    @classmethod
    def parse(cls, text: str) -> "EpsLadder":
        """Build from ``"eps0,ratio,count"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ParameterError(f"ladder must be given as 'eps0,ratio,count', got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise ParameterError(f"ladder must be given as 'eps0,ratio,count', got {text!r}") from None

    @classmethod
    def from_env(cls, environ=None) -> "EpsLadder":
        env = os.environ if environ is None else environ
        text = env.get(LADDER_ENV)
        return cls.parse(text) if text else cls()

    def to_dict(self) -> dict:
        return {"eps0": self.eps0, "ratio": self.ratio, "count": self.count}


def ladder_for(f, ladder: EpsLadder) -> np.ndarray:
    """Ladder values adapted to ``f``: snapped to the grid for sampled signals."""
    step = getattr(f, "step", None)
    return ladder.values(step)


class Limit(str, enum.Enum):
    ZERO = "Zero"
    FINITE = "Finite"
    DIVERGENT = "Divergent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LimitEstimate:
    """Classified limit of a quotient sampled along an eps-ladder.

    ``value`` is set only for finite limits.  It is the deepest sample after
    one Aitken delta-squared step when the tail of the ladder converges
    geometrically, otherwise the deepest sample itself (kept in ``deepest``).
    """

    classification: Limit
    value: Optional[Scalar]
    slope: float
    r_squared: float
    samples: Tuple[Tuple[float, Scalar], ...] = field(repr=False)
    intercept: float = math.nan
    deepest: Optional[Scalar] = None

    @property
    def is_finite(self) -> bool:
        return self.classification is Limit.FINITE

    @property
    def eps(self) -> np.ndarray:
        return np.array([e for e, _ in self.samples])

    @property
    def quotients(self) -> np.ndarray:
        return np.array([q for _, q in self.samples])

    def to_dict(self) -> dict:
        real = is_real([q for _, q in self.samples])
        samples = []
        for e, q in self.samples:
            row = {"eps": float(e), **to_dict(q)}
            if real:
                row.pop("im")
            samples.append(row)
        return {
            "classification": self.classification.value,
            "value": None if self.value is None else to_dict(self.value),
            "slope": _finite_or_none(self.slope),
            "r_squared": _finite_or_none(self.r_squared),
            "intercept": _finite_or_none(self.intercept),
            "samples": samples,
        }


def _finite_or_none(v):
    v = float(v)
    return v + 0.0 if math.isfinite(v) else None


def aitken(s0, s1, s2):
    """One Aitken delta-squared step on three successive samples.

    Returns ``s2`` unchanged when the differences are at rounding level or
    the tail is not contracting (``|d2/d1| >= 0.95``).
    """
    d1 = s1 - s0
    d2 = s2 - s1
    scale = max(abs(s0), abs(s1), abs(s2), np.finfo(float).tiny)
    if abs(d2) <= 1e-13 * scale or d1 == 0:
        return s2
    r = d2 / d1
    if abs(r) >= 0.95:
        return s2
    return s2 + d2 * r / (1 - r)


def _fit(x: np.ndarray, y: np.ndarray):
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot <= 1e-24 * max(1.0, float(y @ y)):
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return float(slope), float(intercept), r2


def _sign_oscillates(q: np.ndarray) -> bool:
    if not is_real(q):
        return False
    r = np.real(q)
    big = r[np.abs(r) > _SIGN_FLOOR]
    return bool(np.any(np.sign(big[1:]) != np.sign(big[:-1])))


def classify(eps, quotients, slope_tol: float = SLOPE_TOL, fit_tol: float = FIT_TOL) -> LimitEstimate:
    """Classify the ``eps -> 0`` limit of ``quotients`` sampled at ``eps``.

    Samples that are non-finite or below 1e-300 in modulus are dropped from
    the fit.  A sequence that is identically zero is classified ``Zero``.

    Raises
    ------
    InsufficientDataError
        If fewer than four usable samples remain.
    """
    eps = np.asarray(eps, dtype=float)
    q = np.asarray(quotients)
    if not np.iscomplexobj(q):
        q = q.astype(float)
    order = np.argsort(-eps, kind="stable")
    eps, q = eps[order], q[order]
    samples = tuple((float(e), as_python(v)) for e, v in zip(eps, q))

    mag = np.abs(q)
    finite = np.isfinite(q)
    if np.all(finite) and np.all(mag < _TINY_Q):
        return LimitEstimate(Limit.ZERO, None, math.inf, 1.0, samples)
    usable = finite & (mag >= _TINY_Q)
    if usable.sum() < MIN_POINTS:
        raise InsufficientDataError(
            f"only {int(usable.sum())} usable ladder samples, need {MIN_POINTS}"
        )
    e_u, q_u = eps[usable], q[usable]
    slope, intercept, r2 = _fit(np.log(e_u), np.log(np.abs(q_u)))
    deepest = as_python(q_u[-1])

    if _sign_oscillates(q_u):
        cls = Limit.INCONCLUSIVE
    elif abs(slope) <= slope_tol:
        cls = Limit.FINITE
    elif r2 < fit_tol:
        cls = Limit.INCONCLUSIVE
    elif slope > 0:
        cls = Limit.ZERO
    else:
        cls = Limit.DIVERGENT

    value = None
    if cls is Limit.FINITE:
        value = deepest
        if q_u.size >= 3:
            value = as_python(aitken(q_u[-3], q_u[-2], q_u[-1]))
    return LimitEstimate(cls, value, slope, r2, samples, intercept, deepest)


def scale_estimate(est: LimitEstimate, c: Scalar) -> LimitEstimate:
    """Limit of ``c * q_k``, re-classified from the scaled samples."""
    eps = est.eps
    q = est.quotients * c
    return classify(eps, q)
