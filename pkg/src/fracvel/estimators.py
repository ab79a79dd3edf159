"""scikit-learn compatible wrappers for sampled signals.

``fit`` takes the signal values (one sample per row) and ``transform`` /
``predict`` take the abscissae at which to evaluate.  Ladders are expressed
in grid units by default so that every window is a whole number of samples.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_direction, check_order, check_points, check_signal
from .exceptions import FracvelError
from .functions import SampledSignal
from .holder import LABEL_MARGIN, _label, estimate_holder
from .limits import FIT_TOL, SLOPE_TOL, EpsLadder, Limit
from .velocity import velocity


def _ladder(eps0, ratio, count, step):
    return EpsLadder(eps0 if eps0 is not None else 2 ** (count - 1) * step, ratio, count)


class HolderExponentEstimator(TransformerMixin, BaseEstimator):
    """Pointwise Hölder exponents of a uniformly sampled signal.

    Parameters
    ----------
    step, origin : float
        Sample spacing and abscissa of the first sample.
    eps0 : float or None
        Largest window.  ``None`` means ``2**(count-1) * step``.
    ratio, count : float, int
        Geometric ladder of window sizes.
    label_margin, fit_tol : float
        Labelling thresholds used by :meth:`predict`.

    Attributes
    ----------
    signal_ : SampledSignal
    ladder_ : EpsLadder
    n_features_in_ : int
    """

    def __init__(self, step=1.0, origin=0.0, eps0=None, ratio=0.5, count=6,
                 label_margin=LABEL_MARGIN, fit_tol=FIT_TOL):
        self.step = step
        self.origin = origin
        self.eps0 = eps0
        self.ratio = ratio
        self.count = count
        self.label_margin = label_margin
        self.fit_tol = fit_tol

    def fit(self, X, y=None):
        values = check_signal(X)
        self.signal_ = SampledSignal(values, origin=self.origin, step=self.step)
        self.ladder_ = _ladder(self.eps0, self.ratio, self.count, self.step)
        self.n_features_in_ = 1
        return self

    def _estimates(self, X):
        check_is_fitted(self, "signal_")
        out = []
        for x in check_points(X):
            pair = []
            for d in ("plus", "minus"):
                try:
                    pair.append(estimate_holder(self.signal_, float(x), d, self.ladder_))
                except FracvelError:
                    pair.append(None)
            out.append(pair)
        return out

    def transform(self, X):
        """Columns ``alpha_plus, r2_plus, alpha_minus, r2_minus`` (NaN on failure)."""
        rows = []
        for plus, minus in self._estimates(X):
            rows.append([
                plus.alpha_hat if plus else np.nan, plus.r_squared if plus else np.nan,
                minus.alpha_hat if minus else np.nan, minus.r_squared if minus else np.nan,
            ])
        return np.array(rows, dtype=float).reshape(-1, 4)

    def predict(self, X):
        """Labels ``singular``, ``smooth`` or ``inconclusive`` per abscissa."""
        return np.array([_label(p, m, self.label_margin, self.fit_tol)
                         for p, m in self._estimates(X)], dtype=object)

    def fit_transform(self, X, y=None, points=None):
        """Fit on ``X``; transform at ``points`` or, by default, at every sample."""
        self.fit(X)
        return self.transform(self.signal_.grid if points is None else points)


class FractionalVelocityEstimator(BaseEstimator):
    """Fractional velocity of a sampled signal at query points.

    ``predict`` returns the limit value: the finite value, ``0`` for a
    vanishing limit, ``inf`` for a divergent one and ``nan`` when the ladder
    is inconclusive.  Complex values only arise for closed-form functions,
    so the output is real.
    """

    def __init__(self, order=1.0, direction="plus", step=1.0, origin=0.0,
                 eps0=None, ratio=0.5, count=6, slope_tol=SLOPE_TOL, fit_tol=FIT_TOL):
        self.order = order
        self.direction = direction
        self.step = step
        self.origin = origin
        self.eps0 = eps0
        self.ratio = ratio
        self.count = count
        self.slope_tol = slope_tol
        self.fit_tol = fit_tol

    def fit(self, X, y=None):
        check_order(self.order, "order")
        check_direction(self.direction)
        self.signal_ = SampledSignal(check_signal(X), origin=self.origin, step=self.step)
        self.ladder_ = _ladder(self.eps0, self.ratio, self.count, self.step)
        self.n_features_in_ = 1
        return self

    def estimate(self, X):
        """Full :class:`~fracvel.limits.LimitEstimate` per point (``None`` on failure)."""
        check_is_fitted(self, "signal_")
        out = []
        for x in check_points(X):
            try:
                out.append(velocity(self.signal_, float(x), self.order, self.direction,
                                    self.ladder_, self.slope_tol, self.fit_tol))
            except FracvelError:
                out.append(None)
        return out

    def predict(self, X):
        values = []
        for est in self.estimate(X):
            if est is None or est.classification is Limit.INCONCLUSIVE:
                values.append(np.nan)
            elif est.classification is Limit.ZERO:
                values.append(0.0)
            elif est.classification is Limit.DIVERGENT:
                values.append(np.inf)
            else:
                values.append(float(np.real(est.value)))
        return np.array(values, dtype=float)
