"""Fractional velocity, co-variation and Hölder exponent estimation."""

from .calculus import (
    RuleReport,
    check_product_lemma,
    check_product_rule,
    check_quotient_rule,
    check_square_rule,
    combined_c1_product,
    leibniz_limit_check,
    reciprocal_identities,
)
from .covar import CovarEstimate, covariation, covariation_at, covariation_c1, covariation_square
from .diffops import delta_minus, delta_plus, delta_second, oscillation
from .exceptions import (
    DomainError,
    FlatSignalError,
    FracvelError,
    InsufficientDataError,
    NotDifferentiableError,
    NotRealError,
    ParameterError,
    ParseError,
    RangeError,
)
from .exprparse import parse, to_source
from .functions import X, Expr, SampledSignal, derivative, make_cusp, weierstrass
from .holder import HolderEstimate, cross_check_trichotomy, estimate_holder, scan, scan_to_csv
from .limits import EpsLadder, Limit, LimitEstimate
from .velocity import frac_variation, second_variation, velocity, velocity_c1

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is slow to import; load the wrappers on first use
    if name in ("FractionalVelocityEstimator", "HolderExponentEstimator"):
        from . import estimators
        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
