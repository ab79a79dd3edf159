"""Independent reference values.

Nothing here imports fracvel.  Closed forms are worked out by hand; the
numeric helpers use only ``math``/``cmath`` so that they share no code
with the library under test.
"""

import cmath
import math

# Median pooled one-sided oscillation exponent of the Weierstrass function
# (a=0.5, b=3, 40 terms) over 51 points of [0, 1].  Computed once from
# random-point window sampling (6000 points/window, seed 0) and a plain
# least-squares fit; theory gives ln 2 / ln 3.
WEIERSTRASS_ORACLE_MEDIAN = 0.627
WEIERSTRASS_THEORY = math.log(2) / math.log(3)


def principal_pow(z, a):
    """``exp(a Log z)`` with ``Arg`` in ``(-pi, pi]``."""
    z = complex(z)
    if z == 0:
        return 0j if a > 0 else complex(math.inf)
    return cmath.exp(a * cmath.log(z))


def sqrt_c(x):
    return principal_pow(x, 0.5)


def variation(f, x, beta, eps, sign):
    """``(f(x+eps) - f(x)) / eps**beta`` or ``(f(x) - f(x-eps)) / eps**beta``."""
    if sign > 0:
        return (f(x + eps) - f(x)) / eps ** beta
    return (f(x) - f(x - eps)) / eps ** beta


def covariation(f, g, x, beta, eps, sign):
    if sign > 0:
        df, dg = f(x + eps) - f(x), g(x + eps) - g(x)
    else:
        df, dg = f(x) - f(x - eps), g(x) - g(x - eps)
    return df * dg / eps ** beta


def cusp_velocity(alpha, beta, sign):
    """Limit of the order-``beta`` variation of ``|x|**alpha`` at 0.

    The quotient is ``sign * eps**(alpha - beta)``: zero, ``sign`` or
    unbounded.
    """
    if beta < alpha:
        return "Zero", 0.0
    if beta == alpha:
        return "Finite", float(sign)
    return "Divergent", math.inf


def cusp_covariation(a1, a2, beta=1.0, tol=1e-9):
    """``[|x|^a1, |x|^a2]`` at 0: the quotient is ``eps**(a1 + a2 - beta)``."""
    s = a1 + a2 - beta
    if s > tol:
        return "Zero"
    if s < -tol:
        return "Divergent"
    return "Finite"


def oscillation_dense(f, lo, hi, n=20001):
    vals = [f(lo + (hi - lo) * k / (n - 1)) for k in range(n)]
    return max(vals) - min(vals)
