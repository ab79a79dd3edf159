"""Complex-capable scalar helpers.

Values are plain Python/numpy ``float`` or ``complex``.  Real inputs stay
real through every closed operation; a value only becomes complex when a
non-integer power is taken of a negative base, following the principal
branch ``z**a = exp(a * (ln|z| + i Arg z))`` with ``Arg z`` in ``(-pi, pi]``.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .exceptions import DomainError

Scalar = Union[float, complex]

_CBRT = 1.0 / 3.0


def _is_integer(a: float) -> bool:
    return float(a).is_integer()


def _normalize_zero_imag(z: np.ndarray) -> np.ndarray:
    # -0.0 imaginary parts would put negative reals on the lower side of the cut
    return z + 0j


def spow(base, exponent: float):
    """Principal-branch power of a scalar or array.

    Real non-negative bases take a pure real path, as do integer exponents of
    real bases.  Otherwise the computation goes through the polar form.

    Raises
    ------
    DomainError
        If ``exponent`` is not finite, or a zero base meets a negative exponent.
    """
    a = float(exponent)
    if not math.isfinite(a):
        raise DomainError(f"non-finite exponent {exponent!r}")
    scalar_in = np.ndim(base) == 0
    z = np.asarray(base)
    if a < 0 and np.any(z == 0):
        raise DomainError(f"zero raised to negative power {a!r}")

    if not np.iscomplexobj(z):
        z = z.astype(float, copy=False)
        if _is_integer(a):
            out = np.power(z, a)
        elif np.all(z >= 0):
            if a == 0.5:
                out = np.sqrt(z)
            elif a == _CBRT:
                out = np.cbrt(z)
            else:
                out = np.power(z, a)
        else:
            out = _complex_pow(z.astype(complex), a)
    else:
        out = _complex_pow(z, a)
    return out[()] if scalar_in else out


def _complex_pow(z: np.ndarray, a: float) -> np.ndarray:
    z = _normalize_zero_imag(z)
    if _is_integer(a):
        return np.power(z, a)
    if a == 0.5:
        return np.sqrt(z)
    r = np.power(np.abs(z), a)
    theta = a * np.angle(z)
    # keep positive reals exactly real
    on_pos_axis = (z.imag == 0) & (z.real >= 0)
    re = np.where(on_pos_axis, r, r * np.cos(theta))
    im = np.where(on_pos_axis, 0.0, r * np.sin(theta))
    return re + 1j * im


def sabs(z) -> float:
    """Euclidean modulus."""
    return abs(z)


def is_real(values) -> bool:
    """True when every value has an exactly zero imaginary part."""
    arr = np.asarray(values)
    if not np.iscomplexobj(arr):
        return True
    return bool(np.all(arr.imag == 0))


def as_python(z) -> Scalar:
    """Unwrap a numpy scalar into ``float`` or ``complex``."""
    if isinstance(z, (np.generic, np.ndarray)):
        z = z.item()
    if isinstance(z, complex):
        return z
    return float(z)


def to_dict(z) -> dict:
    """JSON form ``{"re": ..., "im": ...}``."""
    z = complex(z)
    return {"re": _json_float(z.real), "im": _json_float(z.imag)}


def _json_float(v: float):
    v = float(v)
    if math.isfinite(v):
        return v + 0.0  # drop negative zero
    return None


def from_dict(d: dict) -> Scalar:
    im = float(d.get("im", 0.0) or 0.0)
    re = float(d["re"])
    return complex(re, im) if im else re
