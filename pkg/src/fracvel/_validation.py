"""Argument checking shared by the public functions and estimators."""

from __future__ import annotations

import enum
import math

import numpy as np

from .exceptions import ParameterError


class Direction(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.PLUS else -1

    @property
    def symbol(self) -> str:
        return "+" if self is Direction.PLUS else "-"

    def __str__(self):
        return self.value


_ALIASES = {
    "plus": Direction.PLUS, "+": Direction.PLUS, "forward": Direction.PLUS, 1: Direction.PLUS,
    "minus": Direction.MINUS, "-": Direction.MINUS, "backward": Direction.MINUS, -1: Direction.MINUS,
}


def check_direction(direction) -> Direction:
    if isinstance(direction, Direction):
        return direction
    key = direction.lower() if isinstance(direction, str) else direction
    try:
        return _ALIASES[key]
    except (KeyError, TypeError):
        raise ParameterError(f"direction must be 'plus' or 'minus', got {direction!r}") from None


def check_order(beta, name: str = "beta") -> float:
    """Orders live in ``(0, 1]``."""
    try:
        b = float(beta)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number, got {beta!r}") from None
    if not (math.isfinite(b) and 0 < b <= 1):
        raise ParameterError(f"{name} must lie in (0, 1], got {beta!r}")
    return b


def _check_array(arr):
    # deferred: sklearn adds about a second to CLI start-up
    from sklearn.utils.validation import check_array
    return check_array(arr, ensure_2d=False, dtype=float)


def check_signal(X) -> np.ndarray:
    """Coerce a 1-D signal (or single-column 2-D array) to a float vector."""
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = _check_array(arr)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D signal, got shape {arr.shape}")
    return arr


def check_points(X) -> np.ndarray:
    """Query abscissae as a float vector."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    return _check_array(np.atleast_1d(arr))
