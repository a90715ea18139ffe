"""Branch-free evaluation of cos(z) and sin(z)/z as functions of z**2.

Transfer-matrix entries and the squeeze asymptotics only ever need these two
even functions, so working with ``x = z**2`` (real, either sign) removes every
square-root branch choice: ``x < 0`` gives the hyperbolic continuation.
"""

import math

import numpy as np

_SERIES_CUTOFF = 1e-6


def _cos_sinc_scalar(x: float):
    # plain-float path; numpy's per-call overhead dominates on scalars
    t = math.sqrt(abs(x))
    if x > 0:
        c, s = math.cos(t), math.sin(t)
    else:
        try:
            c, s = math.cosh(t), math.sinh(t)
        except OverflowError:
            return math.inf, math.inf
    if abs(x) < _SERIES_CUTOFF:
        return c, 1.0 - x / 6.0 + x * x / 120.0
    return c, s / t


def cos_sinc(x):
    """Return ``(cos(sqrt(x)), sin(sqrt(x))/sqrt(x))`` for real ``x``.

    Works on scalars and arrays. For ``x < 0`` this is ``(cosh t, sinh t / t)``
    with ``t = sqrt(-x)``; ``x = 0`` gives ``(1, 1)``.
    """
    if isinstance(x, (float, int)) or np.ndim(x) == 0:
        x = float(x)
        if math.isfinite(x):
            return _cos_sinc_scalar(x)
    x = np.asarray(x, dtype=float)
    t = np.sqrt(np.abs(x))
    pos = x > 0
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        c = np.where(pos, np.cos(t), np.cosh(t))
        s = np.where(pos, np.sin(t), np.sinh(t)) / t
    small = np.abs(x) < _SERIES_CUTOFF
    if np.any(small):
        s = np.where(small, 1.0 - x / 6.0 + x * x / 120.0, s)
    if c.ndim == 0:
        return float(c), float(s)
    return c, s
