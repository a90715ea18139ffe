"""Brute-force reference: slice a piecewise-constant potential and multiply.

Each sub-slab propagator is the matrix exponential of the first-order system
``(psi, psi')' = [[0, 1], [V - E, 0]] (psi, psi')``, computed numerically by
``scipy.linalg.expm``. Nothing here reuses the closed-form entries of
:mod:`pscatter.scattering`, so agreement between the two is a real check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, NumericError
from .scattering import DoubleLayerSystem, ScatteringAmplitudes

OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class PiecewisePotential:
    """Potential equal to ``heights[i]`` on ``(breakpoints[i], breakpoints[i+1])``.

    Zero outside ``[breakpoints[0], breakpoints[-1]]``.
    """

    breakpoints: tuple
    heights: tuple

    def __post_init__(self):
        b = tuple(float(x) for x in self.breakpoints)
        h = tuple(float(x) for x in self.heights)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "heights", h)
        if not all(math.isfinite(x) for x in b + h):
            raise DomainError("breakpoints and heights must be finite")
        if len(b) == 0 and len(h) == 0:
            return
        if len(h) != len(b) - 1:
            raise DomainError("need exactly one height per interval")
        if any(hi <= lo for lo, hi in zip(b, b[1:])):
            raise DomainError("breakpoints must be strictly increasing")

    @property
    def n_intervals(self) -> int:
        return len(self.heights)

    @classmethod
    def from_double_layer(cls, system: DoubleLayerSystem) -> "PiecewisePotential":
        L1, L2 = system.layer1, system.layer2
        points = [L1.x_left, L1.x_right, L2.x_left, L2.x_right]
        heights = [L1.h, 0.0, L2.h]
        # drop zero-width pieces (l = 0 layers, r = 0 gap)
        keep_b, keep_h = [points[0]], []
        for x, h in zip(points[1:], heights):
            if x > keep_b[-1]:
                keep_b.append(x)
                keep_h.append(h)
        if not keep_h:
            return cls((), ())
        return cls(tuple(keep_b), tuple(keep_h))


def _slab_propagator(height: float, width: float, E: float) -> np.ndarray:
    generator = np.array([[0.0, 1.0], [height - E, 0.0]])
    return expm(generator * width)


def _allocate_slices(lengths: Sequence[float], n_slices: int) -> list[int]:
    total = sum(lengths)
    counts = [max(1, int(round(n_slices * w / total))) for w in lengths]
    return counts


def oracle_scatter(
    pot: PiecewisePotential, E: float, n_slices: int = 1000
) -> ScatteringAmplitudes:
    """Amplitudes from the product of ``~n_slices`` uniform sub-slab propagators.

    Slices never straddle a breakpoint: each interval gets its own uniform
    subdivision, with counts proportional to interval length.
    """
    if not math.isfinite(E) or E <= 0:
        raise DomainError(f"energy must be positive, got {E!r}")
    if pot.n_intervals == 0:
        return ScatteringAmplitudes.free(E)
    if n_slices < pot.n_intervals:
        raise DomainError("n_slices must be at least the number of intervals")

    b = pot.breakpoints
    lengths = [hi - lo for lo, hi in zip(b, b[1:])]
    counts = _allocate_slices(lengths, n_slices)
    total = np.eye(2)
    for height, width, count in zip(pot.heights, lengths, counts):
        step = _slab_propagator(height, width / count, E)
        for _ in range(count):
            total = step @ total
            peak = np.abs(total).max()
            if not peak <= OVERFLOW_LIMIT:  # also catches nan
                raise NumericError("transfer-matrix product overflowed")

    k = math.sqrt(E)
    u = total[0, 0] - total[1, 1]
    v = k * total[0, 1] + total[1, 0] / k
    d = total[0, 0] + total[1, 1] + 1j * (total[1, 0] / k - k * total[0, 1])
    return ScatteringAmplitudes.from_uvd(u, v, d, E, b[0], b[-1])
