"""Exact scattering by one or two rectangular layers at finite width.

Units are hbar**2 / 2m* = 1, so the free wave number is ``k = sqrt(E)`` and
inside a layer of height ``h`` the wave number is ``sqrt(E - h)``.

Every amplitude keeps its positional phase: for a scatterer occupying
``(x_a, x_b)`` the left reflection carries ``exp(2ik x_a)``, the right one
``exp(-2ik x_b)`` and the transmission ``exp(ik (x_a - x_b))``. Dropping them
breaks the multiple-reflection composition.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._entire import cos_sinc
from .errors import DomainError, NumericError, PoleError

POLE_TOL = 1e-14


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


def _check_energy(E):
    _check_finite(E=E)
    if E <= 0:
        raise DomainError(f"energy must be positive, got {E!r}")


@dataclass(frozen=True)
class Layer:
    """Homogeneous slab of height ``h`` on ``(x_left, x_left + l)``.

    Negative ``h`` is a well.
    """

    h: float
    l: float
    x_left: float = 0.0

    def __post_init__(self):
        _check_finite(h=self.h, l=self.l, x_left=self.x_left)
        if self.l < 0:
            raise DomainError(f"layer thickness must be >= 0, got {self.l!r}")

    @property
    def x_right(self) -> float:
        return self.x_left + self.l


@dataclass(frozen=True)
class DoubleLayerSystem:
    """Two layers separated by a gap ``r``; layer 2 lies to the right."""

    layer1: Layer
    layer2: Layer
    r: float

    def __post_init__(self):
        _check_finite(r=self.r)
        if self.r < 0:
            raise DomainError(f"gap must be >= 0, got {self.r!r}")
        expected = self.layer1.x_right + self.r
        scale = max(1.0, abs(expected))
        if abs(self.layer2.x_left - expected) > 1e-12 * scale:
            raise DomainError(
                "layer2.x_left must equal layer1.x_left + layer1.l + r "
                f"({self.layer2.x_left!r} != {expected!r})"
            )

    @classmethod
    def from_params(cls, h1, l1, h2, l2, r, x1=0.0) -> "DoubleLayerSystem":
        first = Layer(h1, l1, x1)
        return cls(first, Layer(h2, l2, first.x_right + r), r)

    @property
    def x_left(self) -> float:
        return self.layer1.x_left

    @property
    def x_right(self) -> float:
        return self.layer2.x_right


class WaveNumbers(NamedTuple):
    k: float
    k1: complex
    k2: complex


def wave_numbers(system: DoubleLayerSystem, E: float) -> WaveNumbers:
    """Outer and intra-layer wave numbers (principal complex square root)."""
    _check_energy(E)
    return WaveNumbers(
        math.sqrt(E),
        cmath.sqrt(E - system.layer1.h),
        cmath.sqrt(E - system.layer2.h),
    )


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Complex amplitudes of a scatterer at one energy.

    ``reflectance`` and ``transmittance`` are the flux fractions. When the
    amplitudes come from a transfer matrix, they are formed from the real
    invariants ``u``, ``v`` as ``(u²+v²)/(4+u²+v²)`` and ``4/(4+u²+v²)``;
    otherwise they are ``|r_left|²`` and ``|t|²``.
    """

    r_left: complex
    r_right: complex
    t: complex
    energy: float
    reflectance: float
    transmittance: float
    u: float | None = None
    v: float | None = None
    d: complex | None = None

    @property
    def flux(self) -> float:
        return self.reflectance + self.transmittance

    @classmethod
    def from_uvd(cls, u, v, d, E, x_a, x_b) -> "ScatteringAmplitudes":
        k = math.sqrt(E)
        if not (math.isfinite(u) and math.isfinite(v) and cmath.isfinite(d)):
            raise NumericError("non-finite transfer invariants (overflow)")
        if abs(d) < POLE_TOL:
            raise PoleError("vanishing D denominator")
        s = u * u + v * v
        return cls(
            r_left=-(u + 1j * v) / d * cmath.exp(2j * k * x_a),
            r_right=(u - 1j * v) / d * cmath.exp(-2j * k * x_b),
            t=2.0 / d * cmath.exp(1j * k * (x_a - x_b)),
            energy=E,
            reflectance=s / (4.0 + s),
            transmittance=4.0 / (4.0 + s),
            u=float(u),
            v=float(v),
            d=complex(d),
        )

    @classmethod
    def free(cls, E) -> "ScatteringAmplitudes":
        return cls(0j, 0j, 1 + 0j, E, 0.0, 1.0, 0.0, 0.0, 2 + 0j)


def transfer_matrix(layer: Layer, E: float) -> np.ndarray:
    """Real unimodular matrix mapping ``(psi, psi')`` across the layer.

    Entries ``cos(kl)``, ``sin(kl)/k``, ``-k sin(kl)``, ``cos(kl)`` with
    ``k² = E - h``; evaluated from ``k²`` directly, so ``E < h`` and ``E = h``
    need no special branch.
    """
    _check_finite(E=E)
    q = E - layer.h
    c, s = cos_sinc(q * layer.l * layer.l)
    ls = layer.l * s
    return np.array([[c, ls], [-q * ls, c]])


def uvd_from_matrix(m, E):
    """Real invariants ``u``, ``v`` and complex ``D`` of a transfer matrix."""
    k = math.sqrt(E)
    u = m[0, 0] - m[1, 1]
    v = k * m[0, 1] + m[1, 0] / k
    d = m[0, 0] + m[1, 1] + 1j * (m[1, 0] / k - k * m[0, 1])
    return float(u), float(v), complex(d)


def layer_scattering(layer: Layer, E: float) -> ScatteringAmplitudes:
    """Reflection and transmission amplitudes of a single slab."""
    _check_energy(E)
    q = E - layer.h
    c, s = cos_sinc(q * layer.l * layer.l)
    ls = layer.l * s  # sin(k_j l) / k_j
    k = math.sqrt(E)
    # (k/k_j - k_j/k) sin = ls * h / k; (k/k_j + k_j/k) sin = ls * (E + q) / k
    v = ls * layer.h / k
    d = 2.0 * c - 1j * ls * (E + q) / k
    return ScatteringAmplitudes.from_uvd(0.0, v, d, E, layer.x_left, layer.x_right)


def compose_interference(
    s1: ScatteringAmplitudes, s2: ScatteringAmplitudes
) -> ScatteringAmplitudes:
    """Sum all multiple reflections between scatterer 1 (left) and 2 (right).

    The geometric series ``sum (R1r R2l)**n`` is resummed in closed form.
    Transmission is reciprocal, so ``T1l = T1r`` is assumed.
    """
    if s1.energy != s2.energy:
        raise DomainError("amplitudes must be at the same energy")
    denom = 1.0 - s1.r_right * s2.r_left
    if abs(denom) < POLE_TOL:
        raise PoleError(f"geometric series pole: |1 - R1r R2l| = {abs(denom):.3e}")
    r_left = s1.r_left + s1.t * s1.t * s2.r_left / denom
    r_right = s2.r_right + s2.t * s2.t * s1.r_right / denom
    t = s1.t * s2.t / denom
    return ScatteringAmplitudes(
        r_left, r_right, t, s1.energy, abs(r_left) ** 2, abs(t) ** 2
    )


def double_layer_uvd(system: DoubleLayerSystem, E: float):
    """Closed-form ``u``, ``v``, ``D`` of the two-layer structure.

    The trigonometric terms are expanded as ``cos(k_j l_j)``,
    ``sigma_j = sin(k_j l_j)/k_j`` and ``k_j sin(k_j l_j) = q_j sigma_j`` with
    ``q_j = k_j² = E - h_j``; every coefficient is then real.
    """
    _check_energy(E)
    k = math.sqrt(E)
    k2 = E
    L1, L2 = system.layer1, system.layer2
    q1, q2 = E - L1.h, E - L2.h
    c1, s1 = cos_sinc(q1 * L1.l * L1.l)
    c2, s2 = cos_sinc(q2 * L2.l * L2.l)
    sg1, sg2 = L1.l * s1, L2.l * s2
    C, S = math.cos(k * system.r), math.sin(k * system.r)

    minus1 = (k - q1 / k) * sg1  # (k/k1 - k1/k) sin(k1 l1)
    minus2 = (k - q2 / k) * sg2
    plus1 = (k + q1 / k) * sg1  # (k/k1 + k1/k) sin(k1 l1)
    plus2 = (k + q2 / k) * sg2
    ss = sg1 * sg2

    u = (q2 - q1) * ss * C + (minus1 * c2 - c1 * minus2) * S
    v = (minus1 * c2 + c1 * minus2) * C + (q1 * q2 / k2 - k2) * ss * S
    p_re = 2.0 * c1 * c2 - (q1 + q2) * ss
    p_im = 2.0 * c1 * c2 - (k2 + q1 * q2 / k2) * ss
    mixed = plus1 * c2 + c1 * plus2
    d = complex(p_re * C - mixed * S, -(mixed * C + p_im * S))
    return float(u), float(v), d


def double_layer_exact(system: DoubleLayerSystem, E: float) -> ScatteringAmplitudes:
    """Exact amplitudes of the double layer at energy ``E``."""
    u, v, d = double_layer_uvd(system, E)
    return ScatteringAmplitudes.from_uvd(u, v, d, E, system.x_left, system.x_right)


def double_layer_composed(
    system: DoubleLayerSystem, E: float
) -> ScatteringAmplitudes:
    """Same amplitudes assembled from the single layers by interference."""
    return compose_interference(
        layer_scattering(system.layer1, E), layer_scattering(system.layer2, E)
    )
