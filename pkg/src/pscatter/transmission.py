"""Limiting transmission of the squeezed structure on each resonance.

On a root ``gamma_n`` of the set's resonance equation the transmission tends
to ``4 theta² / (1 + theta²)²``; off the resonance set it tends to zero. The
``theta²`` rows below already have the resonance equation folded in, so they
are only physical at a root. Elsewhere they are evaluated as a plain formula
and tagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from ._entire import cos_sinc
from .errors import DomainError, PoleError, UnsupportedRegion
from .resonance import region_resonance_residual
from .scattering import double_layer_exact
from .squeeze import RegionLabel, SqueezeParametrization, theta_limit, zeta

RESONANT_RTOL = 1e-9


def _cosh_and_bsinh(x: float) -> tuple[float, float, float]:
    """For ``b = sqrt(x)``: ``cosh b``, ``b sinh b`` and ``sinh² b``.

    Negative ``x`` continues to ``cos``/``sin`` of ``sqrt(-x)``.
    """
    ch, shs = cos_sinc(-x)  # cos(sqrt(-x)) = cosh(sqrt(x)); sin/.. = sinh/..
    return ch, x * shs, x * shs * shs


def theta_squared(Q, eta: float, c: float, gamma_n: float) -> float:
    """``theta²`` at intensity ``gamma_n`` for surface set ``Q``."""
    Q = RegionLabel.parse(Q)
    if Q in (RegionLabel.Z, RegionLabel.OFF_SURFACE):
        raise UnsupportedRegion(f"no limiting transmission on {Q.value}")
    z = zeta(Q, eta, c)
    x = 2.0 * gamma_n / z
    if Q is RegionLabel.P:
        ch, bsh, sh2 = _cosh_and_bsinh(x)
        return (ch + c * bsh) ** 2 + eta * sh2
    if Q is RegionLabel.K:
        return (1.0 + c * x) ** 2 + eta * x
    if Q is RegionLabel.L:
        ch, bsh, _ = _cosh_and_bsinh(x)
        return (ch + c * bsh) ** 2
    if Q is RegionLabel.N:
        ch, _, sh2 = _cosh_and_bsinh(x)
        return ch * ch + eta * sh2
    if Q is RegionLabel.X:
        return 1.0 + 2.0 * gamma_n
    # Y
    if 1.0 - 2.0 * gamma_n == 0:
        raise PoleError("theta² on Y has a pole at gamma = 1/2")
    return 1.0 / (1.0 - 2.0 * gamma_n)


def transmission_from_theta_sq(theta_sq: float) -> float:
    return 4.0 * theta_sq / (1.0 + theta_sq) ** 2


def is_resonant(Q, eta: float, c: float, gamma: float) -> bool:
    """Whether ``gamma`` solves the resonance equation of ``Q`` to ``1e-9``."""
    try:
        res = region_resonance_residual(Q, eta, c, gamma)
    except PoleError:
        return False
    return abs(res) <= RESONANT_RTOL * (1.0 + abs(gamma))


@dataclass(frozen=True)
class ResonantTransmission:
    region: RegionLabel
    n: int | None
    gamma_n: float
    theta_sq: float
    T_limit: float
    resonant: bool

    @property
    def note(self) -> str:
        return "resonance" if self.resonant else "formula check only"


def transmission_limit(Q, eta: float, c: float, gamma_n: float, n=None) -> ResonantTransmission:
    """Package ``theta²`` and the limiting transmission at ``gamma_n``."""
    Q = RegionLabel.parse(Q)
    th2 = theta_squared(Q, eta, c, gamma_n)
    if not th2 > 0:
        raise DomainError(f"theta² = {th2!r} is not positive at gamma = {gamma_n!r}")
    return ResonantTransmission(
        Q, n, gamma_n, th2, transmission_from_theta_sq(th2),
        is_resonant(Q, eta, c, gamma_n),
    )


def transmission_vertex_c0(eta: float, gamma_n: float) -> float:
    """Closed form of the vertex transmission for touching layers (``c = 0``)."""
    chi_sq = 2.0 * gamma_n / (1.0 + eta)
    if chi_sq >= 0:
        t2 = math.tanh(math.sqrt(chi_sq)) ** 2
    else:
        t2 = -math.tan(math.sqrt(-chi_sq)) ** 2
    return (1.0 - t2) * (1.0 + eta * t2) / (1.0 + 0.5 * (eta - 1.0) * t2) ** 2


def theta_squared_from_layers(Q, eta: float, c: float, gamma: float, eps: float = 1e-30) -> float:
    """``theta²`` from the layer ratios ``A_j`` and ``l_j`` of a squeezed system.

    Uses the representative exponents of ``Q`` at a tiny ``eps``; the
    leftover corrections scale as a positive power of ``eps``.
    """
    if gamma == 0:
        return 1.0  # A1, A2 -> 0 together; the ratio tends to 1
    system = SqueezeParametrization.at_region(Q, eta, c, gamma).at(eps)
    A1, A2 = system.a_values()
    _, l1, _, l2, _ = system.layer_data()
    return theta_limit(A1, A2, l1, l2) ** 2


class ConvergencePoint(NamedTuple):
    epsilon: float
    T_exact: float
    T_limit: float
    abs_diff: float


def convergence_study(
    params: SqueezeParametrization, eps_grid: Sequence[float], energy: float = 1.0
) -> list[ConvergencePoint]:
    """Exact finite-width transmission along a decreasing ``eps`` grid.

    The reference value is the resonance limit when ``params.gamma`` is a
    root and ``0`` otherwise.
    """
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid or any(e <= 0 for e in eps_grid):
        raise DomainError("eps_grid must be non-empty and positive")
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise DomainError("eps_grid must be strictly decreasing")
    Q = params.region
    if is_resonant(Q, params.eta, params.c, params.gamma):
        T_lim = transmission_limit(Q, params.eta, params.c, params.gamma).T_limit
    else:
        T_lim = 0.0
    out = []
    for eps in eps_grid:
        T = double_layer_exact(params.at(eps).to_double_layer(), energy).transmittance
        out.append(ConvergencePoint(eps, T, T_lim, abs(T - T_lim)))
    return out
