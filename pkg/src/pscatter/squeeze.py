"""Three-scale squeezing of the double layer into a single-point interaction.

With a squeezing parameter ``eps -> 0`` the layer data scale as::

    h1 = a1 eps**-mu      h2 = a2 eps**-nu      l1 = eps
    l2 = eta eps**(1 - mu + nu)                   r  = c eps**tau

and the profile tends to ``gamma * delta'`` exactly on a trihedral surface in
the ``(mu, nu, tau)`` octant: a vertex ``P``, edges ``K, L, N`` and planes
``X, Y, Z``. On that surface the amplitudes are fixed by ``gamma`` through the
set function ``zeta_Q``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from ._entire import cos_sinc
from .errors import DomainError, NumericError, PoleError
from .scattering import DoubleLayerSystem

EXPONENT_TOL = 1e-12


class RegionLabel(enum.Enum):
    P = "P"
    K = "K"
    L = "L"
    N = "N"
    X = "X"
    Y = "Y"
    Z = "Z"
    OFF_SURFACE = "OffSurface"

    @classmethod
    def parse(cls, tag) -> "RegionLabel":
        if isinstance(tag, cls):
            return tag
        for label in cls:
            if str(tag) in (label.value, label.name):
                return label
        raise DomainError(f"unknown region {tag!r}")

    @property
    def on_surface(self) -> bool:
        return self is not RegionLabel.OFF_SURFACE


# one interior point per surface set, used when only the label is given
REPRESENTATIVE_EXPONENTS = {
    RegionLabel.P: (2.0, 2.0, 1.0),
    RegionLabel.K: (1.5, 1.0, 0.5),
    RegionLabel.L: (2.0, 3.0, 1.0),
    RegionLabel.N: (2.0, 2.0, 2.0),
    RegionLabel.X: (1.5, 1.0, 1.0),
    RegionLabel.Y: (2.0, 3.0, 2.0),
    RegionLabel.Z: (1.5, 2.0, 0.5),
}


def _eq(a, b):
    return abs(a - b) <= EXPONENT_TOL * max(1.0, abs(b))


def _gt(a, b):
    return a > b and not _eq(a, b)


def classify_region(mu: float, nu: float, tau: float) -> RegionLabel:
    """Locate ``(mu, nu, tau)`` on the trihedral surface.

    Equalities are tested to a relative ``1e-12`` so that inputs such as
    ``nu = 2*(mu - 1)`` computed in floating point still land on their set.
    Points of the positive octant off the surface return ``OFF_SURFACE``.
    """
    for name, value in (("mu", mu), ("nu", nu), ("tau", tau)):
        if not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be a positive finite number, got {value!r}")

    if _eq(mu, 2.0):
        if _eq(nu, 2.0):
            if _eq(tau, 1.0):
                return RegionLabel.P
            if _gt(tau, 1.0):
                return RegionLabel.N
        elif _gt(nu, 2.0):
            if _eq(tau, 1.0):
                return RegionLabel.L
            if _gt(tau, 1.0):
                return RegionLabel.Y
    elif _gt(mu, 1.0) and _gt(2.0, mu):
        nu0, tau0 = 2.0 * (mu - 1.0), mu - 1.0
        if _eq(nu, nu0):
            if _eq(tau, tau0):
                return RegionLabel.K
            if _gt(tau, tau0):
                return RegionLabel.X
        elif _gt(nu, nu0) and _eq(tau, tau0):
            return RegionLabel.Z
    return RegionLabel.OFF_SURFACE


def zeta(Q, eta: float, c: float) -> float:
    """Set function normalizing the amplitudes on each surface set."""
    Q = RegionLabel.parse(Q)
    if Q is RegionLabel.OFF_SURFACE:
        raise DomainError("zeta is defined only on the trihedral surface")
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    if c < 0:
        raise DomainError(f"c must be >= 0, got {c!r}")
    if Q is RegionLabel.Z and c == 0:
        raise DomainError("on Z the delta-prime limit needs c > 0")
    return {
        RegionLabel.P: 1.0 + eta + 2.0 * c,
        RegionLabel.K: eta + 2.0 * c,
        RegionLabel.L: 1.0 + 2.0 * c,
        RegionLabel.N: 1.0 + eta,
        RegionLabel.X: eta,
        RegionLabel.Y: 1.0,
        RegionLabel.Z: 2.0 * c,
    }[Q]


def amplitudes_from_gamma(Q, eta: float, c: float, gamma: float) -> tuple[float, float]:
    """Height prefactors ``(a1, a2)`` that realize intensity ``gamma``."""
    z = zeta(Q, eta, c)
    a1 = 2.0 * gamma / z
    return a1, -a1 / eta


@dataclass(frozen=True)
class SqueezeParametrization:
    mu: float
    nu: float
    tau: float
    eta: float
    c: float
    gamma: float

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta!r}")
        if self.c < 0:
            raise DomainError(f"c must be >= 0, got {self.c!r}")
        if not math.isfinite(self.gamma):
            raise DomainError("gamma must be finite")

    @classmethod
    def at_region(cls, Q, eta, c, gamma) -> "SqueezeParametrization":
        mu, nu, tau = REPRESENTATIVE_EXPONENTS[RegionLabel.parse(Q)]
        return cls(mu, nu, tau, eta, c, gamma)

    @property
    def region(self) -> RegionLabel:
        return classify_region(self.mu, self.nu, self.tau)

    @property
    def zeta(self) -> float:
        return zeta(self.region, self.eta, self.c)

    def amplitudes(self) -> tuple[float, float]:
        return amplitudes_from_gamma(self.region, self.eta, self.c, self.gamma)

    def zeta_at(self, eps: float) -> float:
        """Pre-limit value whose eps -> 0 limit is ``zeta``."""
        mu, nu, tau = self.mu, self.nu, self.tau
        return (
            eps ** (2 - mu)
            + self.eta * eps ** (2 * (1 - mu) + nu)
            + 2 * self.c * eps ** (1 - mu + tau)
        )

    def at(self, eps: float) -> "SqueezedSystem":
        return SqueezedSystem(self, eps)


@dataclass(frozen=True)
class SqueezedSystem:
    params: SqueezeParametrization
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainError(f"epsilon must be positive, got {self.epsilon!r}")

    def layer_data(self) -> tuple[float, float, float, float, float]:
        """``(h1, l1, h2, l2, r)`` at this epsilon."""
        p, e = self.params, self.epsilon
        a1, a2 = p.amplitudes()
        return (
            a1 * e ** -p.mu,
            e,
            a2 * e ** -p.nu,
            p.eta * e ** (1 - p.mu + p.nu),
            p.c * e ** p.tau,
        )

    def to_double_layer(self, x1: float = 0.0) -> DoubleLayerSystem:
        return DoubleLayerSystem.from_params(*self.layer_data(), x1=x1)

    def a_values(self) -> tuple[complex, complex]:
        """``A_j = sqrt(-h_j) l_j`` (imaginary for barriers)."""
        h1, l1, h2, l2, _ = self.layer_data()
        return cmath.sqrt(-h1) * l1, cmath.sqrt(-h2) * l2


# ---------------------------------------------------------------------------
# test functions and the distributional pairing


@dataclass(frozen=True)
class ProbeFunction:
    """Smooth test function with closed-form first and second derivatives."""

    name: str
    f: Callable
    df: Callable
    d2f: Callable
    support: tuple[float, float]

    @property
    def value0(self) -> float:
        return float(self.f(np.array([0.0]))[0])

    @property
    def slope0(self) -> float:
        return float(self.df(np.array([0.0]))[0])

    @cached_property
    def d2_max(self) -> float:
        """Upper bound on ``max |phi''|`` (dense sampling plus 1% margin)."""
        x = np.linspace(*self.support, 200_001)
        return 1.01 * float(np.max(np.abs(self.d2f(x))))


def _bump_parts(x, x0, w):
    s = (np.asarray(x, dtype=float) - x0) / w
    inside = np.abs(s) < 1
    one = np.where(inside, 1.0 - s * s, 1.0)
    g = np.where(inside, np.exp(-1.0 / one), 0.0)
    g1 = -2.0 * s / one**2
    g2 = -(2.0 + 6.0 * s * s) / one**3
    return g, g * g1 / w, g * (g2 + g1 * g1) / w**2


def bump_probe(x0=0.3, width=1.0) -> ProbeFunction:
    """Compactly supported ``exp(-1/(1 - s²))`` bump, ``s = (x - x0)/width``."""
    return ProbeFunction(
        "bump",
        lambda x: _bump_parts(x, x0, width)[0],
        lambda x: _bump_parts(x, x0, width)[1],
        lambda x: _bump_parts(x, x0, width)[2],
        (x0 - width, x0 + width),
    )


def gaussian_probe(x0=-0.25, sigma=0.5, cutoff=6.0) -> ProbeFunction:
    """Gaussian restricted to ``|x - x0| <= cutoff*sigma``."""

    def parts(x):
        z = (np.asarray(x, dtype=float) - x0) / sigma
        g = np.exp(-0.5 * z * z)
        return g, -z * g / sigma, (z * z - 1.0) * g / sigma**2

    return ProbeFunction(
        "gaussian",
        lambda x: parts(x)[0],
        lambda x: parts(x)[1],
        lambda x: parts(x)[2],
        (x0 - cutoff * sigma, x0 + cutoff * sigma),
    )


def poly_bump_probe(coeffs=(1.0, 2.0, -3.0), width=1.5) -> ProbeFunction:
    """Polynomial ``sum coeffs[i] x**i`` times a bump centred at the origin."""
    p = np.polynomial.Polynomial(coeffs)
    dp, d2p = p.deriv(1), p.deriv(2)

    def parts(x):
        x = np.asarray(x, dtype=float)
        b, db, d2b = _bump_parts(x, 0.0, width)
        return (
            p(x) * b,
            dp(x) * b + p(x) * db,
            d2p(x) * b + 2 * dp(x) * db + p(x) * d2b,
        )

    return ProbeFunction(
        "poly_bump",
        lambda x: parts(x)[0],
        lambda x: parts(x)[1],
        lambda x: parts(x)[2],
        (-width, width),
    )


def standard_probes() -> list[ProbeFunction]:
    return [bump_probe(), gaussian_probe(), poly_bump_probe()]


PROBES = {
    "bump": bump_probe,
    "gaussian": gaussian_probe,
    "poly_bump": poly_bump_probe,
}

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _integrate(f, a, b):
    if b <= a:
        return 0.0
    half = 0.5 * (b - a)
    x = a + half * (_GL_NODES + 1.0)
    return half * float(np.dot(_GL_WEIGHTS, f(x)))


def weak_pairing(system: SqueezedSystem, phi) -> float:
    """``<V_eps | phi>``: integral of the squeezed profile against ``phi``.

    Layer 1 starts at the origin. ``phi`` may be a :class:`ProbeFunction` or
    any vectorized callable.
    """
    f = phi.f if isinstance(phi, ProbeFunction) else phi
    h1, l1, h2, l2, r = system.layer_data()
    value = h1 * _integrate(f, 0.0, l1) + h2 * _integrate(f, l1 + r, l1 + r + l2)
    if not math.isfinite(value):
        raise NumericError("quadrature produced a non-finite value")
    return value


def remainder_bound(params: SqueezeParametrization, eps: float, d2_max: float) -> float:
    """Bound on the second-order Taylor remainder of the pairing.

    The ``eps**(3-mu)`` coefficient collects ``1/6`` from layer 1 and ``1/2``
    from layer 2.
    """
    mu, nu, tau, eta, c = params.mu, params.nu, params.tau, params.eta, params.c
    a1, _ = params.amplitudes()
    terms = (
        (2.0 / 3.0) * eps ** (3 - mu)
        + eta**2 / 6.0 * eps ** (3 * (1 - mu) + 2 * nu)
        + eta / 2.0 * eps ** (3 - 2 * mu + nu)
        + eta * c / 2.0 * eps ** (2 * (1 - mu) + nu + tau)
        + c * eps ** (2 - mu + tau)
        + c * c / 2.0 * eps ** (1 - mu + 2 * tau)
    )
    return d2_max * abs(a1) * terms


@dataclass(frozen=True)
class ProbeConvergence:
    name: str
    epsilons: tuple
    pairings: tuple
    target: float  # -gamma * phi'(0)
    errors: tuple  # |pairing - target|
    remainders: tuple
    bounds: tuple
    order: float
    constant: float

    @property
    def converged(self) -> bool:
        return self.order > 0

    @property
    def bound_respected(self) -> bool:
        return all(abs(r) <= b for r, b in zip(self.remainders, self.bounds))


@dataclass(frozen=True)
class DeltaPrimeReport:
    region: RegionLabel
    gamma: float
    probes: tuple

    @property
    def converged(self) -> bool:
        return all(p.converged for p in self.probes)


def fit_power_law(eps, err) -> tuple[float, float]:
    """Least-squares fit ``err ~ C eps**p`` in log-log; returns ``(p, C)``."""
    eps = np.asarray(eps, dtype=float)
    err = np.asarray(err, dtype=float)
    if np.all(err == 0):
        return math.inf, 0.0
    mask = err > 0
    if mask.sum() < 2:
        return math.nan, math.nan
    p, logc = np.polyfit(np.log(eps[mask]), np.log(err[mask]), 1)
    return float(p), float(math.exp(logc))


def check_delta_prime_convergence(
    params: SqueezeParametrization,
    phis: Sequence[ProbeFunction],
    eps_grid: Sequence[float],
) -> DeltaPrimeReport:
    """Measure how fast ``<V_eps|phi>`` approaches ``-gamma phi'(0)``.

    A non-positive fitted order is reported through ``converged``, never
    raised.
    """
    Q = params.region
    if not Q.on_surface:
        raise DomainError(
            f"exponents ({params.mu}, {params.nu}, {params.tau}) are off the surface"
        )
    eps_grid = [float(e) for e in eps_grid]
    if len(eps_grid) < 3:
        raise DomainError("eps_grid needs at least 3 points")
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])) or eps_grid[-1] <= 0:
        raise DomainError("eps_grid must be positive and strictly decreasing")

    a1, _ = params.amplitudes()
    reports = []
    for phi in phis:
        slope = phi.slope0
        target = -params.gamma * slope
        pairings, errors, rems, bounds = [], [], [], []
        for eps in eps_grid:
            value = weak_pairing(params.at(eps), phi)
            leading = -0.5 * a1 * params.zeta_at(eps) * slope
            pairings.append(value)
            errors.append(abs(value - target))
            rems.append(value - leading)
            bounds.append(remainder_bound(params, eps, phi.d2_max))
        p, C = fit_power_law(eps_grid, errors)
        reports.append(
            ProbeConvergence(
                phi.name, tuple(eps_grid), tuple(pairings), target,
                tuple(errors), tuple(rems), tuple(bounds), p, C,
            )
        )
    return DeltaPrimeReport(Q, params.gamma, tuple(reports))


# ---------------------------------------------------------------------------
# small-width asymptotics


def _as_double_layer(system) -> DoubleLayerSystem:
    if isinstance(system, SqueezedSystem):
        return system.to_double_layer()
    return system


def asymptotic_uvd(system, E: float):
    """Leading small-width forms of ``u``, ``v`` and ``D``.

    Uses ``A_j = sqrt(-h_j) l_j`` (energy dropped inside the layers). The
    ``alpha_j = (l_j/A_j) cot A_j`` form is multiplied through by
    ``cos A_j / alpha_j = -h_j l_j sin(A_j)/A_j`` so every factor is entire in
    ``A_j²``; layers at ``sin A_j = 0`` or ``h_j = 0`` need no special case.
    """
    if not (math.isfinite(E) and E > 0):
        raise DomainError(f"energy must be positive, got {E!r}")
    dl = _as_double_layer(system)
    k = math.sqrt(E)
    L1, L2 = dl.layer1, dl.layer2
    c1, s1 = cos_sinc(-L1.h * L1.l * L1.l)
    c2, s2 = cos_sinc(-L2.h * L2.l * L2.l)
    g1 = -L1.h * L1.l * s1  # cos(A1) / alpha_1
    g2 = -L2.h * L2.l * s2
    C, S = math.cos(k * dl.r), math.sin(k * dl.r)

    cross = c1 * g2 + c2 * g1  # (alpha1 + alpha2) g1 g2
    u = (L1.l * s1 * g2 - L2.l * s2 * g1) * C + (c1 * g2 - c2 * g1) * S / k
    v = -(cross * C - g1 * g2 * S / k) / k
    d = complex(
        (2 * c1 * c2 - L1.l * s1 * g2 - L2.l * s2 * g1) * C - cross * S / k,
        (g1 * g2 * S / k - cross * C) / k,
    )
    return float(u), float(v), d


def _squared_real(A) -> float:
    A = complex(A)
    sq = A * A
    if abs(sq.imag) > 1e-12 * max(1.0, abs(sq)):
        raise DomainError(f"A must be real or purely imaginary, got {A!r}")
    return sq.real


def theta_limit(A1, A2, l1: float, l2: float) -> float:
    """Limiting amplitude ratio ``-(A1 l2 sin A1) / (A2 l1 sin A2)``."""
    x1, x2 = _squared_real(A1), _squared_real(A2)
    _, s1 = cos_sinc(x1)
    _, s2 = cos_sinc(x2)
    den = x2 * s2 * l1  # A2 sin A2 l1
    if den == 0 or (x2 != 0 and abs(s2) < 1e-15):
        raise PoleError("sin A2 = 0")
    return -(l2 * x1 * s1) / den
