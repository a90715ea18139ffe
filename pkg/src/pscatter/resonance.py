"""Resonance sets: values of the intensity gamma at which the squeezed
barrier-well structure transmits.

Each surface set has its own transcendental equation in gamma. For negative
gamma the square roots turn imaginary and the equations are continued through
``tan(ix) = i tanh(x)`` and ``cot(ix) = -i coth(x)``; all residuals below are
written directly in that real form, so they are real on both half-axes.

Roots are located by scanning the argument of the trigonometric term, whose
poles are known in closed form, and refined by plain bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._entire import cos_sinc
from .errors import DomainError, PoleError, UnsupportedRegion
from .squeeze import RegionLabel, zeta

ROOT_RTOL = 1e-13
RESIDUAL_TOL = 1e-12


def cot_over(A, l):
    """``(l/A) cot A`` for real or imaginary ``A``, via ``A²``."""
    A = complex(A)
    x = (A * A).real
    c, s = cos_sinc(x)
    den = x * s  # A sin A
    if den == 0 or (x != 0 and abs(s) < 1e-15):
        raise PoleError(f"cot pole at A = {A!r}")
    return l * c / den


def general_resonance_residual(A1, A2, l1: float, l2: float, r: float) -> float:
    """``r - (l1/A1) cot A1 - (l2/A2) cot A2``; zero on resonance."""
    return r - cot_over(A1, l1) - cot_over(A2, l2)


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    reason: str


_KINDS = ("barrier", "well")


def feasibility(kind1: str, kind2: str) -> FeasibilityVerdict:
    """Whether a squeezed pair of the given layer kinds can resonate at all."""
    for kind in (kind1, kind2):
        if kind not in _KINDS:
            raise DomainError(f"layer kind must be 'barrier' or 'well', got {kind!r}")
    if kind1 == kind2 == "barrier":
        return FeasibilityVerdict(
            False,
            "both cot terms become -(l/A)coth(A) < 0, so the condition would "
            "need a negative gap r; squeezing two barriers never resonates",
        )
    return FeasibilityVerdict(
        True,
        "a well contributes (l/A)cot(A), which takes every real value, so the "
        "condition has countably many solutions",
    )


# ---------------------------------------------------------------------------
# region equations
#
# For each (region, sign of gamma) we describe the equation through its
# natural variable y (the argument of tan or cot), the map y -> gamma, the
# residual as a function of y, and the pole lattice of y ("cot": n*pi,
# "tan": (n + 1/2)*pi).


class _Branch(NamedTuple):
    poles: str
    gamma_of_y: object
    residual_of_y: object


def _branch(Q: RegionLabel, eta: float, c: float, sign: int) -> _Branch | None:
    se = math.sqrt(eta)
    z = zeta(Q, eta, c)

    if Q is RegionLabel.P:
        # sqrt(eta) cot(sqrt(eta) b) = coth b + c b, b = sqrt(2 gamma/zeta)
        if sign > 0:
            return _Branch(
                "cot",
                lambda y: z * y * y / (2 * eta),
                lambda y: se / math.tan(y) - 1 / math.tanh(y / se) - c * y / se,
            )
        # continued: cot b = sqrt(eta) coth(sqrt(eta) b) + c b
        return _Branch(
            "cot",
            lambda y: -z * y * y / 2,
            lambda y: 1 / math.tan(y) - se / math.tanh(se * y) - c * y,
        )
    if Q is RegionLabel.N:
        # tan(sqrt(eta) b) = sqrt(eta) tanh b, b = sqrt(2 gamma/(1+eta))
        if sign > 0:
            return _Branch(
                "tan",
                lambda y: z * y * y / (2 * eta),
                lambda y: math.tan(y) - se * math.tanh(y / se),
            )
        return _Branch(
            "tan",
            lambda y: -z * y * y / 2,
            lambda y: math.tanh(se * y) - se * math.tan(y),
        )
    if Q is RegionLabel.K:
        # sqrt(eta) cot(sqrt(eta) b) = 1/b + c b
        if sign > 0:
            return _Branch(
                "cot",
                lambda y: z * y * y / (2 * eta),
                lambda y: se / math.tan(y) - se / y - c * y / se,
            )
        return None
    if Q is RegionLabel.L:
        # coth b = 1/b - c b  ->  cot b = 1/b + c b for gamma < 0
        if sign < 0:
            return _Branch(
                "cot",
                lambda y: -z * y * y / 2,
                lambda y: 1 / math.tan(y) - 1 / y - c * y,
            )
        return None
    if Q is RegionLabel.X:
        if sign > 0:
            return _Branch("tan", lambda y: y * y / 2, lambda y: math.tan(y) - y)
        return None
    if Q is RegionLabel.Y:
        if sign < 0:
            return _Branch("tan", lambda y: -y * y / 2, lambda y: math.tan(y) - y)
        return None
    raise UnsupportedRegion(f"no resonance equation on {Q.value}")


def _natural_variable(Q: RegionLabel, eta: float, c: float, gamma: float) -> float:
    z = zeta(Q, eta, c)
    if Q in (RegionLabel.X, RegionLabel.Y):
        return math.sqrt(2 * abs(gamma))
    b = math.sqrt(2 * abs(gamma) / z)
    if gamma > 0 and Q in (RegionLabel.P, RegionLabel.N, RegionLabel.K):
        return math.sqrt(eta) * b
    return b


def _other_branch_residual(Q, eta, c, gamma):
    # half-axis that carries no roots; residual still defined and real
    z = zeta(Q, eta, c)
    se = math.sqrt(eta)
    if Q is RegionLabel.K:
        b = math.sqrt(2 * abs(gamma) / z)
        return se / math.tanh(se * b) - 1 / b + c * b
    if Q is RegionLabel.L:
        b = math.sqrt(2 * gamma / z)
        return 1 / math.tanh(b) - 1 / b + c * b
    y = math.sqrt(2 * abs(gamma))
    return math.tanh(y) - y


def region_resonance_residual(Q, eta: float, c: float, gamma: float) -> float:
    """Left-minus-right residual of the resonance equation of set ``Q``.

    ``gamma = 0`` is a root of every equation (the limit of the residual).
    """
    Q = RegionLabel.parse(Q)
    if Q in (RegionLabel.Z, RegionLabel.OFF_SURFACE):
        raise UnsupportedRegion(f"no resonance equation on {Q.value}")
    if not math.isfinite(gamma):
        raise DomainError("gamma must be finite")
    if gamma == 0:
        return 0.0
    sign = 1 if gamma > 0 else -1
    branch = _branch(Q, eta, c, sign)
    if branch is None:
        return _other_branch_residual(Q, eta, c, gamma)
    y = _natural_variable(Q, eta, c, gamma)
    pole = y / math.pi if branch.poles == "cot" else y / math.pi - 0.5
    if abs(pole - round(pole)) < 1e-15 * max(1.0, y):
        raise PoleError(f"gamma = {gamma!r} sits on a pole of the {Q.value} equation")
    return branch.residual_of_y(y)


# ---------------------------------------------------------------------------
# root enumeration


class Root(NamedTuple):
    n: int
    gamma: float
    bracket: tuple[float, float]
    residual: float


@dataclass(frozen=True)
class ResonanceSet:
    region: RegionLabel
    eta: float
    c: float
    roots: tuple
    requested: int
    partial: bool = False

    @property
    def gammas(self) -> list[float]:
        return [root.gamma for root in self.roots]

    def by_index(self, n: int) -> Root:
        for root in self.roots:
            if root.n == n:
                return root
        raise KeyError(n)


def bisect(f, lo: float, hi: float, rtol: float = ROOT_RTOL, maxiter: int = 400):
    """Bisection on a sign-changing bracket; returns ``(x, f(x))``.

    Runs until the bracket is below ``rtol`` relative width, then keeps
    halving down to adjacent floats so the best representable point is
    returned.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, flo
    if fhi == 0:
        return hi, fhi
    if (flo > 0) == (fhi > 0):
        raise DomainError("bracket does not change sign")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0:
            return mid, fmid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if hi - lo > rtol * max(abs(lo), abs(hi)):
        raise DomainError("bisection did not converge")
    return (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)


def _pole_intervals(kind: str):
    n = 0
    if kind == "cot":
        while True:
            yield n * math.pi, (n + 1) * math.pi
            n += 1
    first = 0.5 * math.pi
    yield 0.0, first
    while True:
        yield first + n * math.pi, first + (n + 1) * math.pi
        n += 1


def _scan_nodes(a: float, b: float, count: int) -> np.ndarray:
    # cosine-spaced interior nodes: dense near the poles at both ends
    s = (np.arange(1, count + 1) - 0.5) / count
    return a + (b - a) * 0.5 * (1.0 - np.cos(np.pi * s))


def _half_axis_roots(Q, eta, c, sign, want, points_per_interval, max_intervals):
    branch = _branch(Q, eta, c, sign)
    if branch is None:
        return [], True

    def f_gamma(g):
        return region_resonance_residual(Q, eta, c, g)

    found = []
    for i, (a, b) in enumerate(_pole_intervals(branch.poles)):
        if len(found) >= want:
            return found, True
        if i >= max_intervals:
            return found, False
        ys = _scan_nodes(a, b, points_per_interval).tolist()
        gs = [branch.gamma_of_y(y) for y in ys]
        fs = [f_gamma(g) for g in gs]
        for j in range(len(ys) - 1):
            if (fs[j] > 0) != (fs[j + 1] > 0) or fs[j + 1] == 0:
                lo, hi = sorted((gs[j], gs[j + 1]))
                g, res = bisect(f_gamma, lo, hi)
                found.append((g, (lo, hi), res))
                if len(found) >= want:
                    break
    return found, True


def enumerate_resonances(
    Q,
    eta: float,
    c: float,
    n_max: int,
    points_per_interval: int = 1000,
    max_intervals: int | None = None,
) -> ResonanceSet:
    """The ``n_max`` roots of smallest ``|gamma|``, trivial ``gamma = 0`` included.

    Indexing: on ``K, X`` roots are ``n = 0, 1, ...`` upward from 0; on
    ``L, Y`` the same counting runs down the negative axis; on ``P, N`` the
    index runs over the integers in increasing ``gamma`` with ``n = 0`` at
    ``gamma = 0``.

    If the scan budget (``max_intervals`` pole-free intervals per half-axis)
    runs out first, the result is returned with ``partial=True``.
    """
    Q = RegionLabel.parse(Q)
    if Q in (RegionLabel.Z, RegionLabel.OFF_SURFACE):
        raise UnsupportedRegion(f"no resonance equation on {Q.value}")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if max_intervals is None:
        max_intervals = 2 * n_max + 10

    zero = (0.0, (0.0, 0.0), 0.0)
    want = n_max - 1
    pos, ok_pos = _half_axis_roots(Q, eta, c, +1, want, points_per_interval, max_intervals)
    neg, ok_neg = _half_axis_roots(Q, eta, c, -1, want, points_per_interval, max_intervals)

    candidates = sorted([zero] + pos + neg, key=lambda item: abs(item[0]))
    chosen = sorted(candidates[:n_max], key=lambda item: item[0])
    partial = len(chosen) < n_max or not (ok_pos and ok_neg)

    origin = next(i for i, item in enumerate(chosen) if item[0] == 0.0)
    if Q in (RegionLabel.L, RegionLabel.Y):
        indices = [origin - i for i in range(len(chosen))]
    else:
        indices = [i - origin for i in range(len(chosen))]
    roots = tuple(
        Root(n, g, bracket, res) for n, (g, bracket, res) in zip(indices, chosen)
    )
    return ResonanceSet(Q, eta, c, roots, n_max, partial)
