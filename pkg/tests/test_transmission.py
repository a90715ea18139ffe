import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from pscatter import (
    DomainError,
    PoleError,
    SqueezeParametrization,
    UnsupportedRegion,
    convergence_study,
    double_layer_exact,
    enumerate_resonances,
    theta_squared,
    transmission_limit,
    transmission_vertex_c0,
)
from pscatter.transmission import theta_squared_from_layers, transmission_from_theta_sq

# 1 - tanh^4 at the first vertex root, 30-digit reference
T_VERTEX_FIRST = 0.003103214871554285120
ROOT_CASES = [("P", 1.0, 0.0), ("P", 2.0, 0.5), ("N", 2.0, 0.0), ("K", 2.0, 1.0),
              ("K", 1.0, 0.0), ("L", 1.0, 1.0), ("X", 1.0, 0.0), ("Y", 1.0, 0.0)]


def first_root(Q, eta, c):
    return enumerate_resonances(Q, eta, c, 2).by_index(1).gamma


def test_rows_at_zero_gamma():
    for Q, eta, c in ROOT_CASES:
        assert theta_squared(Q, eta, c, 0.0) == pytest.approx(1.0)
    assert transmission_limit("X", 1.0, 0.0, 0.0).T_limit == 1.0


def test_row_values():
    # P row at eta = 1, c = 0 collapses to cosh 2 chi
    chi = math.sqrt(3.0)
    assert theta_squared("P", 1.0, 0.0, 3.0) == pytest.approx(math.cosh(2 * chi), rel=1e-14)
    assert theta_squared("K", 2.0, 1.0, 4.0) == pytest.approx((1 + 2.0) ** 2 + 4.0)
    assert theta_squared("X", 5.0, 1.0, 4.0) == 9.0
    assert theta_squared("Y", 5.0, 1.0, -1.0) == pytest.approx(1 / 3)


def test_row_errors():
    with pytest.raises(PoleError):
        theta_squared("Y", 1.0, 0.0, 0.5)
    with pytest.raises(UnsupportedRegion):
        theta_squared("Z", 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        transmission_limit("Y", 1.0, 0.0, 2.0)  # theta² < 0


def test_formula_check_is_tagged():
    res = transmission_limit("X", 1.0, 0.0, 4.0)
    assert (res.theta_sq, res.T_limit) == (9.0, pytest.approx(0.36, rel=1e-15))
    assert not res.resonant and res.note == "formula check only"
    on = transmission_limit("X", 1.0, 0.0, first_root("X", 1.0, 0.0), n=1)
    assert on.resonant and on.note == "resonance"


def test_unit_theta_gives_full_transmission():
    assert transmission_from_theta_sq(1.0) == 1.0


@given(st.floats(1e-8, 1e8))
def test_inversion_symmetry(th2):
    assert transmission_from_theta_sq(th2) == pytest.approx(transmission_from_theta_sq(1 / th2), rel=1e-12)


@given(st.floats(1e-4, 1e4))
def test_d_identity_from_theta(theta):
    u, d = theta - 1 / theta, theta + 1 / theta
    assert 4 + u * u == pytest.approx(d * d, rel=1e-14)


def test_limit_in_unit_interval():
    for Q, eta, c in ROOT_CASES:
        for root in enumerate_resonances(Q, eta, c, 6).roots:
            T = transmission_limit(Q, eta, c, root.gamma).T_limit
            assert 0 < T <= 1


# ---------------------------------------------------------------- vertex form


def test_vertex_closed_form():
    assert transmission_vertex_c0(2.0, 0.0) == 1.0
    for gamma in (0.5, 3.0, -2.0):
        t2 = math.tanh(math.sqrt(gamma)) ** 2 if gamma > 0 else -math.tan(math.sqrt(-gamma)) ** 2
        assert transmission_vertex_c0(1.0, gamma) == pytest.approx(1 - t2 * t2, rel=1e-14)


def test_vertex_first_root_value():
    g = first_root("P", 1.0, 0.0)
    assert transmission_vertex_c0(1.0, g) == pytest.approx(T_VERTEX_FIRST, rel=1e-12)
    assert transmission_limit("P", 1.0, 0.0, g).T_limit == pytest.approx(T_VERTEX_FIRST, rel=1e-12)


@pytest.mark.parametrize("eta", [0.3, 1.0, 2.5])
def test_vertex_form_matches_rows(eta):
    for root in enumerate_resonances("P", eta, 0.0, 9).roots:
        row = transmission_limit("P", eta, 0.0, root.gamma).T_limit
        assert abs(transmission_vertex_c0(eta, root.gamma) - row) < 1e-12


@pytest.mark.parametrize("Q, eta, c", ROOT_CASES)
def test_layers_theta_matches_row(Q, eta, c):
    for root in enumerate_resonances(Q, eta, c, 7).roots:
        row = theta_squared(Q, eta, c, root.gamma)
        layers = theta_squared_from_layers(Q, eta, c, root.gamma)
        # rows that cancel to a small theta² are compared absolutely
        assert abs(layers - row) <= 1e-10 * max(1.0, abs(row))


# ---------------------------------------------------------------- finite-eps sweeps


def test_vertex_sweep_converges():
    g = first_root("P", 1.0, 0.0)
    params = SqueezeParametrization(2, 2, 1, 1.0, 0.0, g)
    pts = convergence_study(params, [1e-3, 1e-4, 1e-5, 1e-6])
    diffs = [p.abs_diff for p in pts]
    assert diffs[-3] > diffs[-2] > diffs[-1]
    assert diffs[-1] / pts[-1].T_limit < 1e-2
    assert pts[-1].T_limit == pytest.approx(T_VERTEX_FIRST, rel=1e-12)


def test_vertex_sweep_off_resonance_is_opaque():
    rs = enumerate_resonances("P", 1.0, 0.0, 3)
    mid = 0.5 * (rs.by_index(0).gamma + rs.by_index(1).gamma)
    pts = convergence_study(SqueezeParametrization(2, 2, 1, 1.0, 0.0, mid), [1e-3, 1e-6])
    assert pts[-1].T_limit == 0.0
    assert pts[-1].T_exact < 1e-6


def test_zero_gamma_is_transparent():
    pts = convergence_study(SqueezeParametrization(2, 2, 1, 1.0, 0.0, 0.0), [1e-2, 1e-4])
    assert all(p.T_exact == 1.0 and p.abs_diff == 0.0 for p in pts)


def test_edge_n_sweep_converges():
    params = SqueezeParametrization(2, 2, 2, 2.0, 0.0, first_root("N", 2.0, 0.0))
    diffs = [p.abs_diff for p in convergence_study(params, [1e-2, 1e-3, 1e-4])]
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[-1] < 1e-6


def test_finite_eps_peak_approaches_limit_on_plane_x():
    # away from the vertex, T at the fixed limiting root settles at a different
    # value; the finite-eps peak drifts onto gamma_n and its height tends to T_limit
    g = first_root("X", 1.0, 0.0)
    T_lim = transmission_limit("X", 1.0, 0.0, g).T_limit

    def T(gamma, eps):
        system = SqueezeParametrization(1.5, 1, 1, 1.0, 0.0, gamma).at(eps)
        return double_layer_exact(system.to_double_layer(), 1.0).transmittance

    peaks = []
    for eps in (1e-5, 1e-7):
        grid = g * (1 + np.linspace(-0.05, 0.05, 2001))
        i = int(np.argmax([T(x, eps) for x in grid]))
        res = minimize_scalar(lambda x: -T(x, eps), bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        peaks.append((res.x, -res.fun))
    assert abs(peaks[1][0] - g) < abs(peaks[0][0] - g)
    assert abs(peaks[1][1] - T_lim) < abs(peaks[0][1] - T_lim) < 0.02 * T_lim
    assert abs(T(g, 1e-7) - T_lim) > 0.5 * T_lim


def test_sweep_grid_validation():
    params = SqueezeParametrization(2, 2, 1, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        convergence_study(params, [])
    with pytest.raises(DomainError):
        convergence_study(params, [1e-4, 1e-3])
    with pytest.raises(DomainError):
        convergence_study(params, [1e-3, -1e-4])
