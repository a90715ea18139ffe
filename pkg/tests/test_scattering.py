import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pscatter import (
    DomainError,
    DoubleLayerSystem,
    Layer,
    NumericError,
    PiecewisePotential,
    PoleError,
    ScatteringAmplitudes,
    compose_interference,
    double_layer_composed,
    double_layer_exact,
    double_layer_uvd,
    layer_scattering,
    oracle_scatter,
    transfer_matrix,
    wave_numbers,
)

heights = st.floats(-50, 50)
widths = st.floats(1e-3, 2.0)
gaps = st.floats(0.0, 2.0)
energies = st.floats(1e-3, 20.0)


def max_amp_diff(a, b):
    return max(abs(a.r_left - b.r_left), abs(a.r_right - b.r_right), abs(a.t - b.t))


def mirrored(system):
    """The same structure reflected through the origin."""
    L1, L2 = system.layer1, system.layer2
    return DoubleLayerSystem.from_params(L2.h, L2.l, L1.h, L1.l, system.r, x1=-L2.x_right)


# ---------------------------------------------------------------- transfer_matrix


def test_zero_thickness_is_identity():
    assert np.array_equal(transfer_matrix(Layer(7.0, 0.0), 1.3), np.eye(2))


def test_free_propagation_half_turn():
    m = transfer_matrix(Layer(0.0, math.pi), 1.0)
    assert np.allclose(m, [[-1, 0], [0, -1]], atol=1e-15)


def test_evanescent_entries_are_hyperbolic():
    m = transfer_matrix(Layer(2.0, 1.0), 1.0)
    c, s = math.cosh(1.0), math.sinh(1.0)
    assert np.allclose(m, [[c, s], [s, c]], rtol=1e-15)
    assert m[0, 0] == pytest.approx(1.5430806348152437, rel=1e-15)


def test_critical_energy_limit():
    m = transfer_matrix(Layer(1.7, 0.8), 1.7)
    assert np.allclose(m, [[1, 0.8], [0, 1]], rtol=0, atol=1e-15)


def test_entries_are_real():
    assert transfer_matrix(Layer(-30.0, 0.4), 2.0).dtype == np.float64


def test_transfer_matrix_rejects_nonfinite():
    with pytest.raises(DomainError):
        transfer_matrix(Layer(1.0, 1.0), math.nan)
    with pytest.raises(DomainError):
        Layer(math.inf, 1.0)


@settings(max_examples=300, deadline=None)
@given(h=st.floats(-1e3, 1e3), l=widths, E=energies)
def test_unimodular_relative_to_entry_size(h, l, E):
    # large |k l| makes cosh² - sinh² cancel; the error is relative to the entries
    m = transfer_matrix(Layer(h, l), E)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(1.0, abs(m[0, 0] * m[1, 1]), abs(m[0, 1] * m[1, 0]))
    assert abs(det - 1.0) <= 1e-14 * scale


def test_matrix_matches_direct_complex_formula():
    layer, E = Layer(5.0, 0.7), 2.0
    k = cmath.sqrt(E - layer.h)
    expected = np.array(
        [[cmath.cos(k * layer.l), cmath.sin(k * layer.l) / k],
         [-k * cmath.sin(k * layer.l), cmath.cos(k * layer.l)]]
    )
    assert np.allclose(transfer_matrix(layer, E), expected.real, rtol=1e-14)
    assert np.max(np.abs(expected.imag)) < 1e-15


def test_wave_numbers_branch():
    system = DoubleLayerSystem.from_params(3.0, 1.0, -1.0, 1.0, 0.5)
    wn = wave_numbers(system, 2.0)
    assert wn.k ** 2 == pytest.approx(2.0)
    assert wn.k1 ** 2 == pytest.approx(-1.0)
    assert wn.k1.imag > 0
    assert wn.k2 == pytest.approx(math.sqrt(3.0))


# ---------------------------------------------------------------- geometry


def test_layer_rejects_negative_width():
    with pytest.raises(DomainError):
        Layer(1.0, -0.1)


def test_system_geometry_checked():
    with pytest.raises(DomainError):
        DoubleLayerSystem(Layer(1.0, 1.0), Layer(1.0, 1.0, 1.5), 0.2)
    with pytest.raises(DomainError):
        DoubleLayerSystem.from_params(1.0, 1.0, 1.0, 1.0, -0.1)
    s = DoubleLayerSystem.from_params(1.0, 1.0, 2.0, 0.5, 0.25, x1=-1.0)
    assert (s.x_left, s.x_right) == (-1.0, 0.75)


# ---------------------------------------------------------------- single layer


def test_no_layer_is_transparent():
    amp = layer_scattering(Layer(0.0, 2.0), 1.5)
    assert abs(amp.r_left) == 0 and abs(amp.t) == pytest.approx(1.0)


def test_barrier_slab_transmission():
    # D = 2 cosh 1 at k = 1, k1 = i, so T = 1 / cosh² 1
    amp = layer_scattering(Layer(2.0, 1.0), 1.0)
    assert amp.transmittance == pytest.approx(0.41997434161402607, rel=1e-14)
    oracle = oracle_scatter(PiecewisePotential((0.0, 1.0), (2.0,)), 1.0, 10_000)
    assert max_amp_diff(amp, oracle) < 1e-8


def test_resonant_slab_reflectionless():
    amp = layer_scattering(Layer(-3.0, math.pi / 2), 1.0)
    assert abs(amp.r_left) < 1e-15
    assert abs(amp.t) == pytest.approx(1.0, abs=1e-15)


def test_layer_rejects_nonpositive_energy():
    with pytest.raises(DomainError):
        layer_scattering(Layer(1.0, 1.0), 0.0)


@settings(max_examples=200, deadline=None)
@given(h=heights, l=widths, x=st.floats(-3, 3), E=energies)
def test_single_layer_invariants(h, l, x, E):
    layer = Layer(h, l, x)
    amp = layer_scattering(layer, E)
    assert amp.u == 0.0
    m = transfer_matrix(layer, E)
    assert m[0, 0] - m[1, 1] == 0.0
    assert amp.flux == pytest.approx(1.0, abs=1e-12)
    assert abs(amp.r_left) == pytest.approx(abs(amp.r_right), abs=1e-12)
    assert abs(amp.r_left) ** 2 + abs(amp.t) ** 2 == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- composition


def test_compose_with_free_is_identity():
    s1 = layer_scattering(Layer(2.0, 1.0, 0.3), 1.0)
    out = compose_interference(s1, ScatteringAmplitudes.free(1.0))
    assert max_amp_diff(out, s1) < 1e-15


def test_two_identical_barriers_match_closed_form():
    system = DoubleLayerSystem.from_params(2.0, 1.0, 2.0, 1.0, 1.0)
    assert max_amp_diff(double_layer_composed(system, 1.0), double_layer_exact(system, 1.0)) < 1e-10


def test_half_mirrors_conserve_flux():
    # E = h gives u = 0, v = l h / k; l = 2, h = 1, E = 1 makes |R|² = |T|² = 1/2
    half = layer_scattering(Layer(1.0, 2.0), 1.0)
    assert half.reflectance == pytest.approx(0.5)
    other = layer_scattering(Layer(1.0, 2.0, 2.7), 1.0)
    out = compose_interference(half, other)
    assert out.flux == pytest.approx(1.0, abs=1e-14)


def test_compose_energy_mismatch():
    with pytest.raises(DomainError):
        compose_interference(ScatteringAmplitudes.free(1.0), ScatteringAmplitudes.free(2.0))


def test_compose_pole():
    mirror = ScatteringAmplitudes(1 + 0j, 1 + 0j, 0j, 1.0, 1.0, 0.0)
    with pytest.raises(PoleError):
        compose_interference(mirror, mirror)


@settings(max_examples=200, deadline=None)
@given(h1=heights, l1=widths, h2=heights, l2=widths, r=gaps, x1=st.floats(-2, 2), E=energies)
def test_composition_equals_closed_form(h1, l1, h2, l2, r, x1, E):
    system = DoubleLayerSystem.from_params(h1, l1, h2, l2, r, x1)
    exact = double_layer_exact(system, E)
    composed = double_layer_composed(system, E)
    assert max_amp_diff(exact, composed) < 1e-10
    assert composed.flux == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- closed form


def test_empty_double_layer():
    amp = double_layer_exact(DoubleLayerSystem.from_params(5.0, 0.0, -3.0, 0.0, 0.4), 2.0)
    assert (amp.u, amp.v, amp.transmittance) == (0.0, 0.0, 1.0)


def test_touching_equal_layers_merge():
    merged = layer_scattering(Layer(4.0, 1.1), 1.5)
    split = double_layer_exact(DoubleLayerSystem.from_params(4.0, 0.4, 4.0, 0.7, 0.0), 1.5)
    assert max_amp_diff(merged, split) < 1e-10


def test_barrier_well_against_fine_oracle():
    system = DoubleLayerSystem.from_params(10.0, 0.3, -10.0, 0.3, 0.2)
    exact = double_layer_exact(system, 1.0)
    oracle = oracle_scatter(PiecewisePotential.from_double_layer(system), 1.0, 100_000)
    assert abs(exact.transmittance - oracle.transmittance) < 1e-8
    assert exact.transmittance == pytest.approx(0.16926195480380, rel=1e-11)


@settings(max_examples=300, deadline=None)
@given(h1=heights, l1=widths, h2=heights, l2=widths, r=gaps, E=energies)
def test_d_identity(h1, l1, h2, l2, r, E):
    u, v, d = double_layer_uvd(DoubleLayerSystem.from_params(h1, l1, h2, l2, r), E)
    rhs = 4.0 + u * u + v * v
    assert abs(abs(d) ** 2 - rhs) <= 1e-10 * rhs


@settings(max_examples=100, deadline=None)
@given(h1=heights, l1=widths, h2=heights, l2=widths, r=gaps, x1=st.floats(-2, 2), E=energies)
def test_reciprocity_and_mirror_symmetry(h1, l1, h2, l2, r, x1, E):
    # the right-incidence amplitudes are the left ones of the mirrored structure
    system = DoubleLayerSystem.from_params(h1, l1, h2, l2, r, x1)
    a, b = double_layer_exact(system, E), double_layer_exact(mirrored(system), E)
    assert abs(a.t - b.t) < 1e-10
    assert abs(a.r_right - b.r_left) < 1e-10
    assert abs(a.r_left) == pytest.approx(abs(a.r_right), abs=1e-12)


def test_overflow_reported():
    with pytest.raises(NumericError):
        double_layer_exact(DoubleLayerSystem.from_params(1e300, 1.0, 0.0, 0.0, 0.0), 1.0)
