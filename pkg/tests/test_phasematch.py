import math

import numpy as np
import pytest
from scipy.constants import epsilon_0

from conftest import K0, OMEGA_S, make_crystal
from finitespdc.crystal import slope_coefficients
from finitespdc.errors import EvanescentMode, NoPhaseMatch
from finitespdc.modes import box_integral, build_internal_mode
from finitespdc.phasematch import (
    DegenerateGeometry,
    degenerate_mismatch,
    matrix_element,
    mismatch_residual,
    parity_coefficient,
    solve_degenerate_kyd,
)
from finitespdc.state import PumpBeam
from oracles import degenerate_kyd_scan


def degenerate_modes(geometry, crystal, parity_o="even", parity_e="even"):
    mo = build_internal_mode("o", 0.0, geometry.k_yd, OMEGA_S, parity_o, crystal)
    me = build_internal_mode("e", 0.0, geometry.k_yd, OMEGA_S, parity_e, crystal)
    return mo, me


def pump_for(geometry, k_p=None):
    return PumpBeam("plane", 2 * OMEGA_S, geometry.k_p if k_p is None else k_p)


class TestParity:
    @pytest.mark.parametrize(
        "po,pe,want", [("even", "even", 1), ("even", "odd", 0), ("odd", "even", 0), ("odd", "odd", 1)]
    )
    def test_table(self, crystal, geometry, po, pe, want):
        assert parity_coefficient(*degenerate_modes(geometry, crystal, po, pe)) == want


class TestMatrixElement:
    def test_matched_component_contributes_volume(self, crystal, geometry):
        mo, me = degenerate_modes(geometry, crystal)
        q = np.array([0, 0, geometry.k_p]) - mo.wave_vectors[0] - me.wave_vectors[3]
        assert box_integral(q, crystal.lengths) == pytest.approx(crystal.volume, rel=1e-9)

    def test_z_detuning_by_one_sinc_zero(self, crystal, geometry):
        mo, me = degenerate_modes(geometry, crystal)
        matched = abs(matrix_element(pump_for(geometry), mo, me, crystal))
        detuned = abs(matrix_element(pump_for(geometry, geometry.k_p + 2 * math.pi / crystal.L_z), mo, me, crystal))
        assert detuned < 1e-12 * matched

    @pytest.mark.parametrize("po,pe", [("even", "odd"), ("odd", "even")])
    def test_mixed_parity_suppressed(self, crystal, geometry, po, pe):
        pump = pump_for(geometry)
        matched = abs(matrix_element(pump, *degenerate_modes(geometry, crystal, po, po), crystal))
        mixed = abs(matrix_element(pump, *degenerate_modes(geometry, crystal, po, pe), crystal))
        assert matched > 0
        assert mixed < 1e-3 * matched

    def test_linear_in_chi(self, geometry):
        one, two = make_crystal(), make_crystal(chi_eff=2.0)
        pump = pump_for(geometry)
        m1 = matrix_element(pump, *degenerate_modes(geometry, one), one)
        m2 = matrix_element(pump, *degenerate_modes(geometry, two), two)
        assert m2 == pytest.approx(2 * m1, rel=1e-14)

    def test_tensor_matches_scalar_for_x_pump(self, geometry):
        # chi[x, j, h] = 1: an x-polarized pump sees (sum of e_o)(sum of e_e)
        chi = np.zeros((3, 3, 3))
        chi[0] = 1.0
        tensor = make_crystal(chi_eff=chi)
        mo, me = degenerate_modes(geometry, tensor)
        pump = pump_for(geometry)
        brute = 0j
        for co in mo.components:
            for ce in me.components:
                contraction = co.pol.sum() * ce.pol.sum()
                brute += contraction * box_integral(
                    np.array([0, 0, pump.k_p]) - co.k - ce.k, tensor.lengths
                ) * np.exp(-1j * (co.phase + ce.phase))
        want = 2 * epsilon_0 * mo.norm_const * me.norm_const * brute
        assert matrix_element(pump, mo, me, tensor) == pytest.approx(want, rel=1e-9)


class TestMismatch:
    def test_solved_pair(self, crystal, geometry):
        mo, me = degenerate_modes(geometry, crystal)
        assert mismatch_residual(mo, me, geometry.k_p) < 1e-10 * geometry.k_p

    def test_linear_detuning_slope(self, crystal, geometry):
        s = slope_coefficients(geometry.k_yd, OMEGA_S, crystal)
        slopes = []
        for delta in (1e-6 * K0, 2e-6 * K0):
            ky = geometry.k_yd + delta
            mo = build_internal_mode("o", 0.0, ky, OMEGA_S, "even", crystal)
            me = build_internal_mode("e", 0.0, ky, OMEGA_S, "even", crystal)
            slopes.append(mismatch_residual(mo, me, geometry.k_p) / delta)
        assert slopes[0] == pytest.approx(abs(s.a_oy + s.a_ey), rel=1e-4)
        assert slopes[1] == pytest.approx(slopes[0], rel=1e-4)

    def test_isotropic_collinear(self):
        iso = make_crystal(n_o=1.5, n_e=1.5, pump_index=1.5)
        assert degenerate_mismatch(0.0, OMEGA_S, iso) == 2 * 1.5 * K0


class TestSolver:
    def test_isotropic_control_exact_zero(self):
        iso = make_crystal(n_o=1.5, n_e=1.5, pump_index=1.5)
        assert solve_degenerate_kyd(2 * OMEGA_S, iso).k_yd == 0.0

    @pytest.mark.parametrize("pump_index", [1.62, 1.6, 1.58])
    def test_against_scan_oracle(self, pump_index):
        cr = make_crystal(pump_index=pump_index)
        g = solve_degenerate_kyd(2 * OMEGA_S, cr)
        assert g.k_yd > 0
        assert abs(degenerate_mismatch(g.k_yd, OMEGA_S, cr) - g.k_p) < 1e-12 * g.k_p
        want = degenerate_kyd_scan(K0, g.k_p, 1.66, 1.55, 0.7)
        assert abs(g.k_yd - want) < 1e-10 * K0

    def test_slightly_below_collinear(self):
        iso = make_crystal(n_o=1.5, n_e=1.5, pump_index=1.5 - 1e-4)
        g = solve_degenerate_kyd(2 * OMEGA_S, iso)
        assert g.k_yd > 0
        assert abs(g.k_yd - degenerate_kyd_scan(K0, g.k_p, 1.5, 1.5, 0.7)) < 1e-10 * K0

    def test_no_phase_match(self):
        with pytest.raises(NoPhaseMatch, match="no phase match in bracket"):
            solve_degenerate_kyd(2 * OMEGA_S, make_crystal(pump_index=2.0))

    def test_geometry_invariants(self, geometry):
        assert np.linalg.norm(geometry.k_s) == pytest.approx(K0, rel=1e-15)
        assert np.linalg.norm(geometry.k_i) == pytest.approx(K0, rel=1e-15)
        kz = math.sqrt(K0**2 - geometry.k_yd**2)
        np.testing.assert_allclose(geometry.k_s + geometry.k_i, [0, 0, 2 * kz], rtol=1e-15)
        np.testing.assert_allclose(geometry.e_ys, [0, 1, -geometry.k_yd / K0])
        np.testing.assert_allclose(geometry.e_yi, [0, 1, geometry.k_yd / K0])
        assert geometry.epsilon == pytest.approx(geometry.k_yd / (math.tan(0.7) * 1.66 * K0), rel=1e-15)

    def test_totally_reflected_geometry(self, crystal):
        with pytest.raises(EvanescentMode):
            DegenerateGeometry.from_kyd(1.01 * K0, OMEGA_S, 3 * K0, crystal)
