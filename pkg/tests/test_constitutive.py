import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bivelocity.constitutive import (compute_fluxes, entropic_heat_flux, shear_stress, shear_stress_tensor,
                                     volume_flux, volume_flux_from_volume, volume_production,
                                     volume_production_terms)
from bivelocity.state import FlowState, GasModel, Grid1D, TransportCoefficients, ValidationError


def _state(grid, gas):
    x = grid.x
    rho = 1 + 0.2 * np.sin(2 * np.pi * x)
    return FlowState.from_density(rho, 0.1 * np.cos(2 * np.pi * x), gas.c_v * (1 + 0.1 * np.cos(4 * np.pi * x)), gas)


def test_volume_flux_matches_log_gradient(gas):
    c = TransportCoefficients(kappa_m=0.05)
    errs = []
    for n in (32, 64, 128):
        g = Grid1D(n, 1.0)
        x = g.x
        exact = 0.05 * 0.4 * np.pi * np.cos(2 * np.pi * x) / (1 + 0.2 * np.sin(2 * np.pi * x))
        errs.append(np.max(np.abs(volume_flux(_state(g, gas), c, g, gas) - exact)))
    assert np.log2(errs[1] / errs[2]) == pytest.approx(2, abs=0.1)


def test_volume_flux_forms_agree(gas):
    c = TransportCoefficients(kappa_m=0.05)
    d = []
    for n in (64, 128):
        g = Grid1D(n, 1.0)
        s = _state(g, gas)
        d.append(np.max(np.abs(volume_flux(s, c, g, gas) - volume_flux_from_volume(s, c, g))))
    assert d[1] < d[0] / 3.5


def test_zero_kappa_m_gives_zero_flux(gas, grid):
    s = _state(grid, gas)
    assert not np.any(volume_flux(s, TransportCoefficients(), grid, gas))


def test_shear_stress_1d_is_four_thirds(grid):
    c = TransportCoefficients(mu=0.3)
    u = np.sin(2 * np.pi * grid.x)
    from bivelocity.stencils import ODD, ddx
    assert np.allclose(shear_stress(u, c, grid), -4 / 3 * 0.3 * ddx(u, grid, ODD))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=9, max_size=9), st.floats(0.0, 3.0))
def test_shear_tensor_symmetric_tracefree_dissipative(entries, mu):
    g = np.array(entries).reshape(3, 3)
    pi = shear_stress_tensor(g, mu)
    assert np.allclose(pi, pi.T)
    assert abs(np.trace(pi)) < 1e-12 * (1 + np.abs(g).sum() * mu)
    assert -np.sum(pi * g) >= -1e-12 * (1 + mu * np.sum(g**2))


def test_rotation_gradient_is_stress_free():
    g = np.array([[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    assert np.all(shear_stress_tensor(g, 1.3) == 0.0)


def test_entropic_heat_flux_removes_enthalpy_part(gas, grid):
    s = _state(grid, gas)
    c = TransportCoefficients(kappa_h=0.02, kappa_m=0.05)
    fl = compute_fluxes(s, c, gas, grid)
    from bivelocity.stencils import ddx
    rho = s.rho_bar(gas)
    assert np.allclose(fl.q_s, -(0.02 / rho) * ddx(s.temperature(gas), grid))
    assert np.allclose(entropic_heat_flux(s, fl.q_prime, fl.j, gas), fl.q_s)
    assert np.allclose(fl.u_v, s.u_m + fl.j)
    assert np.allclose(fl.pi_v, fl.pi_um + fl.pi_jv)


def test_production_vanishes_without_volume_diffusion(gas, grid):
    s = _state(grid, gas)
    fl = compute_fluxes(s, TransportCoefficients(mu=0.1, kappa_h=0.1), gas, grid)
    assert not np.any(fl.w)


def test_production_zero_on_uniform_state(gas, grid):
    s = FlowState.from_density(np.full(64, 1.3), np.full(64, 0.2), np.full(64, 2.0), gas)
    fl = compute_fluxes(s, TransportCoefficients(mu=0.1, kappa_h=0.1, kappa_m=0.1), gas, grid)
    assert np.allclose(fl.w, 0.0)


def test_production_is_term_sum_over_pressure(gas, grid):
    s = _state(grid, gas).copy_with(v_bar=_state(grid, gas).v_bar * (1 + 0.05 * np.cos(2 * np.pi * grid.x)))
    c = TransportCoefficients(mu=0.1, kappa_h=0.1, kappa_m=0.1)
    fl = compute_fluxes(s, c, gas, grid)
    terms = volume_production_terms(s, fl, gas, grid)
    assert len(terms) == 6
    p = s.pressure(gas)
    assert np.allclose(fl.w * p * s.a_n / gas.M, sum(terms.values()))


def test_production_requires_positive_pressure(gas, grid):
    s = _state(grid, gas)
    c = TransportCoefficients(kappa_m=0.1)
    fl = compute_fluxes(s, c, gas, grid, with_w=False)
    bad = FlowState.__new__(FlowState)
    for name in ("a_n", "v_bar", "u_m"):
        object.__setattr__(bad, name, getattr(s, name))
    e = s.e_in.copy()
    e[3] = 0.0
    object.__setattr__(bad, "e_in", e)
    with pytest.raises(ValidationError):
        volume_production(bad, fl, c, gas, grid)
