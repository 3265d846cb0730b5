import numpy as np
import pytest

from bivelocity.analysis.manufactured import (ManufacturedProfile, default_coefficients, manufactured_solution,
                                              order_study, profile_fields)
from bivelocity.state import Grid1D, TransportCoefficients

VARIANTS = ["NSF_BASELINE", "BIVELOCITY_REDUCED", "KLIMONTOVICH", "VOLUME_FULL"]


def test_forcing_hand_oracle(gas):
    # rest gas of unit density with a travelling temperature wave
    prof = ManufacturedProfile(rho_amp=0.0, u_amp=0.0, T_amp=0.1, v_amp=0.0)
    c = TransportCoefficients(mu=0.02, kappa_h=0.03)
    sol = manufactured_solution("NSF_BASELINE", c, gas, prof)
    x = np.linspace(0, 1, 17)
    t = 0.4
    ph = 4 * np.pi * x - 0.7 * t + 0.3
    src = sol.forcing(x, t)
    assert np.allclose(src[0], 0.0, atol=1e-14)
    assert np.allclose(src[1], -gas.R * 0.1 * 4 * np.pi * np.sin(ph), atol=1e-12)
    energy = gas.c_v * 0.1 * 0.7 * np.sin(ph) + c.kappa_h * 0.1 * (4 * np.pi) ** 2 * np.cos(ph)
    assert np.allclose(src[2], energy, atol=1e-12)


def test_exact_state_matches_profile(gas):
    sol = manufactured_solution("VOLUME_FULL", default_coefficients(), gas)
    g = Grid1D(32, 1.0)
    s = sol.state(g, 0.3)
    rho, u, T, ratio = profile_fields(sol.profile, g.x, 0.3)
    # the profile density is M A_n; rho_bar = 1/v_bar departs from it by the ratio field
    assert np.allclose(gas.M * s.a_n, rho)
    assert np.allclose(s.u_m, u)
    assert np.allclose(s.e_in / gas.c_v, T)
    assert np.allclose(s.a_n * s.v_bar, ratio)


@pytest.mark.parametrize("variant", VARIANTS)
def test_rhs_consistency_order(variant, gas):
    st = order_study(variant, default_coefficients(), gas, kind="rhs")
    assert st.order == pytest.approx(2.0, abs=0.2)


@pytest.mark.parametrize("variant", VARIANTS)
def test_solver_order(variant, gas):
    st = order_study(variant, default_coefficients(), gas)
    assert st.order == pytest.approx(2.0, abs=0.2)
    assert st.errors[-1] < 1e-3
