import numpy as np
import pytest

from bivelocity.analysis.rotation import (FieldSpecError, PrescribedField, evaluate_prescribed,
                                          rigid_rotation_field, rotation_kn_sweep)
from bivelocity.analysis.knudsen import loglog_slope
from bivelocity.state import GasModel, TransportCoefficients

KN = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]


def _grid(n=9):
    s = np.linspace(-0.8, 0.8, n)
    return np.meshgrid(s, s, indexing="ij")


def test_rigid_rotation_closed_form():
    gas = GasModel(M=2.0, R=1.5)
    c = TransportCoefficients(mu=0.2, kappa_h=0.3, kappa_m=0.1)
    om, T = 0.7, 1.3
    x, y = _grid()
    ev = evaluate_prescribed(rigid_rotation_field(om, T, gas), c, gas, x, y)
    assert np.all(ev["pi_um"] == 0.0)
    assert np.all(ev["q_s"] == 0.0)
    a = c.kappa_m * om**2 / (gas.R * T)
    assert np.allclose(ev["terms"]["jv_jv"], 4 / 3 * c.mu * a**2 / gas.M)
    assert np.allclose(ev["terms"]["nsf_shear"], 0.0)
    assert np.allclose(ev["j"][0], a * x)


def test_pressure_balance_of_profile():
    # isothermal centrifugal balance: R T grad(rho) = rho Omega^2 X
    gas = GasModel()
    f = rigid_rotation_field(0.9, 1.1, gas)
    x, y = _grid()
    g = f.grad_rho(x, y)
    r = f.rho(x, y)
    assert np.allclose(gas.R * 1.1 * g[0], r * 0.81 * x)
    assert np.allclose(gas.R * 1.1 * g[1], r * 0.81 * y)


def test_finite_difference_fallback_agrees():
    gas = GasModel()
    c = TransportCoefficients(mu=0.1, kappa_h=0.2, kappa_m=0.05)
    exact = rigid_rotation_field(0.6, 1.0, gas)
    fd = PrescribedField(exact.rho, exact.velocity, exact.temperature, fd_step=1e-3)
    x, y = _grid(5)
    a = evaluate_prescribed(exact, c, gas, x, y)["terms"]
    b = evaluate_prescribed(fd, c, gas, x, y)["terms"]
    for k in a:
        assert np.allclose(a[k], b[k], rtol=1e-5, atol=1e-9)


def test_general_field_has_nsf_production():
    gas = GasModel()
    c = TransportCoefficients(mu=0.1, kappa_h=0.2, kappa_m=0.05)
    f = PrescribedField(lambda x, y: 1 + 0.1 * np.sin(x) * np.cos(y),
                        lambda x, y: np.stack([np.sin(y), 0.5 * x**2]),
                        lambda x, y: 1 + 0.1 * x * y)
    ev = evaluate_prescribed(f, c, gas, *_grid(5))
    assert np.all(ev["terms"]["nsf_shear"] >= -1e-14)
    assert np.max(ev["terms"]["nsf_shear"]) > 0
    assert np.allclose(np.trace(ev["pi_v"], axis1=-2, axis2=-1), 0.0, atol=1e-12)


def test_missing_field_rejected():
    with pytest.raises(FieldSpecError):
        evaluate_prescribed(PrescribedField(None, None, None), TransportCoefficients(), GasModel(), 0.0, 0.0)


def test_rotation_sweep_slope_three():
    pts = rotation_kn_sweep(KN, GasModel())
    assert all(p["pi_um_inf"] < 1e-12 * p["pi_um_bound"] for p in pts)
    assert all(p["q_s_inf_scaled"] < 1e-12 for p in pts)
    assert all(p["jv_jv_min"] > 0 for p in pts)
    assert loglog_slope(KN, [p["jv_jv_nondim"] for p in pts]) == pytest.approx(3.0, abs=0.15)
