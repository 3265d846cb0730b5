import numpy as np
import pytest

from bivelocity.analysis.dispersion import (DispersionError, classical_attenuation, companion_roots,
                                            dispersion_polynomial, dispersion_relation, temporal_root)
from bivelocity.state import GasModel, TransportCoefficients

OMEGAS = [0.01, 0.5, 1.0, 2.0, 4.0, 8.0]


def nsf_matrix(k, w, rho0, T0, mu, kh, gas):
    """Linearised NSF plane-wave system written out directly, unknowns (rho', u', T')."""
    R, cv = gas.R, gas.c_v
    p0 = rho0 * R * T0
    return np.array([
        [-1j * w, 1j * k * rho0, 0],
        [1j * k * R * T0, -1j * w * rho0 + 4 / 3 * mu * k**2, 1j * k * R * rho0],
        [0, 1j * k * p0, -1j * w * rho0 * cv + kh * k**2],
    ])


def test_companion_roots_match_numpy():
    rng = np.random.default_rng(1)
    for _ in range(20):
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        a = np.sort_complex(companion_roots(c))
        b = np.sort_complex(np.roots(c[::-1]))
        assert np.allclose(a, b, atol=1e-9)


def test_companion_roots_trims_leading_zeros():
    assert np.allclose(np.sort(companion_roots([2.0, -3.0, 1.0, 0.0, 0.0]).real), [1.0, 2.0])


def test_zero_polynomial_raises():
    with pytest.raises(DispersionError):
        companion_roots([0.0, 0.0])


def test_nsf_roots_are_roots_of_direct_system(gas):
    c = TransportCoefficients(mu=0.01, kappa_h=0.015)
    for w in (0.3, 3.0):
        for k in companion_roots(dispersion_polynomial("NSF_BASELINE", w, 1.0, 1.0, c, gas)):
            m = nsf_matrix(k, w, 1.0, 1.0, c.mu, c.kappa_h, gas)
            scale = np.prod(np.linalg.norm(m, axis=1))
            assert abs(np.linalg.det(m)) < 1e-10 * scale


def test_low_frequency_speed_and_attenuation(gas):
    c = TransportCoefficients(mu=1e-3, kappa_h=1.5e-3)
    res = dispersion_relation("NSF_BASELINE", 1.0, 1.0, c, gas, [1e-3, 1e-2, 0.1])
    assert res.phase_speed[0] == pytest.approx(np.sqrt(5 / 3), rel=1e-6)
    assert res.attenuation[1] == pytest.approx(classical_attenuation(1e-2, 1.0, 1.0, c, gas), rel=1e-4)


@pytest.mark.parametrize("model", ["NSF_BASELINE", "BIVELOCITY_REDUCED", "KLIMONTOVICH", "VOLUME_FULL"])
def test_adiabatic_sound_speed(model, gas):
    c = TransportCoefficients(mu=1e-3, kappa_h=1.5e-3, kappa_m=1e-3, kappa_klim=1e-3)
    res = dispersion_relation(model, 1.0, 1.0, c, gas, [1e-3, 1e-2])
    assert res.phase_speed[0] == pytest.approx(gas.sound_speed(1.0), rel=5e-3)


@pytest.mark.parametrize("model", ["BIVELOCITY_REDUCED", "KLIMONTOVICH"])
def test_roots_coincide_with_nsf_without_extra_diffusion(model, gas):
    c = TransportCoefficients(mu=1e-3, kappa_h=1.5e-3)
    a = dispersion_relation("NSF_BASELINE", 1.0, 1.0, c, gas, OMEGAS)
    b = dispersion_relation(model, 1.0, 1.0, c, gas, OMEGAS)
    assert np.max(np.abs(a.k - b.k) / np.abs(a.k)) < 1e-10


def test_full_model_acoustic_branch_reduces(gas):
    c = TransportCoefficients(mu=1e-3, kappa_h=1.5e-3)
    a = dispersion_relation("NSF_BASELINE", 1.0, 1.0, c, gas, OMEGAS)
    b = dispersion_relation("VOLUME_FULL", 1.0, 1.0, c, gas, OMEGAS)
    assert np.max(np.abs(a.k - b.k) / np.abs(a.k)) < 1e-10


def test_attenuation_departure_grows_with_kappa_m(gas):
    base = dispersion_relation("NSF_BASELINE", 1.0, 1.0, TransportCoefficients(mu=1e-3, kappa_h=1.5e-3),
                               gas, OMEGAS)
    diffs = []
    for km in (0.0, 5e-4, 1e-3, 2e-3):
        c = TransportCoefficients(mu=1e-3, kappa_h=1.5e-3, kappa_m=km)
        r = dispersion_relation("BIVELOCITY_REDUCED", 1.0, 1.0, c, gas, OMEGAS)
        diffs.append(np.abs(r.attenuation - base.attenuation)[-1])
    assert diffs[0] < 1e-12
    assert np.all(np.diff(diffs) > 0)


def test_temporal_root_is_root_and_decays(gas):
    c = TransportCoefficients(mu=5e-3, kappa_h=7.5e-3)
    k = 2 * np.pi
    w = temporal_root("NSF_BASELINE", k, 1.0, 1.0, c, gas)
    m = nsf_matrix(k, w, 1.0, 1.0, c.mu, c.kappa_h, gas)
    assert abs(np.linalg.det(m)) < 1e-10 * np.prod(np.linalg.norm(m, axis=1))
    assert w.imag < 0
    assert w.real == pytest.approx(gas.sound_speed(1.0) * k, rel=1e-3)
    # weak damping: -Im w = k^2/2 (4/3 nu + (gamma-1) chi)
    cp = gas.gamma * gas.c_v
    approx = k**2 / 2 * (4 / 3 * c.mu + (gas.gamma - 1) * c.kappa_h / cp)
    assert -w.imag == pytest.approx(approx, rel=1e-2)
