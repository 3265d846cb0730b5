import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bivelocity.state import (FlowState, GasModel, Grid1D, TransportCoefficients, ValidationError,
                              derived_quantities, require_valid, validate)


def test_gas_constants():
    gas = GasModel(M=2.0, R=3.0)
    assert gas.c_v == 4.5
    assert gas.gamma == pytest.approx(5 / 3)
    assert gas.sound_speed(2.0) == pytest.approx(np.sqrt(5 / 3 * 3.0 * 2.0))


@pytest.mark.parametrize("kw", [{"M": 0.0}, {"R": -1.0}])
def test_gas_rejects_nonpositive(kw):
    with pytest.raises(ValueError):
        GasModel(**kw)


def test_eta_tied_to_mu():
    c = TransportCoefficients(mu=0.3)
    assert c.eta == pytest.approx(0.2)
    assert c.replace(mu=0.6).eta == pytest.approx(0.4)


def test_power_law_viscosity():
    c = TransportCoefficients(mu=2.0, power_law_s=0.5, T_ref=4.0)
    assert c.viscosity(np.array([4.0, 16.0])) == pytest.approx([2.0, 4.0])
    assert TransportCoefficients(mu=2.0).viscosity(np.array([9.0])) == 2.0


@pytest.mark.parametrize("name", ["mu", "kappa_h", "kappa_m", "kappa_klim"])
def test_negative_coefficient_named(name):
    with pytest.raises(ValueError, match=name):
        TransportCoefficients(**{name: -1e-3})


def test_grid_geometry():
    g = Grid1D(10, 2.0)
    assert g.dx == 0.2
    assert g.x[0] == pytest.approx(0.1) and g.x[-1] == pytest.approx(1.9)
    with pytest.raises(ValueError):
        Grid1D(4, 1.0)
    with pytest.raises(ValueError):
        Grid1D(16, 1.0, "open")


def test_from_density_identification(gas):
    g = GasModel(M=2.0)
    rho = np.linspace(1, 2, 8)
    s = FlowState.from_density(rho, np.zeros(8), np.ones(8), g)
    assert np.allclose(s.rho_bar(g), rho)
    assert np.allclose(g.M * s.a_n, rho)
    assert np.allclose(s.identification_drift(g), 0.0)
    assert np.allclose(s.pressure(g), 2 / 3 * rho)
    assert np.allclose(s.temperature(g), 1 / g.c_v)


def test_state_is_immutable():
    s = FlowState.from_density(np.ones(8), np.zeros(8), np.ones(8), GasModel())
    with pytest.raises(ValueError):
        s.a_n[0] = 2.0
    t = s.copy_with(u_m=np.ones(8))
    assert np.all(t.u_m == 1) and np.all(s.u_m == 0)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        FlowState(np.ones(8), np.ones(8), np.ones(7), np.ones(8))


def test_validate_collects_every_violation():
    a = np.ones(8)
    a[[1, 5]] = [-1.0, 0.0]
    e = np.ones(8)
    e[2] = np.nan
    s = FlowState(a, np.ones(8), np.zeros(8), e)
    v = validate(s)
    assert {(n, i) for n, i, _ in v} == {("a_n", 1), ("a_n", 5), ("e_in", 2)}
    with pytest.raises(ValidationError) as info:
        require_valid(s)
    assert len(info.value.violations) == 3
    with pytest.raises(ValidationError):
        derived_quantities(s, GasModel())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=8, max_size=8))
def test_validate_matches_positivity(values):
    a = np.array(values)
    s = FlowState(a, np.ones(8), np.zeros(8), np.ones(8))
    assert len(validate(s)) == int(np.sum(a <= 0))
