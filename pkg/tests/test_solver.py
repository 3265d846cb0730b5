import math

import numpy as np
import pytest

from bivelocity.governing import ModelVariant
from bivelocity.solver import (IntegratorConfig, Problem, SimulationDiverged, max_diffusivity, rk4_step, run,
                               stable_dt, step_rk4)
from bivelocity.state import FlowState, GasModel, Grid1D, TransportCoefficients

ALL = list(ModelVariant)


def _uniform(n, gas, u=0.0):
    return FlowState.from_density(np.ones(n), np.full(n, u), np.full(n, gas.c_v), gas)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=1.0, cfl_advective=1.5)
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(t_end=1.0, fixed_dt=-1.0)


def test_acoustic_limit(gas):
    g = Grid1D(32, 1.0)
    dt = stable_dt(_uniform(32, gas), TransportCoefficients(), gas, g, IntegratorConfig(1.0))
    assert dt == pytest.approx(0.5 * g.dx / gas.sound_speed(1.0))


def test_diffusive_branch_crossover(gas):
    c = TransportCoefficients(kappa_m=0.5)
    cfg = IntegratorConfig(1.0)
    cs = gas.sound_speed(1.0)
    # acoustic = 0.5 dx / cs, diffusive = 0.25 dx^2 / (2 nu): equal at dx* = 4 nu / cs
    dx_star = 4 * 0.5 / cs
    for factor, branch in ((2.0, "acoustic"), (0.5, "diffusive")):
        L = 16 * dx_star * factor
        g = Grid1D(16, L)
        dt = stable_dt(_uniform(16, gas), c, gas, g, cfg)
        expected = 0.5 * g.dx / cs if branch == "acoustic" else 0.25 * g.dx**2 / (2 * 0.5)
        assert dt == pytest.approx(expected)


def test_halving_dx_quarters_diffusive_dt(gas):
    c = TransportCoefficients(mu=1.0, kappa_m=1.0)
    cfg = IntegratorConfig(1.0)
    a = stable_dt(_uniform(64, gas), c, gas, Grid1D(64, 1.0), cfg)
    b = stable_dt(_uniform(128, gas), c, gas, Grid1D(128, 1.0), cfg)
    assert a / b == pytest.approx(4.0)


def test_max_diffusivity_units(gas):
    c = TransportCoefficients(mu=0.3, kappa_h=0.6, kappa_m=0.1)
    s = FlowState.from_density(np.full(8, 2.0), np.zeros(8), np.ones(8), gas)
    assert max_diffusivity(s, c, gas) == pytest.approx(max(4 / 3 * 0.3 / 2, 0.6 / (2 * 1.5), 0.1))


def test_fixed_dt_caps_step(gas):
    g = Grid1D(16, 1.0)
    assert stable_dt(_uniform(16, gas), TransportCoefficients(), gas, g, IntegratorConfig(1.0, fixed_dt=1e-4)) == 1e-4


def test_rk4_local_error_fifth_order():
    lam = -1.3
    f = lambda t, y: lam * y  # noqa: E731
    errs = []
    for dt in (0.2, 0.1, 0.05):
        errs.append(abs(rk4_step(f, 0.0, np.array([1.0]), dt)[0] - math.exp(lam * dt)))
    assert math.log2(errs[0] / errs[1]) == pytest.approx(5, abs=0.15)
    assert math.log2(errs[1] / errs[2]) == pytest.approx(5, abs=0.15)


@pytest.mark.parametrize("variant", ALL)
def test_uniform_state_unchanged(variant, gas, coeffs):
    g = Grid1D(32, 1.0)
    s = _uniform(32, gas, u=0.2)
    out = step_rk4(s, variant, coeffs, gas, g, 1e-3)
    assert np.allclose(out.e_in, s.e_in, rtol=0, atol=1e-15)
    tr = run(Problem(variant, s, coeffs, gas, g, IntegratorConfig(t_end=1.0, max_steps=100)))
    for f in ("a_n", "v_bar", "u_m", "e_in"):
        assert np.max(np.abs(getattr(tr.final, f) - getattr(s, f))) < 1e-13
    assert len(tr.step_times) == 101


def test_divergence_is_typed(gas):
    g = Grid1D(16, 1.0)
    s = _uniform(16, gas)

    def drain(t):
        out = np.zeros((3, 16))
        out[2, 5] = -1e4  # removes the energy of cell 5 within a step
        return out

    with pytest.raises(SimulationDiverged) as info:
        run(Problem("NSF_BASELINE", s, TransportCoefficients(), gas, g, IntegratorConfig(t_end=1.0), source=drain))
    assert info.value.step == 1
    assert "e_in[5]" in str(info.value)


def test_run_is_deterministic_and_hits_t_end(gas, coeffs, make_state):
    g = Grid1D(64, 1.0)
    s = make_state(g, gas, seed=1)
    cfg = IntegratorConfig(t_end=0.05, snapshot_every=3)
    a = run(Problem("BIVELOCITY_REDUCED", s, coeffs, gas, g, cfg))
    b = run(Problem("BIVELOCITY_REDUCED", s, coeffs, gas, g, cfg))
    assert np.array_equal(a.final.e_in, b.final.e_in)
    assert a.times[-1] == pytest.approx(0.05, rel=1e-12)
    assert a.times[:2] == [0.0, a.step_times[3]]
    assert a.integral_table().shape == (len(a.step_times), 5)


@pytest.mark.parametrize("variant", ALL)
def test_conservation_over_many_steps(variant, gas, coeffs, make_state):
    g = Grid1D(64, 1.0)
    s = make_state(g, gas, seed=2, v_ratio=variant is ModelVariant.VOLUME_FULL)
    tr = run(Problem(variant, s, coeffs, gas, g, IntegratorConfig(t_end=1.0, max_steps=300)))
    ints = np.array(tr.integrals)[:, :3]
    scale = np.abs(ints[0]) + np.array([0, 1, 0]) * np.sum(s.a_n) * g.dx
    assert np.max(np.abs(ints - ints[0]) / scale) < 1e-12


def test_acoustic_wave_decay_matches_root(gas):
    from bivelocity.harness.runner import standing_wave_decay
    from bivelocity.analysis.dispersion import temporal_root
    c = TransportCoefficients(mu=0.005, kappa_h=0.0075)
    g = Grid1D(64, 1.0)
    eps = 1e-3
    cosx = np.cos(2 * np.pi * g.x)
    s = FlowState.from_density(1 + eps * cosx, np.zeros(64), gas.c_v * (1 + (gas.gamma - 1) * eps * cosx), gas)
    sig = []
    basis = np.sin(2 * np.pi * g.x)
    run(Problem("NSF_BASELINE", s, c, gas, g, IntegratorConfig(t_end=4.0, snapshot_every=2)),
        lambda t, st: sig.append((t, float(np.dot(st.u_m, basis)))))
    t, a = map(np.array, zip(*sig))
    rate = standing_wave_decay(t, a)
    w = temporal_root("NSF_BASELINE", 2 * np.pi, 1.0, 1.0, c, gas)
    assert rate == pytest.approx(-w.imag, rel=0.02)
