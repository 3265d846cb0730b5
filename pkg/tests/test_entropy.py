import numpy as np
import pytest

from bivelocity.analysis.entropy import (VOLUME_KN_ORDERS, _time_derivative, entropy_budget_klimontovich,
                                         entropy_budget_reduced, entropy_budget_volume, gibbs_closure,
                                         klimontovich_gibbs_closure)
from bivelocity.analysis.knudsen import loglog_slope
from bivelocity.analysis.manufactured import closure_study, default_coefficients
from bivelocity.solver import IntegratorConfig, Problem, run
from bivelocity.state import FlowState, GasModel, Grid1D, TransportCoefficients
from conftest import smooth_state


def test_orders_tagged():
    assert VOLUME_KN_ORDERS == {"heat": 1, "nsf_shear": 1, "cross_um_jv": 2, "cross_jv_um": 2, "jv_jv": 3}


def test_time_derivative_exact_for_quadratics():
    t = [0.0, 0.3, 0.45]
    f = [2 + 3 * s - s**2 for s in t]
    assert _time_derivative(f, t) == pytest.approx(3 - 2 * 0.3)
    assert _time_derivative(f[:2], t[:2]) == pytest.approx((f[1] - f[0]) / 0.3)


def test_volume_terms_sum_to_assembled(gas, coeffs):
    d = []
    for n in (64, 128):
        g = Grid1D(n, 1.0)
        b = entropy_budget_volume(smooth_state(g, gas, 3, v_ratio=True), None, coeffs, gas, g)
        d.append(np.max(np.abs(b.total() - b.extras["assembled"])))
    # the product rule for grad U_v = grad U + grad j is exact for central differences
    assert d[1] < 1e-12


def test_budget_integrals(gas, coeffs, grid):
    b = entropy_budget_volume(smooth_state(grid, gas, 4, v_ratio=True), None, coeffs, gas, grid)
    assert abs(b.integrated("heat")) < 1e-13  # divergence form
    assert b.magnitude("nsf_shear") == pytest.approx(b.integrated("nsf_shear"))  # non-negative term
    assert np.all(b.terms["nsf_shear"] >= 0)


def test_gibbs_closure_second_order(gas):
    st = closure_study(default_coefficients(), gas)
    assert st.order == pytest.approx(2.0, abs=0.2)
    assert st.errors[-1] < 1e-3


def test_gibbs_closure_needs_two_or_three(gas, coeffs, grid):
    s = smooth_state(grid, gas)
    with pytest.raises(ValueError):
        gibbs_closure([s], [0.0], coeffs, gas, grid)


def test_klimontovich_closure_second_order(gas):
    c = TransportCoefficients(mu=0.02, kappa_h=0.03, kappa_klim=0.02)
    errs = []
    for n in (32, 64, 128):
        g = Grid1D(n, 1.0)
        s = smooth_state(g, gas, 5)
        dt = 0.1 * g.dx
        tr = run(Problem("KLIMONTOVICH", s, c, gas, g,
                         IntegratorConfig(t_end=2 * dt, fixed_dt=dt * (1 + 1e-12), snapshot_every=1)))
        r = klimontovich_gibbs_closure(tr.snapshots[:3], tr.times[:3], c, gas, g)["residual"]
        errs.append(np.sum(np.abs(r)) * g.dx)
    assert loglog_slope([1 / 32, 1 / 64, 1 / 128], errs) == pytest.approx(2.0, abs=0.25)


def test_klimontovich_curly_takes_both_signs(gas, coeffs, grid):
    c = entropy_budget_klimontovich(smooth_state(grid, gas, 6), coeffs, gas, grid).terms["curly"]
    assert c.min() < 0 < c.max()


def test_klimontovich_positive_terms(gas, coeffs, grid):
    t = entropy_budget_klimontovich(smooth_state(grid, gas, 7), coeffs, gas, grid).terms
    for name in ("velocity_diffusion", "viscous", "thermal"):
        assert np.all(t[name] >= -1e-14)


def test_reduced_residual_vanishes_without_volume_diffusion(gas, grid):
    s = smooth_state(grid, gas, 8)
    b = entropy_budget_reduced(s, None, TransportCoefficients(mu=0.01, kappa_h=0.01), gas, grid)
    assert not np.any(b.terms["residual"])
    b = entropy_budget_reduced(s, None, TransportCoefficients(mu=0.01, kappa_h=0.01, kappa_m=0.01), gas, grid)
    assert np.max(np.abs(b.terms["residual"])) > 0
    assert np.allclose(b.terms["residual"], b.extras["residual_um"] + b.extras["residual_jv"])
    assert np.all(b.terms["production"] >= -1e-14)


def test_gibbs_jv_kinetic_part(gas):
    c = TransportCoefficients(mu=0.02, kappa_h=0.03, kappa_m=0.02)
    g = Grid1D(64, 1.0)
    s = smooth_state(g, gas, 9, v_ratio=True)
    dt = 0.1 * g.dx
    tr = run(Problem("VOLUME_FULL", s, c, gas, g,
                     IntegratorConfig(t_end=2 * dt, fixed_dt=dt * (1 + 1e-12), snapshot_every=1)))
    out = gibbs_closure(tr.snapshots[:3], tr.times[:3], c, gas, g)
    assert np.max(np.abs(out["jv_kinetic"])) > 0
    zero = gibbs_closure(tr.snapshots[:3], tr.times[:3], c.replace(kappa_m=0.0), gas, g)
    assert not np.any(zero["jv_kinetic"])
