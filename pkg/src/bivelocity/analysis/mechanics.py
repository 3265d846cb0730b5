"""Mechanical consistency checks: Galilean invariance, integrability,
angular momentum and centre-of-mass motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..constitutive import compute_fluxes, shear_stress_tensor
from ..governing import ModelVariant, to_conserved
from ..solver import IntegratorConfig, Problem, run, stable_dt
from ..state import FlowState, GasModel, Grid1D, TransportCoefficients
from ..stencils import ODD, ddx
from .entropy import _time_derivative
from .knudsen import loglog_slope


def convergence_order(h, errors) -> float:
    return loglog_slope(h, errors)


# -- Galilean invariance ---------------------------------------------------

def default_wave(xs):
    k = 2.0 * np.pi
    return (1.0 + 0.1 * np.sin(k * xs),
            0.05 * np.sin(k * xs + 0.3),
            1.0 + 0.05 * np.cos(k * xs))


def galilean_mismatch(variant, n_cells, coeffs: TransportCoefficients, gas: GasModel,
                      c=0.5, t_end=0.5, L=1.0, cfl=0.4, profile=default_wave):
    """Max-norm mismatch between a run and the same run in a frame moving at -c.

    The boosted run starts from U + c; after ``t_end`` it is translated back by
    c t_end (a whole number of cells) and compared field by field.
    """
    grid = Grid1D(n_cells, L)
    shift = c * t_end / grid.dx
    if abs(shift - round(shift)) > 1e-9:
        raise ValueError("c * t_end must be a whole number of cells")
    rho, u, T = profile(grid.x / L)
    base = FlowState.from_density(rho, u, gas.c_v * T, gas)
    boosted = FlowState.from_density(rho, u + c, gas.c_v * T, gas)
    dt = stable_dt(boosted, coeffs, gas, grid, IntegratorConfig(t_end, cfl, cfl))
    n_steps = math.ceil(t_end / dt)
    cfg = IntegratorConfig(t_end=t_end, fixed_dt=t_end / n_steps * (1 + 1e-12),
                           cfl_advective=1.0, cfl_diffusive=1.0, snapshot_every=n_steps + 1)
    a = run(Problem(variant, base, coeffs, gas, grid, cfg)).final
    b = run(Problem(variant, boosted, coeffs, gas, grid, cfg)).final
    s = int(round(shift))
    mismatch = max(
        np.max(np.abs(np.roll(a.a_n, s) - b.a_n)) * gas.M,
        np.max(np.abs(np.roll(a.u_m, s) + c - b.u_m)),
        np.max(np.abs(np.roll(a.e_in, s) - b.e_in)) / gas.c_v,
    )
    return float(mismatch), (a, b)


@dataclass
class ConvergenceResult:
    n_cells: list
    h: list
    errors: list
    order: float
    extra: dict = field(default_factory=dict)


def galilean_convergence(variant, coeffs, gas, n_list=(64, 128, 256), **kw) -> ConvergenceResult:
    errors = [galilean_mismatch(variant, n, coeffs, gas, **kw)[0] for n in n_list]
    h = [1.0 / n for n in n_list]
    return ConvergenceResult(list(n_list), h, errors, convergence_order(h, errors))


# -- integrability ----------------------------------------------------------

def integrability_check(trajectory, gas: GasModel, coeffs: TransportCoefficients) -> dict:
    """The advanced momentum must be the mass flux, and its domain sum must be conserved."""
    variant = ModelVariant.parse(trajectory.variant)
    grid = trajectory.grid
    worst = 0.0
    for st in trajectory.snapshots:
        q = to_conserved(st, variant, gas, coeffs, grid)
        worst = max(worst, float(np.max(np.abs(q[1] - q[0] * st.u_m))))
    sums = np.array(trajectory.integrals)[:, 1]
    scale = max(np.max(np.abs(np.array(trajectory.integrals)[:, 0])), 1e-300)
    return {
        "momentum_is_mass_flux": worst,
        "momentum_drift": float(np.max(np.abs(sums - sums[0])) / scale),
    }


# -- angular momentum -------------------------------------------------------

def _grid2d(n, lo=0.2, hi=1.2):
    h = (hi - lo) / n
    s = lo + (np.arange(n) + 0.5) * h
    x, y = np.meshgrid(s, s, indexing="ij")
    return x, y, h


def _d(f, h, axis):
    out = np.full_like(f, np.nan)
    sl_c = [slice(1, -1)] * 2
    sl_p, sl_m = list(sl_c), list(sl_c)
    sl_p[axis] = slice(2, None)
    sl_m[axis] = slice(None, -2)
    out[tuple(sl_c)] = (f[tuple(sl_p)] - f[tuple(sl_m)]) / (2 * h)
    return out


def angular_momentum_residual(tensor_fn, n) -> float:
    """max |X ^ div(T) - div(X ^ T)| over interior points of an n x n grid.

    ``tensor_fn(x, y)`` returns T with shape (2, 2, n, n); div(T)_j = dT_ij/dX_i.
    """
    x, y, h = _grid2d(n)
    T = tensor_fn(x, y)
    div_T = [_d(T[0, j], h, 0) + _d(T[1, j], h, 1) for j in range(2)]
    lhs = x * div_T[1] - y * div_T[0]
    # (X ^ T)_i = x T_iy - y T_ix, divergence over the first index
    moment = [x * T[i, 1] - y * T[i, 0] for i in range(2)]
    rhs = _d(moment[0], h, 0) + _d(moment[1], h, 1)
    r = (lhs - rhs)[2:-2, 2:-2]
    return float(np.max(np.abs(r)))


def analytic_stress_field(mu=0.3, pressure=True):
    """Symmetric p I + Pi_v of a smooth planar velocity field, (2, 2, ...) in the plane."""

    def velocity_gradient(x, y):
        # U = (sin x cos 2y + 0.3 y^3, x^2 y + 0.2 cos(x + 2y))
        s = 0.2 * np.sin(x + 2 * y)
        return np.array([[np.cos(x) * np.cos(2 * y), -2 * np.sin(x) * np.sin(2 * y) + 0.9 * y**2],
                         [2 * x * y - s, x**2 - 2 * s]])

    def tensor(x, y):
        g = np.moveaxis(velocity_gradient(x, y), (0, 1), (-2, -1))
        g3 = np.zeros(g.shape[:-2] + (3, 3))
        g3[..., :2, :2] = g
        pi = shear_stress_tensor(g3, mu)[..., :2, :2]
        pi = np.moveaxis(pi, (-2, -1), (0, 1))
        if pressure:
            p = 1.0 + 0.1 * np.sin(x) * np.cos(2 * y)
            pi = pi + p * np.eye(2)[:, :, None, None]
        return pi

    return tensor


def antisymmetric_field(x, y):
    a = 0.5 + 0.2 * np.sin(x + 2 * y)
    z = np.zeros_like(x)
    return np.array([[z, a], [-a, z]])


def angular_momentum_convergence(tensor_fn=None, n_list=(32, 64, 128)) -> ConvergenceResult:
    tensor_fn = tensor_fn or analytic_stress_field()
    errors = [angular_momentum_residual(tensor_fn, n) for n in n_list]
    h = [1.0 / n for n in n_list]
    return ConvergenceResult(list(n_list), h, errors, convergence_order(h, errors))


# -- centre of mass -------------------------------------------------------------

def gaussian_pulse(xs, amplitude=0.2, width=0.08, centre=0.5, velocity=0.05):
    g = np.exp(-((xs - centre) / width) ** 2)
    return 1.0 + amplitude * g, velocity * g, 1.0 + 0.5 * amplitude * g


def center_of_mass_residual(snapshots, times, coeffs, gas, grid, margin=3) -> np.ndarray:
    """dB/dt + d/dx[B U - t (p + Pi_v)] with B = rho (X - U t), at the middle snapshot."""
    B = [gas.M * s.a_n * (grid.x - s.u_m * t) for s, t in zip(snapshots, times)]
    dBdt = _time_derivative(B, times)
    mid, t = snapshots[1], times[1]
    fl = compute_fluxes(mid, coeffs, gas, grid, with_w=False)
    flux = B[1] * mid.u_m - t * (mid.pressure(gas) + fl.pi_v)
    # X is not periodic: skip the cells whose stencil wraps
    r = dBdt + ddx(flux, grid, ODD)
    return r[margin:-margin]


def center_of_mass_convergence(variant, coeffs, gas, n_list=(64, 128, 256), t_end=0.05,
                               cfl=0.3, L=1.0) -> ConvergenceResult:
    errors = []
    for n in n_list:
        grid = Grid1D(n, L)
        rho, u, T = gaussian_pulse(grid.x / L)
        st = FlowState.from_density(rho, u, gas.c_v * T, gas)
        dt = stable_dt(st, coeffs, gas, grid, IntegratorConfig(1.0, cfl, cfl))
        n_steps = math.ceil(t_end / dt)
        dt = t_end / n_steps
        cfg = IntegratorConfig(t_end=t_end + dt, fixed_dt=dt * (1 + 1e-12), cfl_advective=1.0,
                               cfl_diffusive=1.0, snapshot_every=1)
        tr = run(Problem(variant, st, coeffs, gas, grid, cfg))
        i = n_steps
        r = center_of_mass_residual(tr.snapshots[i - 1:i + 2], tr.times[i - 1:i + 2], coeffs, gas, grid)
        errors.append(float(np.max(np.abs(r))))
    h = [L / n for n in n_list]
    return ConvergenceResult(list(n_list), h, errors, convergence_order(h, errors))


@dataclass
class MechanicalReport:
    galilean: ConvergenceResult
    integrability: dict
    angular_momentum: ConvergenceResult
    angular_momentum_control: ConvergenceResult
    center_of_mass: ConvergenceResult


def mechanical_checks(variant, coeffs, gas, n_list=(64, 128, 256)) -> MechanicalReport:
    gal = galilean_convergence(variant, coeffs, gas, n_list)
    grid = Grid1D(64, 1.0)
    rho, u, T = default_wave(grid.x)
    st = FlowState.from_density(rho, u, gas.c_v * T, gas)
    tr = run(Problem(variant, st, coeffs, gas, grid, IntegratorConfig(t_end=0.2, snapshot_every=10)))
    return MechanicalReport(
        galilean=gal,
        integrability=integrability_check(tr, gas, coeffs),
        angular_momentum=angular_momentum_convergence(),
        angular_momentum_control=angular_momentum_convergence(antisymmetric_field),
        center_of_mass=center_of_mass_convergence(variant, coeffs, gas, n_list),
    )
