"""Manufactured solutions built symbolically, independent of the stencil code.

Smooth periodic primitives are chosen in closed form; the exact conserved
vector, fluxes and forcing ``S = dq/dt + dF/dx - (volume production)`` are
differentiated with sympy and turned into numpy callables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy as sp

from ..governing import ModelVariant, rhs
from ..solver import IntegratorConfig, Problem, run, stable_dt
from ..state import FlowState, GasModel, Grid1D, TransportCoefficients
from .knudsen import loglog_slope

X, T_ = sp.symbols("x t", real=True)


@dataclass(frozen=True)
class ManufacturedProfile:
    """Amplitudes and time rates of the closed-form fields on a domain of length L."""

    L: float = 1.0
    rho_amp: float = 0.2
    u_amp: float = 0.1
    T_amp: float = 0.1
    v_amp: float = 0.05
    rates: tuple = (1.0, 0.5, 0.7, 0.3)

    def primitives(self):
        """Symbolic (rho, U, T, v_bar * rho) in x and t."""
        k = 2 * sp.pi / sp.nsimplify(self.L)
        w1, w2, w3, w4 = (sp.nsimplify(r) for r in self.rates)
        c = sp.nsimplify
        rho = 1 + c(self.rho_amp) * sp.sin(k * X + w1 * T_)
        u = c(self.u_amp) * sp.cos(k * X + w2 * T_)
        temp = 1 + c(self.T_amp) * sp.cos(2 * k * X - w3 * T_ + c(0.3))
        # M A_n v_bar / M: departure from the identification rho_bar = M A_n
        ratio = 1 + c(self.v_amp) * sp.cos(k * X + 1 + w4 * T_)
        return rho, u, temp, ratio


def _conserved_and_fluxes(variant: ModelVariant, prof: ManufacturedProfile,
                          coeffs: TransportCoefficients, gas: GasModel):
    rho, u, temp, ratio = prof.primitives()
    M, R = sp.nsimplify(gas.M), sp.nsimplify(gas.R)
    cv = sp.Rational(3, 2) * R
    e = cv * temp
    mu = sp.Float(coeffs.mu)
    if coeffs.power_law_s:
        mu = mu * (temp / sp.Float(coeffs.T_ref)) ** sp.Float(coeffs.power_law_s)
    kh, km, kk = sp.Float(coeffs.kappa_h), sp.Float(coeffs.kappa_m), sp.Float(coeffs.kappa_klim)

    def dx(f):
        return sp.diff(f, X)

    def stress(vel):
        return -sp.Rational(4, 3) * mu * dx(vel)

    if variant is ModelVariant.VOLUME_FULL:
        a = rho / M
        v = ratio / a
        rho_bar = M / v
        p = sp.Rational(2, 3) * rho_bar * e
        j = km * dx(rho_bar) / rho_bar
        u_v = u + j
        pi_um, pi_jv = stress(u), stress(j)
        pi_v = pi_um + pi_jv
        q = -(kh / rho_bar) * dx(temp) - sp.Rational(3, 2) * (p / rho_bar) * j
        P = (p + pi_v) / rho_bar - j**2
        energy = a * (u**2 / 2 + e - j**2 / 2)
        q_vec = [a, a * u, energy, a * v]
        fluxes = [a * u, a * u**2 + a * P, energy * u + a * P * u_v + a * (q + e * j), a * v * u_v]
        terms = [
            -dx((a / rho_bar) * pi_v * j),
            a * j**2 * dx(u),
            (a / rho_bar) * pi_jv * dx(j),
            (a / rho_bar) * pi_um * dx(j),
            (p / M) * dx(a * v * j),
            dx((-a * p / rho_bar + a * j**2) * j),
        ]
        production = [0, 0, 0, sp.Add(*terms) / p]  # A_n W = sum / (p' / M)
        prims = {"a_n": a, "v_bar": v, "u_m": u, "e_in": e}
        return q_vec, fluxes, production, prims

    p = rho * R * temp
    energy = rho * (u**2 / 2 + e)
    heat = -kh * dx(temp)
    if variant is ModelVariant.BIVELOCITY_REDUCED:
        u_v = u + km * dx(rho) / rho
        pi = stress(u_v)
        fluxes = [rho * u, rho * u**2 + p + pi, energy * u + (p + pi) * u_v + heat]
    elif variant is ModelVariant.KLIMONTOVICH:
        pi = stress(u)
        fluxes = [rho * u - kk * dx(rho),
                  rho * u**2 + p + pi - kk * dx(rho * u),
                  energy * u + (p + pi) * u + heat - kk * dx(energy)]
    else:
        pi = stress(u)
        fluxes = [rho * u, rho * u**2 + p + pi, energy * u + (p + pi) * u + heat]
    prims = {"a_n": rho / M, "v_bar": M / rho, "u_m": u, "e_in": e}
    return [rho, rho * u, energy], fluxes, [0, 0, 0], prims


def _lambdify(exprs):
    fns = [sp.lambdify((X, T_), ex, modules="numpy", cse=True) for ex in exprs]

    def call(x, t):
        x = np.asarray(x, dtype=float)
        return np.array([np.broadcast_to(np.asarray(f(x, t), dtype=float), x.shape) for f in fns])

    return call


@dataclass
class ManufacturedSolution:
    variant: ModelVariant
    profile: ManufacturedProfile
    coeffs: TransportCoefficients
    gas: GasModel
    conserved: object = field(repr=False)   # (x, t) -> exact conserved vector
    forcing: object = field(repr=False)     # (x, t) -> source added to the RHS
    time_derivative: object = field(repr=False)
    primitives: object = field(repr=False)  # (x, t) -> (a_n, v_bar, u_m, e_in)

    def state(self, grid: Grid1D, t: float) -> FlowState:
        a, v, u, e = self.primitives(grid.x, t)
        return FlowState(a_n=a, v_bar=v, u_m=u, e_in=e)

    def source(self, grid: Grid1D):
        x = grid.x
        return lambda t: self.forcing(x, t)


@lru_cache(maxsize=32)
def _build(variant, profile, coeffs, gas):
    q, F, prod, prims = _conserved_and_fluxes(variant, profile, coeffs, gas)
    dqdt = [sp.diff(c, T_) for c in q]
    forcing = [dq + sp.diff(f, X) - s for dq, f, s in zip(dqdt, F, prod)]
    return (_lambdify(q), _lambdify(forcing), _lambdify(dqdt),
            _lambdify([prims[k] for k in ("a_n", "v_bar", "u_m", "e_in")]))


def manufactured_solution(variant, coeffs: TransportCoefficients, gas: GasModel,
                          profile: ManufacturedProfile | None = None) -> ManufacturedSolution:
    variant = ModelVariant.parse(variant)
    profile = profile or ManufacturedProfile()
    q, forcing, dqdt, prims = _build(variant, profile, coeffs, gas)
    return ManufacturedSolution(variant, profile, coeffs, gas, q, forcing, dqdt, prims)


def rhs_error(sol: ManufacturedSolution, n_cells: int, t: float = 0.2) -> float:
    """max |discrete RHS + forcing - exact dq/dt| on the exact state at time t."""
    grid = Grid1D(n_cells, sol.profile.L)
    dq = rhs(sol.variant, sol.state(grid, t), sol.coeffs, sol.gas, grid).data
    return float(np.max(np.abs(dq + sol.forcing(grid.x, t) - sol.time_derivative(grid.x, t))))


def solve_error(sol: ManufacturedSolution, n_cells: int, t_end: float = 0.1, cfl: float = 0.4) -> float:
    """Max primitive-field error after forced integration from the exact initial state."""
    grid = Grid1D(n_cells, sol.profile.L)
    st = sol.state(grid, 0.0)
    dt = stable_dt(st, sol.coeffs, sol.gas, grid, IntegratorConfig(t_end, cfl, cfl))
    n_steps = math.ceil(t_end / dt)
    cfg = IntegratorConfig(t_end=t_end, fixed_dt=t_end / n_steps * (1 + 1e-12),
                           cfl_advective=1.0, cfl_diffusive=1.0, snapshot_every=n_steps + 1)
    final = run(Problem(sol.variant, st, sol.coeffs, sol.gas, grid, cfg, source=sol.source(grid))).final
    exact = sol.state(grid, t_end)
    fields = ["a_n", "u_m", "e_in"] + (["v_bar"] if sol.variant is ModelVariant.VOLUME_FULL else [])
    return max(float(np.max(np.abs(getattr(final, f) - getattr(exact, f)))) for f in fields)


@dataclass
class OrderStudy:
    variant: ModelVariant
    n_cells: list
    errors: list
    order: float


def order_study(variant, coeffs, gas, n_list=(32, 64, 128), kind="solve", **kw) -> OrderStudy:
    sol = manufactured_solution(variant, coeffs, gas)
    fn = solve_error if kind == "solve" else rhs_error
    errors = [fn(sol, n, **kw) for n in n_list]
    h = [sol.profile.L / n for n in n_list]
    return OrderStudy(sol.variant, list(n_list), errors, loglog_slope(h, errors))


def default_coefficients() -> TransportCoefficients:
    return TransportCoefficients(mu=0.02, kappa_h=0.03, kappa_m=0.02, kappa_klim=0.02)


def profile_fields(profile: ManufacturedProfile, x_star, t: float = 0.0):
    """(rho, U, T, A_n v_bar) of the profile at ``x_star = x / L`` (unit-length copy)."""
    unit = ManufacturedProfile(1.0, profile.rho_amp, profile.u_amp, profile.T_amp, profile.v_amp,
                               profile.rates)
    fn = _lambdify(list(unit.primitives()))
    return tuple(fn(x_star, t))


@dataclass
class ClosureStudy:
    n_cells: list
    errors: list
    order: float


def closure_study(coeffs: TransportCoefficients, gas: GasModel, n_list=(32, 64, 128),
                  profile: ManufacturedProfile | None = None, t_eval=0.02, courant=0.1) -> ClosureStudy:
    """Gibbs-path entropy rate minus the summed volume-model budget on unforced runs.

    Each resolution starts from the profile at t=0 and steps with dt close to
    ``courant * dx`` so that a snapshot lands exactly on ``t_eval``; the residual
    there (three-point time derivative) is integrated in L1 over the domain.
    """
    from .entropy import gibbs_closure

    profile = profile or ManufacturedProfile()
    errors = []
    for n in n_list:
        grid = Grid1D(n, profile.L)
        rho, u, T, ratio = profile_fields(profile, grid.x / profile.L)
        st = FlowState.from_density(rho, u, gas.c_v * T, gas)
        st = st.copy_with(v_bar=ratio * st.v_bar)
        m = math.ceil(t_eval / (courant * grid.dx))
        dt = t_eval / m
        cfg = IntegratorConfig(t_end=t_eval + dt, fixed_dt=dt * (1 + 1e-12), cfl_advective=1.0,
                               cfl_diffusive=1.0, snapshot_every=1)
        tr = run(Problem(ModelVariant.VOLUME_FULL, st, coeffs, gas, grid, cfg))
        res = gibbs_closure(tr.snapshots[m - 1:m + 2], tr.times[m - 1:m + 2], coeffs, gas, grid)["residual"]
        errors.append(float(np.sum(np.abs(res)) * grid.dx))
    h = [profile.L / n for n in n_list]
    return ClosureStudy(list(n_list), errors, loglog_slope(h, errors))


__all__ = [
    "ClosureStudy", "ManufacturedProfile", "ManufacturedSolution", "OrderStudy", "closure_study",
    "default_coefficients", "manufactured_solution", "order_study", "profile_fields", "rhs_error",
    "solve_error",
]
