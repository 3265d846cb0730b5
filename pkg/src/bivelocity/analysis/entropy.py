"""Entropy budgets for the volume, reduced and Klimontovich models.

Every budget is a set of per-cell contributions to the entropy rate
(``A_n T' Ds/Dt`` for the volume model, ``rho Ds/Dt`` for the other two).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..constitutive import FluxSet, compute_fluxes, shear_stress
from ..state import FlowState, GasModel, Grid1D, TransportCoefficients, derived_quantities
from ..stencils import EVEN, ODD, ddx, div

VOLUME_KN_ORDERS = {
    "heat": 1,
    "nsf_shear": 1,
    "cross_um_jv": 2,
    "cross_jv_um": 2,
    "jv_jv": 3,
}


@dataclass
class EntropyBudget:
    model: str
    dx: float
    terms: dict
    orders: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def total(self) -> np.ndarray:
        return sum(self.terms.values())

    def integrated(self, name: str) -> float:
        return float(np.sum(self.terms[name]) * self.dx)

    def magnitude(self, name: str) -> float:
        """L1 norm of a term over the domain."""
        return float(np.sum(np.abs(self.terms[name])) * self.dx)


def entropy_budget_volume(state: FlowState, fluxes: FluxSet | None, coeffs: TransportCoefficients,
                          gas: GasModel, grid: Grid1D) -> EntropyBudget:
    """Terms of A_n T' Ds/Dt = div[(A_n/rho) kappa_h grad T'] - (A_n/rho) Pi_v : grad U_v."""
    if fluxes is None:
        fluxes = compute_fluxes(state, coeffs, gas, grid, with_w=False)
    d = derived_quantities(state, gas)
    w = state.a_n / d.rho_bar
    du = ddx(state.u_m, grid, ODD)
    dj = ddx(fluxes.j, grid, ODD)
    terms = {
        "heat": div(w * coeffs.kappa_h * ddx(d.T, grid, EVEN), grid),
        "nsf_shear": -w * fluxes.pi_um * du,
        "cross_um_jv": -w * fluxes.pi_um * dj,
        "cross_jv_um": -w * fluxes.pi_jv * du,
        "jv_jv": -w * fluxes.pi_jv * dj,
    }
    assembled = terms["heat"] - w * fluxes.pi_v * ddx(fluxes.u_v, grid, ODD)
    return EntropyBudget("VOLUME", grid.dx, terms, dict(VOLUME_KN_ORDERS),
                         {"assembled": assembled})


def _time_derivative(values, times):
    """Second-order d/dt at the middle of three (possibly uneven) samples, or the midpoint of two."""
    if len(values) == 2:
        return (values[1] - values[0]) / (times[1] - times[0])
    h1, h2 = times[1] - times[0], times[2] - times[1]
    return (-h2 / (h1 * (h1 + h2)) * values[0]
            + (h2 - h1) / (h1 * h2) * values[1]
            + h1 / (h2 * (h1 + h2)) * values[2])


def _at_eval_time(values):
    return 0.5 * (values[0] + values[1]) if len(values) == 2 else values[1]


def gibbs_closure(snapshots, times, coeffs: TransportCoefficients, gas: GasModel,
                  grid: Grid1D) -> dict:
    """Entropy rate from the Gibbs-type definition versus the budget's right-hand side.

    LHS = A_n D/Dt[e' - j^2/2] - p' D(A_n/rho)/Dt, with D/Dt = d/dt + U_m d/dx,
    differenced in time across the snapshots.  With two snapshots everything
    is evaluated at the midpoint; with three, at the middle snapshot.
    ``jv_kinetic`` is the j^2/2 contribution to LHS (T' is taken as e'/c_v).
    """
    if len(snapshots) not in (2, 3) or len(times) != len(snapshots):
        raise ValueError("gibbs_closure needs two or three snapshots with matching times")
    fl = [compute_fluxes(s, coeffs, gas, grid, with_w=False) for s in snapshots]
    specific = [s.e_in - 0.5 * f.j**2 for s, f in zip(snapshots, fl)]
    specific_volume = [s.a_n * s.v_bar / gas.M for s in snapshots]
    budgets = [entropy_budget_volume(s, f, coeffs, gas, grid) for s, f in zip(snapshots, fl)]
    pick = _at_eval_time

    a = pick([s.a_n for s in snapshots])
    u = pick([s.u_m for s in snapshots])
    p = pick([s.pressure(gas) for s in snapshots])

    def material(values):
        return _time_derivative(values, times) + u * pick([ddx(v, grid, EVEN) for v in values])

    lhs = a * material(specific) - p * material(specific_volume)
    rhs = pick([b.total() for b in budgets])
    # the -A_n D(j^2/2)/Dt part of lhs, reported on its own
    jv_kinetic = -a * material([0.5 * f.j**2 for f in fl])
    return {"lhs": lhs, "rhs": rhs, "residual": lhs - rhs, "jv_kinetic": jv_kinetic}


def entropy_budget_reduced(state: FlowState, fluxes: FluxSet | None, coeffs: TransportCoefficients,
                           gas: GasModel, grid: Grid1D) -> EntropyBudget:
    """rho Ds/Dt for the reduced model, local-equilibrium Gibbs entropy.

    ``production`` is -(1/T) Pi_v dU_v/dx (non-negative); ``residual`` is the
    sign-indefinite -(1/T) j d(Pi_v)/dx, also split into its Pi_Um and Pi_Jv parts.
    """
    if fluxes is None:
        fluxes = compute_fluxes(state, coeffs, gas, grid, with_w=False)
    d = derived_quantities(state, gas)
    j = fluxes.j
    flux = -coeffs.kappa_h * ddx(d.T, grid, EVEN) + d.p * j
    terms = {
        "entropy_flux": -div(flux, grid) / d.T,
        "production": -fluxes.pi_v * ddx(fluxes.u_v, grid, ODD) / d.T,
        "residual": -j * ddx(fluxes.pi_v, grid, EVEN) / d.T,
    }
    extras = {
        "residual_um": -j * ddx(fluxes.pi_um, grid, EVEN) / d.T,
        "residual_jv": -j * ddx(fluxes.pi_jv, grid, EVEN) / d.T,
    }
    return EntropyBudget("BIVELOCITY_REDUCED", grid.dx, terms, {}, extras)


def entropy_budget_klimontovich(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                                grid: Grid1D) -> EntropyBudget:
    """rho Ds/Dt of the Klimontovich model split into flux divergences and productions.

    ``curly`` is the bracketed group 2 kappa c_v grad(rho).grad(T)/T - kappa R |grad rho|^2/rho,
    which can take either sign.
    """
    rho = gas.M * state.a_n
    T = state.temperature(gas)
    u = state.u_m
    k, kh, cv, R = coeffs.kappa_klim, coeffs.kappa_h, gas.c_v, gas.R
    drho = ddx(rho, grid, EVEN)
    dT = ddx(T, grid, EVEN)
    du = ddx(u, grid, ODD)
    pi = shear_stress(u, coeffs, grid, T)
    terms = {
        "flux_density_temperature": rho * k * cv * div(ddx(rho * T, grid, EVEN) / (rho * T), grid),
        "flux_density": -rho * k * (R + cv) * div(drho / rho, grid),
        "flux_heat": kh * div(dT / T, grid),
        "velocity_diffusion": k * rho * du**2 / T,
        "viscous": -pi * du / T,
        "thermal": (kh + rho * k * cv) * dT**2 / T**2,
        "curly": 2.0 * k * cv * drho * dT / T - k * R * drho**2 / rho,
    }
    return EntropyBudget("KLIMONTOVICH", grid.dx, terms)


def klimontovich_gibbs_closure(snapshots, times, coeffs, gas, grid) -> dict:
    """rho Ds/Dt from the classical Gibbs relation versus the Klimontovich budget."""
    pick = _at_eval_time
    rho_s = [gas.M * s.a_n for s in snapshots]
    e_s = [s.e_in for s in snapshots]
    rho, u = pick(rho_s), pick([s.u_m for s in snapshots])
    T, p = pick([s.temperature(gas) for s in snapshots]), pick([s.pressure(gas) for s in snapshots])

    def material(values):
        return _time_derivative(values, times) + u * pick([ddx(v, grid, EVEN) for v in values])

    lhs = (rho * material(e_s) - p / rho * material(rho_s)) / T
    rhs = pick([entropy_budget_klimontovich(s, coeffs, gas, grid).total() for s in snapshots])
    return {"lhs": lhs, "rhs": rhs, "residual": lhs - rhs}
