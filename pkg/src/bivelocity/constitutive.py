"""Closure fluxes of the volume-diffusion model.

Conventions (1D): ``j`` is the diffusive velocity J_v / v_bar, the stress is
the xx component of the symmetric trace-free tensor, heat fluxes are per
unit mass (``q' = -(kappa_h/rho) dT/dx - 3/2 (p/rho) j``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import FlowState, GasModel, Grid1D, TransportCoefficients, ValidationError, derived_quantities
from .stencils import EVEN, ODD, ddx, div


@dataclass(frozen=True)
class FluxSet:
    j_v_over_vbar: np.ndarray
    u_v: np.ndarray
    pi_v: np.ndarray
    pi_um: np.ndarray
    pi_jv: np.ndarray
    q_prime: np.ndarray
    q_s: np.ndarray
    w: np.ndarray | None = None

    @property
    def j(self):
        return self.j_v_over_vbar


def volume_flux(state: FlowState, coeffs: TransportCoefficients, grid: Grid1D, gas: GasModel):
    """(1/v_bar) J_v = kappa_m grad(rho_bar) / rho_bar."""
    rho = derived_quantities(state, gas).rho_bar
    if coeffs.kappa_m == 0.0:
        return np.zeros_like(rho)
    return coeffs.kappa_m * ddx(rho, grid, EVEN) / rho


def volume_flux_from_volume(state: FlowState, coeffs: TransportCoefficients, grid: Grid1D):
    """Equivalent form -kappa_m grad(v_bar) / v_bar; agrees with volume_flux to O(dx^2)."""
    return -coeffs.kappa_m * ddx(state.v_bar, grid, EVEN) / state.v_bar


def volume_velocity(state: FlowState, j):
    return state.u_m + j


def shear_stress(u, coeffs: TransportCoefficients, grid: Grid1D, T=None):
    """Normal stress -2 mu du/dx + eta du/dx of a 1D velocity profile (odd field)."""
    mu = coeffs.viscosity(T)
    dudx = ddx(u, grid, ODD)
    return -2.0 * mu * dudx + (2.0 / 3.0 * mu) * dudx


def shear_stress_tensor(grad_u, mu, eta=None):
    """-mu (G + G^T) + eta tr(G) I for velocity gradients G[..., i, j] = dU_i/dX_j.

    Pass 3x3 gradients; a 2x2 block of a planar flow is not trace-free.
    """
    g = np.asarray(grad_u, dtype=float)
    if eta is None:
        eta = 2.0 / 3.0 * mu
    mu = np.asarray(mu, dtype=float)[..., None, None]
    eta = np.asarray(eta, dtype=float)[..., None, None]
    trace = np.trace(g, axis1=-2, axis2=-1)[..., None, None]
    eye = np.eye(g.shape[-1])
    return -mu * (g + np.swapaxes(g, -1, -2)) + eta * trace * eye


def heat_flux(state: FlowState, j, coeffs: TransportCoefficients, grid: Grid1D, gas: GasModel):
    d = derived_quantities(state, gas)
    conductive = -(coeffs.kappa_h / d.rho_bar) * ddx(d.T, grid, EVEN)
    return conductive - 1.5 * (d.p / d.rho_bar) * j


def entropic_heat_flux(state: FlowState, q_prime, j, gas: GasModel):
    d = derived_quantities(state, gas)
    return q_prime + 1.5 * (d.p / d.rho_bar) * j


def compute_fluxes(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                   grid: Grid1D, with_w: bool = True) -> FluxSet:
    T = state.temperature(gas)
    j = volume_flux(state, coeffs, grid, gas)
    u_v = volume_velocity(state, j)
    pi_um = shear_stress(state.u_m, coeffs, grid, T)
    pi_jv = shear_stress(j, coeffs, grid, T)
    q = heat_flux(state, j, coeffs, grid, gas)
    fluxes = FluxSet(
        j_v_over_vbar=j,
        u_v=u_v,
        pi_v=pi_um + pi_jv,
        pi_um=pi_um,
        pi_jv=pi_jv,
        q_prime=q,
        q_s=entropic_heat_flux(state, q, j, gas),
    )
    if with_w:
        w = volume_production(state, fluxes, coeffs, gas, grid)
        fluxes = FluxSet(**{**fluxes.__dict__, "w": w})
    return fluxes


def volume_production_terms(state: FlowState, fluxes: FluxSet, gas: GasModel, grid: Grid1D) -> dict:
    """The six terms of p' (A_n/M) W, keyed in the order they are summed."""
    d = derived_quantities(state, gas)
    a, rho, p = state.a_n, d.rho_bar, d.p
    j = fluxes.j
    dj = ddx(j, grid, ODD)
    return {
        "stress_flux_div": -div((a / rho) * fluxes.pi_v * j, grid),
        "jj_strain": a * j**2 * ddx(state.u_m, grid, ODD),
        "pi_jv_grad_j": (a / rho) * fluxes.pi_jv * dj,
        "pi_um_grad_j": (a / rho) * fluxes.pi_um * dj,
        "pressure_volume_div": (p / gas.M) * div(a * state.v_bar * j, grid),
        "enthalpy_flux_div": div((-a * p / rho + a * j**2) * j, grid),
    }


def volume_production(state: FlowState, fluxes: FluxSet, coeffs: TransportCoefficients,
                      gas: GasModel, grid: Grid1D):
    """Volume production rate W, solved from its defining balance by dividing by p' A_n / M."""
    p = derived_quantities(state, gas).p
    if np.any(~(p > 0)):
        i = int(np.flatnonzero(~(p > 0))[0])
        raise ValidationError(f"singular volume-production closure: p'[{i}] = {p[i]!r}")
    if not np.any(fluxes.j):
        return np.zeros_like(p)
    total = sum(volume_production_terms(state, fluxes, gas, grid).values())
    return total / (p * state.a_n / gas.M)
