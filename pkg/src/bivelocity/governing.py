"""Right-hand sides of the four model variants in conservative form.

Three-equation variants (NSF, reduced bivelocity, Klimontovich) advance
``rho, rho U, rho (U^2/2 + e)`` with ``rho = M A_n``.  The full volume model
advances ``A_n, A_n U, A_n (U^2/2 + e - j^2/2), A_n v_bar``; the first three
are strictly conservative, the last carries the volume production A_n W.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constitutive import compute_fluxes, shear_stress, volume_flux, volume_production_terms
from .state import FlowState, GasModel, Grid1D, TransportCoefficients, derived_quantities, require_valid
from .stencils import EVEN, ODD, ddx, div


class ModelVariant(str, enum.Enum):
    NSF_BASELINE = "NSF_BASELINE"
    BIVELOCITY_REDUCED = "BIVELOCITY_REDUCED"
    VOLUME_FULL = "VOLUME_FULL"
    KLIMONTOVICH = "KLIMONTOVICH"

    @classmethod
    def parse(cls, value) -> "ModelVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper().replace("-", "_"))
        except ValueError:
            raise ValueError(f"unknown model variant {value!r}; expected one of "
                             f"{[v.value for v in cls]}") from None


THREE_EQ_NAMES = ("rho", "momentum", "energy")
FULL_NAMES = ("a_n", "momentum", "energy", "volume")


def variable_names(variant: ModelVariant) -> tuple[str, ...]:
    return FULL_NAMES if ModelVariant.parse(variant) is ModelVariant.VOLUME_FULL else THREE_EQ_NAMES


@dataclass(frozen=True)
class StateDerivative:
    variant: ModelVariant
    names: tuple[str, ...]
    data: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[self.names.index(name)]

    def dv_bar_dt(self, state: FlowState) -> np.ndarray:
        """d v_bar / dt recovered from d(A_n v_bar)/dt (full model only)."""
        return (self["volume"] - state.v_bar * self["a_n"]) / state.a_n


def _reidentify(state: FlowState, gas: GasModel) -> FlowState:
    return FlowState.from_density(gas.M * state.a_n, state.u_m, state.e_in, gas)


def _pack(variant, fluxes, grid, source=None):
    dq = np.array([-div(f, grid, parity) for f, parity in fluxes])
    if source is not None:
        dq[-1] += source
    return StateDerivative(variant, variable_names(variant), dq)


def rhs_nsf_baseline(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                     grid: Grid1D) -> StateDerivative:
    require_valid(state)
    st = _reidentify(state, gas)
    d = derived_quantities(st, gas)
    rho, u, e, p = gas.M * st.a_n, st.u_m, st.e_in, d.p
    pi = shear_stress(u, coeffs, grid, d.T)
    energy = 0.5 * rho * u**2 + rho * e
    return _pack(ModelVariant.NSF_BASELINE, [
        (rho * u, ODD),
        (rho * u**2 + p + pi, EVEN),
        (energy * u + (p + pi) * u - coeffs.kappa_h * ddx(d.T, grid, EVEN), ODD),
    ], grid)


def rhs_bivelocity_reduced(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                           grid: Grid1D) -> StateDerivative:
    require_valid(state)
    st = _reidentify(state, gas)
    d = derived_quantities(st, gas)
    rho, u, e, p = gas.M * st.a_n, st.u_m, st.e_in, d.p
    u_v = u + volume_flux(st, coeffs, grid, gas)
    pi_v = shear_stress(u_v, coeffs, grid, d.T)
    energy = 0.5 * rho * u**2 + rho * e
    return _pack(ModelVariant.BIVELOCITY_REDUCED, [
        (rho * u, ODD),
        (rho * u**2 + p + pi_v, EVEN),
        (energy * u + (p + pi_v) * u_v - coeffs.kappa_h * ddx(d.T, grid, EVEN), ODD),
    ], grid)


def rhs_klimontovich(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                     grid: Grid1D) -> StateDerivative:
    require_valid(state)
    st = _reidentify(state, gas)
    d = derived_quantities(st, gas)
    rho, u, e, p = gas.M * st.a_n, st.u_m, st.e_in, d.p
    k = coeffs.kappa_klim
    pi = shear_stress(u, coeffs, grid, d.T)
    energy = 0.5 * rho * u**2 + rho * e
    return _pack(ModelVariant.KLIMONTOVICH, [
        (rho * u - k * ddx(rho, grid, EVEN), ODD),
        (rho * u**2 + p + pi - k * ddx(rho * u, grid, ODD), EVEN),
        (energy * u + (p + pi) * u - coeffs.kappa_h * ddx(d.T, grid, EVEN)
         - k * ddx(energy, grid, EVEN), ODD),
    ], grid)


def full_model_fluxes(state: FlowState, coeffs: TransportCoefficients, gas: GasModel, grid: Grid1D):
    """Closure fluxes plus the reduced momentum tensor P' - j j of the full model."""
    fl = compute_fluxes(state, coeffs, gas, grid, with_w=True)
    d = derived_quantities(state, gas)
    momentum_tensor = (d.p + fl.pi_v) / d.rho_bar - fl.j**2
    return fl, d, momentum_tensor


def rhs_volume_full(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                    grid: Grid1D) -> StateDerivative:
    require_valid(state)
    fl, d, P = full_model_fluxes(state, coeffs, gas, grid)
    a, u, e, j = state.a_n, state.u_m, state.e_in, fl.j
    energy = a * (0.5 * u**2 + e - 0.5 * j**2)
    return _pack(ModelVariant.VOLUME_FULL, [
        (a * u, ODD),
        (a * u**2 + a * P, EVEN),
        (energy * u + a * P * fl.u_v + a * (fl.q_prime + e * j), ODD),
        (a * state.v_bar * fl.u_v, ODD),
    ], grid, source=a * fl.w)


def rhs_volume_full_material(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                             grid: Grid1D) -> StateDerivative:
    """The same derivatives assembled from the material (U_m-frame) form and converted.

    Agrees with rhs_volume_full to O(dx^2); used as a cross-form residual check.
    """
    require_valid(state)
    fl, d, P = full_model_fluxes(state, coeffs, gas, grid)
    a, v, u, e, j = state.a_n, state.v_bar, state.u_m, state.e_in, fl.j

    def material(f, parity):
        return -u * ddx(f, grid, parity)

    da = material(a, EVEN) - a * ddx(u, grid, ODD)
    dv = material(v, EVEN) + (-div(a * v * j, grid) + a * fl.w) / a
    du = material(u, ODD) - div(a * P, grid, EVEN) / a
    spec_energy = 0.5 * u**2 + e - 0.5 * j**2
    de = material(spec_energy, EVEN) + (
        -div(a * (fl.q_prime + e * j), grid) - div(a * P * fl.u_v, grid)) / a
    dq = np.array([
        da,
        u * da + a * du,
        spec_energy * da + a * de,
        v * da + a * dv,
    ])
    return StateDerivative(ModelVariant.VOLUME_FULL, FULL_NAMES, dq)


def volume_equation_residual(state: FlowState, coeffs: TransportCoefficients, gas: GasModel,
                             grid: Grid1D) -> np.ndarray:
    """Compare the final specific-volume equation with the volume balance plus W.

    Both give A_n (p'/M) D v_bar/Dt; the final form combines Pi_Um and Pi_Jv into
    Pi_v and cancels the (p'/M) div(A_n J_v) term analytically.  Returns the
    pointwise difference (round-off if the two groupings agree).
    """
    fl, d, _ = full_model_fluxes(state, coeffs, gas, grid)
    a, j = state.a_n, fl.j
    via_w = (d.p / gas.M) * (-div(a * state.v_bar * j, grid) + a * fl.w)
    t = volume_production_terms(state, fl, gas, grid)
    final_form = (t["stress_flux_div"] + t["jj_strain"]
                  + (a / d.rho_bar) * fl.pi_v * ddx(j, grid, ODD)
                  + t["enthalpy_flux_div"])
    return via_w - final_form


_RHS = {
    ModelVariant.NSF_BASELINE: rhs_nsf_baseline,
    ModelVariant.BIVELOCITY_REDUCED: rhs_bivelocity_reduced,
    ModelVariant.VOLUME_FULL: rhs_volume_full,
    ModelVariant.KLIMONTOVICH: rhs_klimontovich,
}


def rhs(variant, state, coeffs, gas, grid) -> StateDerivative:
    return _RHS[ModelVariant.parse(variant)](state, coeffs, gas, grid)


def to_conserved(state: FlowState, variant, gas: GasModel, coeffs: TransportCoefficients,
                 grid: Grid1D) -> np.ndarray:
    variant = ModelVariant.parse(variant)
    u, e = state.u_m, state.e_in
    if variant is ModelVariant.VOLUME_FULL:
        a = state.a_n
        j = volume_flux(state, coeffs, grid, gas)
        return np.array([a, a * u, a * (0.5 * u**2 + e - 0.5 * j**2), a * state.v_bar])
    rho = gas.M * state.a_n
    return np.array([rho, rho * u, rho * (0.5 * u**2 + e)])


def from_conserved(q: np.ndarray, variant, gas: GasModel, coeffs: TransportCoefficients,
                   grid: Grid1D) -> FlowState:
    """Recover primitives.  Non-positive results surface through validation, not here."""
    variant = ModelVariant.parse(variant)
    with np.errstate(divide="ignore", invalid="ignore"):
        if variant is ModelVariant.VOLUME_FULL:
            a, mom, energy, phi = q
            u = mom / a
            v = phi / a
            rho = gas.M / v
            j = coeffs.kappa_m * ddx(rho, grid, EVEN) / rho if coeffs.kappa_m else 0.0
            e = energy / a - 0.5 * u**2 + 0.5 * j**2
            return FlowState(a_n=a, v_bar=v, u_m=u, e_in=e)
        rho, mom, energy = q
        u = mom / rho
        return FlowState.from_density(rho, u, energy / rho - 0.5 * u**2, gas)


def make_rhs(variant, coeffs: TransportCoefficients, gas: GasModel, grid: Grid1D,
             source: Callable | None = None) -> Callable[[float, np.ndarray], np.ndarray]:
    """Conservative-variable RHS ``f(t, q) -> dq/dt`` for the integrator."""
    variant = ModelVariant.parse(variant)
    fn = _RHS[variant]

    def f(t, q):
        st = from_conserved(q, variant, gas, coeffs, grid)
        dq = fn(st, coeffs, gas, grid).data
        if source is not None:
            dq = dq + source(t)
        return dq

    return f
