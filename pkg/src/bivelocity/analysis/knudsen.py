"""Reference scales, nondimensional entropy terms and Knudsen-order slope fits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..state import FlowState, GasModel, Grid1D, TransportCoefficients
from .entropy import VOLUME_KN_ORDERS, EntropyBudget


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceScales:
    """Mean free path ``lam``, macroscopic length ``L``, molecular speed ``C0``,
    reference density ``rho0`` and temperature ``T0``.
    """

    lam: float
    L: float
    C0: float
    rho0: float = 1.0
    T0: float = 1.0
    M: float = 1.0

    def __post_init__(self):
        for name in ("lam", "L", "C0", "rho0", "T0", "M"):
            if not getattr(self, name) > 0:
                raise ValueError(f"reference scale {name} must be positive")

    @classmethod
    def for_gas(cls, kn: float, L: float, gas: GasModel, rho0: float = 1.0, T0: float = 1.0):
        """C0 = sqrt(R T0)."""
        return cls(lam=kn * L, L=L, C0=float(np.sqrt(gas.R * T0)), rho0=rho0, T0=T0, M=gas.M)

    @property
    def kn(self) -> float:
        return self.lam / self.L

    @property
    def mu0(self) -> float:
        return self.rho0 * self.C0 * self.lam

    @property
    def kappa_m0(self) -> float:
        return self.mu0 / self.rho0

    @property
    def t0(self) -> float:
        return self.lam / self.C0

    @property
    def kappa_h0(self) -> float:
        return self.mu0 * self.C0**2 / self.T0

    @property
    def s0(self) -> float:
        return self.lam**3 / (self.L * self.T0 * self.t0**2)

    @property
    def entropy_rate_scale(self) -> float:
        """Dimensional A_n T' Ds/Dt corresponding to one nondimensional unit."""
        return self.rho0 * self.T0 * self.s0 / (self.t0 * self.M)

    def coefficients(self, mu_star=1.0, kappa_h_star=1.0, kappa_m_star=1.0, kappa_klim_star=0.0,
                     power_law_s=0.0) -> TransportCoefficients:
        return TransportCoefficients(
            mu=mu_star * self.mu0,
            kappa_h=kappa_h_star * self.kappa_h0,
            kappa_m=kappa_m_star * self.kappa_m0,
            kappa_klim=kappa_klim_star * self.kappa_m0,
            power_law_s=power_law_s,
            T_ref=self.T0,
        )

    def dimensional_state(self, rho_star, u_star, T_star, gas: GasModel) -> FlowState:
        rho = self.rho0 * np.asarray(rho_star)
        T = self.T0 * np.asarray(T_star)
        return FlowState.from_density(rho, self.C0 * np.asarray(u_star), gas.c_v * T, gas)


def nondimensional_magnitudes(budget: EntropyBudget, scales: ReferenceScales, names=None) -> dict:
    """Integral of |term| over x* = x/L, in units of the reference entropy rate."""
    names = names or list(budget.terms)
    factor = 1.0 / (scales.entropy_rate_scale * scales.L)
    return {n: budget.magnitude(n) * factor for n in names}


@dataclass
class KnudsenFit:
    kn: np.ndarray
    magnitudes: dict
    slopes: dict
    expected: dict

    def rows(self):
        names = list(self.magnitudes)
        for i, kn in enumerate(self.kn):
            yield {"kn": kn, **{n: self.magnitudes[n][i] for n in names}}


def loglog_slope(x, y) -> float:
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return float(np.polyfit(x, y, 1)[0])


def knudsen_decomposition(budgets, scales, expected=None) -> KnudsenFit:
    """Fit log-log slopes of each term's nondimensional magnitude against Kn.

    ``budgets`` and ``scales`` are parallel sequences, one entry per sweep point;
    results are ordered by increasing Kn.
    """
    if len(budgets) != len(scales):
        raise ValueError("budgets and scales must have the same length")
    if len(budgets) < 4:
        raise InsufficientData(f"a Knudsen fit needs at least 4 sweep points, got {len(budgets)}")
    order = np.argsort([s.kn for s in scales])
    budgets = [budgets[i] for i in order]
    scales = [scales[i] for i in order]
    kn = np.array([s.kn for s in scales])
    per_point = [nondimensional_magnitudes(b, s) for b, s in zip(budgets, scales)]
    names = list(per_point[0])
    mags = {n: np.array([p[n] for p in per_point]) for n in names}
    slopes = {n: loglog_slope(kn, m) for n, m in mags.items() if np.all(m > 0)}
    if expected is None:
        expected = {n: budgets[0].orders.get(n) for n in names if budgets[0].orders.get(n)}
    return KnudsenFit(kn, mags, slopes, expected)


def kn_sweep(kn_values, gas: GasModel, n_cells: int = 128, L: float = 1.0, profile=None,
             mu_star=1.0, kappa_h_star=1.0, kappa_m_star=1.0, bc="periodic"):
    """Dimensional (state, coeffs, grid, scales) for each Kn at fixed starred fields.

    ``profile(x_star) -> (rho*, U*, T*)``; the default is a smooth periodic
    mix of density, velocity and temperature modes.
    """
    if profile is None:
        profile = default_sweep_profile
    grid = Grid1D(n_cells, L, bc)
    rho_s, u_s, T_s = profile(grid.x / L)
    out = []
    for kn in kn_values:
        scales = ReferenceScales.for_gas(kn, L, gas)
        coeffs = scales.coefficients(mu_star, kappa_h_star, kappa_m_star)
        state = scales.dimensional_state(rho_s, u_s, T_s, gas)
        out.append((state, coeffs, grid, scales))
    return out


def default_sweep_profile(xs):
    k = 2.0 * np.pi
    rho = 1.0 + 0.3 * np.sin(k * xs) + 0.1 * np.cos(2 * k * xs)
    u = 0.2 * np.cos(k * xs + 0.4)
    T = 1.0 + 0.2 * np.cos(k * xs + 1.1)
    return rho, u, T


__all__ = [
    "VOLUME_KN_ORDERS", "InsufficientData", "KnudsenFit", "ReferenceScales",
    "knudsen_decomposition", "kn_sweep", "loglog_slope", "nondimensional_magnitudes",
]
