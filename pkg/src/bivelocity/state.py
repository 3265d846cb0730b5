"""Gas model, transport coefficients, grid and flow state.

All quantities are SI. The gas is a monatomic ideal gas, so the internal
energy, temperature and kinetic pressure are tied together by
``e_in = c_v T`` with ``c_v = 3R/2`` and ``3 p = 2 rho e_in``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

GAMMA = 5.0 / 3.0


class ValidationError(ValueError):
    """A flow state left the admissible set (non-positive density, volume or energy)."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations or []


@dataclass(frozen=True)
class GasModel:
    M: float = 1.0
    R: float = 1.0

    def __post_init__(self):
        if not (self.M > 0 and self.R > 0):
            raise ValueError(f"GasModel needs M > 0 and R > 0, got M={self.M}, R={self.R}")

    @property
    def c_v(self) -> float:
        return 1.5 * self.R

    @property
    def gamma(self) -> float:
        return GAMMA

    def sound_speed(self, T):
        return np.sqrt(GAMMA * self.R * np.asarray(T, dtype=float))


@dataclass(frozen=True)
class TransportCoefficients:
    """Constant (or power-law viscosity) transport coefficients.

    ``eta`` is not a free parameter: it is always ``2/3 mu`` so that the
    shear stress stays trace-free.  ``kappa_h`` is the absolute heat
    conductivity; the constitutive module divides it by the density where
    the per-mass form is needed.
    """

    mu: float = 0.0
    kappa_h: float = 0.0
    kappa_m: float = 0.0
    kappa_klim: float = 0.0
    power_law_s: float = 0.0
    T_ref: float = 1.0
    eta: float = field(init=False)

    def __post_init__(self):
        for name in ("mu", "kappa_h", "kappa_m", "kappa_klim"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"transport coefficient {name} must be >= 0, got {value}")
        if self.T_ref <= 0:
            raise ValueError("T_ref must be positive")
        object.__setattr__(self, "eta", 2.0 / 3.0 * self.mu)

    def viscosity(self, T=None):
        """mu'(T) = mu0 (T/T_ref)**s; a scalar when s == 0 or T is None."""
        if self.power_law_s == 0.0 or T is None:
            return self.mu
        return self.mu * (np.asarray(T) / self.T_ref) ** self.power_law_s

    def bulk(self, T=None):
        return 2.0 / 3.0 * self.viscosity(T)

    def replace(self, **changes) -> "TransportCoefficients":
        changes.pop("eta", None)
        return replace(self, **changes)


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    length: float
    bc: Literal["periodic", "reflective"] = "periodic"

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 8:
            raise ValueError(f"Grid1D needs an integer n_cells >= 8, got {self.n_cells}")
        if not self.length > 0:
            raise ValueError("Grid1D length must be positive")
        if self.bc not in ("periodic", "reflective"):
            raise ValueError(f"unknown boundary kind {self.bc!r}")

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def x(self) -> np.ndarray:
        """Cell centres."""
        return (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class FlowState:
    """Structure-of-arrays flow state.

    a_n    number density A_n
    v_bar  mean empty volume per molecule
    u_m    mass velocity U_m
    e_in   specific internal energy e'_in
    """

    a_n: np.ndarray
    v_bar: np.ndarray
    u_m: np.ndarray
    e_in: np.ndarray

    def __post_init__(self):
        arrays = [np.array(getattr(self, k), dtype=float) for k in ("a_n", "v_bar", "u_m", "e_in")]
        n = arrays[0].shape
        if any(a.shape != n or a.ndim != 1 for a in arrays):
            raise ValueError("FlowState fields must be 1D arrays of equal length")
        for name, arr in zip(("a_n", "v_bar", "u_m", "e_in"), arrays):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_density(cls, rho, u_m, e_in, gas: GasModel) -> "FlowState":
        """Reduced-model state: M A_n = rho = M / v_bar."""
        rho = np.asarray(rho, dtype=float)
        return cls(a_n=rho / gas.M, v_bar=gas.M / rho, u_m=u_m, e_in=e_in)

    @property
    def n_cells(self) -> int:
        return self.a_n.size

    def copy_with(self, **fields) -> "FlowState":
        return replace(self, **fields)

    def rho_bar(self, gas: GasModel) -> np.ndarray:
        return gas.M / self.v_bar

    def pressure(self, gas: GasModel) -> np.ndarray:
        return 2.0 / 3.0 * self.rho_bar(gas) * self.e_in

    def temperature(self, gas: GasModel) -> np.ndarray:
        return self.e_in / gas.c_v

    def identification_drift(self, gas: GasModel) -> np.ndarray:
        """|M A_n v_bar / M - 1|, zero while rho_bar = M A_n holds."""
        return np.abs(self.a_n * self.v_bar - 1.0)


@dataclass(frozen=True)
class Derived:
    rho_bar: np.ndarray
    p: np.ndarray
    T: np.ndarray


def validate(state: FlowState) -> list[tuple[str, int, float]]:
    """Return every positivity violation as (field, cell index, value); empty when ok."""
    violations = []
    for name in ("a_n", "v_bar", "e_in"):
        arr = getattr(state, name)
        bad = np.flatnonzero(~(arr > 0))
        violations.extend((name, int(i), float(arr[i])) for i in bad)
    bad = np.flatnonzero(~np.isfinite(state.u_m))
    violations.extend(("u_m", int(i), float(state.u_m[i])) for i in bad)
    return violations


def require_valid(state: FlowState) -> None:
    violations = validate(state)
    if violations:
        name, i, value = violations[0]
        raise ValidationError(
            f"invalid flow state: {name}[{i}] = {value!r} ({len(violations)} violation(s))",
            violations,
        )


def derived_quantities(state: FlowState, gas: GasModel) -> Derived:
    require_valid(state)
    rho = state.rho_bar(gas)
    return Derived(rho_bar=rho, p=2.0 / 3.0 * rho * state.e_in, T=state.e_in / gas.c_v)
