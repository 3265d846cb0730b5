"""Linear plane-wave dispersion of the 1D model variants.

Perturbations ``exp(i (k x - omega t))`` about a uniform gas at rest give a
matrix whose entries are polynomials in k.  Its determinant is a polynomial
in k whose roots come from the eigenvalues of the companion matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from ..governing import ModelVariant
from ..state import GasModel, TransportCoefficients


class DispersionError(RuntimeError):
    pass


@dataclass
class DispersionResult:
    model: ModelVariant
    omega: np.ndarray
    roots: list            # all roots k(omega) per frequency
    k: np.ndarray          # acoustic (forward, decaying) branch
    phase_speed: np.ndarray
    attenuation: np.ndarray


def _poly_det(m):
    """Determinant of a square matrix of polynomial coefficient arrays (ascending powers)."""
    n = len(m)
    if n == 1:
        return np.asarray(m[0][0], dtype=complex)
    total = np.zeros(1, dtype=complex)
    for col in range(n):
        entry = np.asarray(m[0][col], dtype=complex)
        if not np.any(entry):
            continue
        minor = [row[:col] + row[col + 1:] for row in m[1:]]
        term = P.polymul(entry, _poly_det(minor))
        total = P.polyadd(total, term if col % 2 == 0 else -term)
    return total


def companion_roots(coeffs, rtol=1e-13):
    """Roots of c0 + c1 k + ... + cn k^n via companion-matrix eigenvalues."""
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        raise DispersionError("identically zero dispersion polynomial")
    c = np.trim_zeros(np.where(np.abs(c) > rtol * scale, c, 0), "b")
    n = c.size - 1
    if n < 1:
        return np.array([], dtype=complex)
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    try:
        roots = np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:
        raise DispersionError(f"companion eigenvalue solve failed: {exc}") from exc
    if not np.all(np.isfinite(roots)):
        raise DispersionError("non-finite dispersion roots")
    return roots


def dispersion_matrix(model, omega, rho0, T0, coeffs: TransportCoefficients, gas: GasModel):
    """Rows are the linearised balances; entries are coefficient arrays in k."""
    model = ModelVariant.parse(model)
    w = complex(omega)
    R, cv = gas.R, gas.c_v
    e0 = cv * T0
    p0 = rho0 * R * T0
    mu = coeffs.viscosity(T0)
    kh = coeffs.kappa_h
    i = 1j
    if model in (ModelVariant.NSF_BASELINE, ModelVariant.BIVELOCITY_REDUCED):
        km = coeffs.kappa_m if model is ModelVariant.BIVELOCITY_REDUCED else 0.0
        # unknowns (rho', u', T'); u_v' = u' + i km k rho'/rho0
        return [
            [[-i * w], [0, i * rho0], [0]],
            [[0, i * R * T0, 0, i * 4 / 3 * mu * km / rho0], [-i * w * rho0, 0, 4 / 3 * mu], [0, i * R * rho0]],
            [[0, 0, -p0 * km / rho0], [0, i * p0], [-i * w * rho0 * cv, 0, kh]],
        ]
    if model is ModelVariant.KLIMONTOVICH:
        k_ = coeffs.kappa_klim
        return [
            [[-i * w, 0, k_], [0, i * rho0], [0]],
            [[0, i * R * T0], [-i * w * rho0, 0, 4 / 3 * mu + k_ * rho0], [0, i * R * rho0]],
            [[-i * w * cv * T0, 0, k_ * cv * T0], [0, i * (rho0 * e0 + p0)],
             [-i * w * rho0 * cv, 0, kh + k_ * rho0 * cv]],
        ]
    # full volume model, unknowns (A_n', u', e', v_bar'); v_bar0 = 1/A0
    a0 = rho0 / gas.M
    v0 = 1.0 / a0
    km = coeffs.kappa_m
    phi0 = a0 * v0
    r = a0 / rho0
    return [
        [[-i * w], [0, i * a0], [0], [0]],
        # A_n (p' / rho_bar) = (2/3) A_n e: no pressure dependence on v_bar
        [[0, i * p0 / rho0], [-i * w * a0, 0, r * 4 / 3 * mu], [0, i * 2 / 3 * a0],
         [0, 0, 0, -i * r * 4 / 3 * mu * km / v0]],
        [[-i * w * e0], [0, i * a0 * (e0 + p0 / rho0)], [-i * w * a0, 0, a0 * kh / (rho0 * cv)],
         [0, 0, a0 * (p0 / rho0) * km / v0]],
        [[-i * w * v0], [0, i * phi0], [0], [-i * w * a0, 0, phi0 * km / v0]],
    ]


def dispersion_polynomial(model, omega, rho0, T0, coeffs, gas):
    return _poly_det(dispersion_matrix(model, omega, rho0, T0, coeffs, gas))


def dispersion_relation(model, rho0, T0, coeffs: TransportCoefficients, gas: GasModel,
                        omegas) -> DispersionResult:
    """All roots per frequency plus the acoustic branch (Re k > 0, Im k >= 0).

    The branch starts at the root nearest omega / c_s for the first frequency
    and is continued by nearest-root tracking; pass omegas in increasing order.
    """
    model = ModelVariant.parse(model)
    omegas = np.asarray(omegas, dtype=float)
    c_s = float(gas.sound_speed(T0))
    all_roots, branch = [], []
    guess = omegas[0] / c_s
    for w in omegas:
        poly = dispersion_polynomial(model, w, rho0, T0, coeffs, gas)
        roots = companion_roots(poly)
        all_roots.append(roots)
        forward = roots[(roots.real > 0) & (roots.imag >= -1e-12 * np.abs(roots))]
        if forward.size == 0:
            raise DispersionError(f"no forward-decaying root at omega={w}")
        k = forward[np.argmin(np.abs(forward - guess))]
        branch.append(k)
        nxt = omegas[min(len(branch), len(omegas) - 1)]
        guess = k * (nxt / w)
    k = np.array(branch)
    return DispersionResult(model, omegas, all_roots, k, omegas / k.real, k.imag)


def classical_attenuation(omega, rho0, T0, coeffs: TransportCoefficients, gas: GasModel):
    """Low-frequency viscous plus thermal absorption of the Navier-Stokes-Fourier gas."""
    c = gas.sound_speed(T0)
    cp = gas.gamma * gas.c_v
    return omega**2 / (2 * rho0 * c**3) * (4 / 3 * coeffs.viscosity(T0)
                                          + (gas.gamma - 1) * coeffs.kappa_h / cp)


def temporal_root(model, k, rho0, T0, coeffs: TransportCoefficients, gas: GasModel,
                  tol=1e-13, max_iter=100) -> complex:
    """Complex omega of the forward acoustic mode at real wavenumber k.

    Secant iteration on det(omega) with the polynomial in k evaluated at k;
    the decay rate of a standing wave is -Im(omega).
    """
    def f(w):
        return P.polyval(k, dispersion_polynomial(model, w, rho0, T0, coeffs, gas))

    w0 = complex(gas.sound_speed(T0) * k)
    w1 = w0 * (1 - 1e-6j)
    f0, f1 = f(w0), f(w1)
    for _ in range(max_iter):
        if f1 == f0:
            break
        w2 = w1 - f1 * (w1 - w0) / (f1 - f0)
        w0, f0, w1, f1 = w1, f1, w2, f(w2)
        if abs(w1 - w0) <= tol * abs(w1):
            return w1
    raise DispersionError(f"temporal root did not converge at k={k}")
