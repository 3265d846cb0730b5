"""The `check` property suite: mechanical identities and entropy structure."""

from __future__ import annotations

import time

import numpy as np

from ..analysis.entropy import entropy_budget_klimontovich
from ..analysis.manufactured import closure_study, default_coefficients
from ..analysis.mechanics import mechanical_checks
from ..governing import ModelVariant
from ..state import GasModel, Grid1D, TransportCoefficients
from .runner import Check, positivity_samples, random_smooth_state


def mechanical_suite(variant=ModelVariant.BIVELOCITY_REDUCED, coeffs=None, gas=None) -> list[Check]:
    gas = gas or GasModel()
    coeffs = coeffs or TransportCoefficients(mu=0.01, kappa_h=0.015, kappa_m=0.01, kappa_klim=0.01)
    rep = mechanical_checks(variant, coeffs, gas)
    ok = lambda order: abs(order - 2.0) <= 0.2  # noqa: E731
    ctrl = rep.angular_momentum_control
    return [
        Check("galilean mismatch order", ok(rep.galilean.order), rep.galilean.order, "2.0 +/- 0.2"),
        Check("momentum equals mass flux", rep.integrability["momentum_is_mass_flux"] < 1e-12,
              rep.integrability["momentum_is_mass_flux"], "< 1e-12"),
        Check("momentum integral drift", rep.integrability["momentum_drift"] < 1e-10,
              rep.integrability["momentum_drift"], "< 1e-10"),
        Check("angular momentum identity order", ok(rep.angular_momentum.order),
              rep.angular_momentum.order, "2.0 +/- 0.2"),
        Check("antisymmetric control does not converge", ctrl.order < 0.5 and ctrl.errors[-1] > 1e-3,
              ctrl.errors[-1], "residual stays O(1)"),
        Check("center-of-mass residual order", ok(rep.center_of_mass.order), rep.center_of_mass.order,
              "2.0 +/- 0.2"),
    ]


def entropy_suite(gas=None, n_fields=200, seed=11) -> list[Check]:
    gas = gas or GasModel()
    rng = np.random.default_rng(seed)
    grid = Grid1D(128, 1.0)
    coeffs = TransportCoefficients(mu=0.01, kappa_h=0.015, kappa_m=0.01, kappa_klim=0.01)
    lo, hi = np.inf, -np.inf
    for _ in range(n_fields):
        c = entropy_budget_klimontovich(random_smooth_state(rng, grid, gas), coeffs, gas, grid).terms["curly"]
        lo, hi = min(lo, float(c.min())), max(hi, float(c.max()))
    prod = float(positivity_samples(rng, 1000).min())
    cs = closure_study(default_coefficients(), gas)
    return [
        Check("-Pi_Um:grad U_m non-negative", prod >= -1e-14, prod, ">= -1e-14"),
        Check("curly group takes both signs", lo < 0 < hi, min(-lo, hi), "both signs"),
        Check("entropy budget closure order", cs.order >= 1.8, cs.order, ">= 2 (fit tol 0.2)"),
    ]


def run_checks() -> list[Check]:
    return mechanical_suite() + entropy_suite()


def format_table(checks) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  status  {'value':>12}  target"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  {float(c.value):>12.4g}  {c.target}")
    return "\n".join(lines)


if __name__ == "__main__":
    t0 = time.perf_counter()
    print(format_table(run_checks()))
    print(f"{time.perf_counter() - t0:.1f} s")
