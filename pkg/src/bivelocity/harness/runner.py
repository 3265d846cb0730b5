"""Scenario execution: build the initial state, run the task, write the output bundle."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..analysis import dispersion as disp
from ..analysis.entropy import (VOLUME_KN_ORDERS, entropy_budget_klimontovich, entropy_budget_reduced,
                                entropy_budget_volume)
from ..analysis.knudsen import loglog_slope, nondimensional_magnitudes
from ..analysis.manufactured import (ManufacturedProfile, closure_study, order_study, profile_fields)
from ..analysis.mechanics import (center_of_mass_convergence, galilean_convergence, gaussian_pulse)
from ..analysis.rotation import rotation_kn_sweep
from ..constitutive import compute_fluxes, shear_stress_tensor
from ..governing import ModelVariant, rhs
from ..solver import Problem, run
from ..state import GAMMA, FlowState, GasModel, Grid1D
from ..stencils import ODD, ddx
from . import io
from .config import ScenarioConfig, expand_sweep

log = logging.getLogger(__name__)

CONSERVED_LABELS = {
    ModelVariant.VOLUME_FULL: ("a_n", "momentum", "energy", "volume"),
}
DEFAULT_LABELS = ("mass", "momentum", "energy")


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    target: str

    def row(self):
        return (self.name, "PASS" if self.passed else "FAIL", self.value, self.target)


@dataclass
class RunResult:
    name: str
    directory: Path
    metrics: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    files: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# -- initial conditions -----------------------------------------------------------

def profile_arrays(cfg: ScenarioConfig, xs_star):
    """(rho*, U*, T*, A_n v_bar) on unit coordinates for the configured profile."""
    prm = cfg.initial.params
    ones = np.ones_like(xs_star)
    name = cfg.initial.profile
    if name == "uniform":
        return prm.get("rho", 1.0) * ones, prm.get("u", 0.0) * ones, prm.get("T", 1.0) * ones, ones
    if name == "sinusoidal-acoustic":
        eps, m = prm.get("amplitude", 1e-3), prm.get("mode", 1)
        c = np.cos(2 * np.pi * m * xs_star)
        rho0, T0 = prm.get("rho0", 1.0), prm.get("T0", 1.0)
        # adiabatic: T'/T0 = (gamma - 1) rho'/rho0, fluid at rest
        return rho0 * (1 + eps * c), 0.0 * ones, T0 * (1 + (GAMMA - 1) * eps * c), ones
    if name == "gaussian-pulse":
        rho, u, T = gaussian_pulse(xs_star, prm.get("amplitude", 0.2), prm.get("width", 0.08),
                                   prm.get("centre", 0.5), prm.get("velocity", 0.05))
        return rho, u, T, ones
    if name == "manufactured":
        return profile_fields(manufactured_profile(cfg), xs_star)
    raise ValueError(f"profile {name!r} has no 1D initial state")


def manufactured_profile(cfg: ScenarioConfig) -> ManufacturedProfile:
    prm = cfg.initial.params
    return ManufacturedProfile(L=cfg.grid.length, **{k: float(v) for k, v in prm.items()})


def initial_state(cfg: ScenarioConfig, grid: Grid1D | None = None) -> FlowState:
    grid = grid or cfg.make_grid()
    gas = cfg.gas_model()
    rho, u, T, ratio = profile_arrays(cfg, grid.x / grid.length)
    if cfg.dimensionless:
        st = cfg.scales().dimensional_state(rho, u, T, gas)
    else:
        st = FlowState.from_density(rho, u, gas.c_v * T, gas)
    if cfg.variant is ModelVariant.VOLUME_FULL and not np.all(ratio == 1.0):
        st = st.copy_with(v_bar=ratio * st.v_bar)
    return st


def drift_scales(state: FlowState, initial, gas: GasModel, grid: Grid1D) -> np.ndarray:
    """Per-variable normalisation of integral drift.

    Momentum may integrate to zero, so it is measured against the mass-weighted
    signal speed ``sum(A (|U| + c_s)) dx``; the other integrals against themselves.
    """
    scale = np.abs(np.array(initial, dtype=float))
    speed = np.abs(state.u_m) + gas.sound_speed(state.temperature(gas))
    weight = state.a_n if scale.size == 4 else gas.M * state.a_n
    scale[1] = max(scale[1], float(np.sum(weight * speed) * grid.dx))
    return np.where(scale > 0, scale, 1.0)


def conserved_labels(variant):
    return CONSERVED_LABELS.get(ModelVariant.parse(variant), DEFAULT_LABELS)


# -- tasks --------------------------------------------------------------------------

def _budget(variant, state, coeffs, gas, grid):
    if variant is ModelVariant.VOLUME_FULL:
        return entropy_budget_volume(state, None, coeffs, gas, grid)
    if variant is ModelVariant.KLIMONTOVICH:
        return entropy_budget_klimontovich(state, coeffs, gas, grid)
    return entropy_budget_reduced(state, None, coeffs, gas, grid)


def standing_wave_decay(times, signal):
    """Decay rate from the log of successive |signal| peaks (parabolic peak refinement)."""
    s = np.abs(np.asarray(signal))
    t = np.asarray(times)
    idx = [i for i in range(1, s.size - 1) if s[i] >= s[i - 1] and s[i] > s[i + 1]]
    if len(idx) < 3:
        raise ValueError("not enough envelope peaks to fit a decay rate")
    pt, pv = [], []
    for i in idx:
        y0, y1, y2 = np.log(s[i - 1:i + 2])
        denom = y0 - 2 * y1 + y2
        off = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        h = 0.5 * (t[i + 1] - t[i - 1])
        pt.append(t[i] + off * h)
        pv.append(y1 - 0.25 * (y0 - y2) * off)
    return -float(np.polyfit(pt, pv, 1)[0])


def task_simulate(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, coeffs, grid = cfg.gas_model(), cfg.coefficients(), cfg.make_grid()
    variant = cfg.variant
    st = initial_state(cfg, grid)
    mode_signal = []
    m = cfg.initial.params.get("mode", 1)
    basis = np.sin(2 * np.pi * m * grid.x / grid.length)

    def on_snapshot(t, s):
        mode_signal.append((t, 2.0 / grid.n_cells * float(np.dot(s.u_m, basis))))

    tr = run(Problem(variant, st, coeffs, gas, grid, cfg.integrator_config()), on_snapshot)
    labels = conserved_labels(variant)
    table = tr.integral_table()
    drift = (table[:, 2:] - table[0, 2:]) / drift_scales(st, table[0, 2:], gas, grid)
    header = ["step", "t", "dt"] + [f"integral_{n}" for n in labels] + [f"drift_{n}" for n in labels]
    rows = [[i, *row, *d] for i, (row, d) in enumerate(zip(table, drift))]
    res.files.append(io.write_csv(out / "timeseries.csv", header, rows))
    for k, snap in enumerate(tr.snapshots):
        res.files.append(io.write_snapshot(out / "snapshots" / f"snapshot_{k:05d}.csv", snap, gas, grid))
    io.write_csv(out / "snapshots" / "index.csv", ["index", "t"], enumerate(tr.times))
    res.metrics["steps"] = len(table) - 1
    res.metrics["t_final"] = float(table[-1, 0])
    max_drift = np.max(np.abs(drift), axis=0)
    for n, d in zip(labels, max_drift):
        res.metrics[f"max_drift_{n}"] = float(d)
    plots = [{"name": "conserved_drift", "csv": "timeseries.csv", "x": "t",
              "y": [f"drift_{n}" for n in labels], "title": "relative drift of domain integrals"}]
    if "drift" in cfg.diagnostics and cfg.grid.bc == "periodic":
        conserved = labels[:3]
        worst = max(float(d) for n, d in zip(labels, max_drift) if n in conserved)
        res.checks.append(Check("conservation drift", worst < 1e-10, worst, "< 1e-10 relative"))
    if "entropy" in cfg.diagnostics:
        rows, names = [], None
        for t, snap in zip(tr.times, tr.snapshots):
            b = _budget(variant, snap, coeffs, gas, grid)
            names = names or list(b.terms)
            rows.append([t] + [b.integrated(n) for n in names])
        res.files.append(io.write_csv(out / "entropy_budget.csv", ["t"] + names, rows))
        plots.append({"name": "entropy_budget", "csv": "entropy_budget.csv", "x": "t", "y": names,
                      "title": "integrated entropy-rate terms"})
    if cfg.initial.profile == "sinusoidal-acoustic":
        t, a = (np.array(v) for v in zip(*mode_signal))
        io.write_csv(out / "mode_amplitude.csv", ["t", "u_mode"], zip(t, a))
        rate = standing_wave_decay(t, a)
        k = 2 * np.pi * m / grid.length
        prm = cfg.initial.params
        w = disp.temporal_root(variant, k, prm.get("rho0", 1.0), prm.get("T0", 1.0), coeffs, gas)
        rel = abs(rate + w.imag) / abs(w.imag)
        res.metrics.update(decay_rate=rate, predicted_decay_rate=-w.imag, decay_rel_error=rel)
        res.checks.append(Check("acoustic decay vs dispersion root", rel < 0.02, rel, "< 2% relative"))
        plots.append({"name": "mode_amplitude", "csv": "mode_amplitude.csv", "x": "t", "y": ["u_mode"],
                      "title": "standing-wave velocity mode"})
    return plots


def task_entropy_budget(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, coeffs, grid = cfg.gas_model(), cfg.coefficients(), cfg.make_grid()
    st = initial_state(cfg, grid)
    fl = compute_fluxes(st, coeffs, gas, grid, with_w=False)
    b = entropy_budget_volume(st, fl, coeffs, gas, grid)
    names = list(b.terms)
    io.write_csv(out / "budget_fields.csv", ["x"] + names + ["assembled"],
                 zip(grid.x, *[b.terms[n] for n in names], b.extras["assembled"]))
    closure = float(np.max(np.abs(b.total() - b.extras["assembled"])))
    res.metrics["assembly_mismatch"] = closure
    for n in names:
        res.metrics[f"integral_{n}"] = b.integrated(n)
        res.metrics[f"l1_{n}"] = b.magnitude(n)
    if cfg.reference is not None:
        for n, v in nondimensional_magnitudes(b, cfg.scales()).items():
            res.metrics[f"nondim_{n}"] = v
        res.metrics["kn"] = cfg.reference.kn
    return [{"name": "budget_fields", "csv": "budget_fields.csv", "x": "x", "y": names,
             "title": "volume-model entropy-rate terms"}]


def task_rotation(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas = cfg.gas_model()
    kn_values = cfg.analysis.kn_values or [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]
    omega_star = cfg.initial.params.get("omega_star", cfg.analysis.omega_star or 0.5)
    pts = rotation_kn_sweep(kn_values, gas, omega_star=omega_star, n_samples=cfg.analysis.n_samples or 33)
    header = ["kn", "omega", "pi_um_inf", "pi_um_bound", "q_s_inf_scaled", "jv_jv_nondim", "jv_jv_min"]
    rows = [[p["kn"], p["omega"], p["pi_um_inf"], p["pi_um_bound"], p["q_s_inf_scaled"],
             p["jv_jv_nondim"], p["jv_jv_min"]] for p in pts]
    io.write_csv(out / "rotation.csv", header, rows)
    slope = loglog_slope([p["kn"] for p in pts], [p["jv_jv_nondim"] for p in pts])
    worst_pi = max(p["pi_um_inf"] / p["pi_um_bound"] for p in pts)
    worst_q = max(p["q_s_inf_scaled"] for p in pts)
    min_prod = min(p["jv_jv_min"] for p in pts)
    res.metrics.update(jv_jv_slope=slope, pi_um_ratio=worst_pi, q_s_scaled=worst_q, jv_jv_min=min_prod)
    res.checks += [
        Check("rotation Pi_Um / (mu Omega)", worst_pi < 1e-12, worst_pi, "< 1e-12"),
        Check("rotation q_s (reference-scaled)", worst_q < 1e-12, worst_q, "< 1e-12"),
        Check("rotation Pi_Jv production positive", min_prod > 0, min_prod, "> 0"),
        Check("rotation Pi_Jv production Kn slope", abs(slope - 3) <= 0.15, slope, "3 +/- 0.15"),
    ]
    return [{"name": "rotation_kn", "csv": "rotation.csv", "x": "kn", "y": ["jv_jv_nondim"],
             "title": "Pi_Jv production vs Kn", "logx": True, "logy": True}]


def _order_report(name, out, conv, res, target=2.0, tol=0.2):
    io.write_csv(out / f"{name}.csv", ["n_cells", "h", "error"], zip(conv.n_cells, conv.h, conv.errors))
    res.metrics[f"{name}_order"] = conv.order
    res.checks.append(Check(f"{name} order", abs(conv.order - target) <= tol, conv.order,
                            f"{target} +/- {tol}"))
    return {"name": name, "csv": f"{name}.csv", "x": "h", "y": ["error"], "title": f"{name} convergence",
            "logx": True, "logy": True}


def task_galilean(cfg: ScenarioConfig, out: Path, res: RunResult):
    from ..analysis.mechanics import galilean_mismatch

    gas, coeffs = cfg.gas_model(), cfg.coefficients()
    n_list = cfg.analysis.n_list or [64, 128, 256]
    c = cfg.analysis.boost if cfg.analysis.boost is not None else 0.5
    t_end = cfg.analysis.t_end or 0.5

    def profile(xs):
        rho, u, T, _ = profile_arrays(cfg, xs)
        return rho, u, T

    conv = galilean_convergence(cfg.variant, coeffs, gas, n_list, c=c, t_end=t_end,
                                L=cfg.grid.length, profile=profile)
    # the two final states at the finest resolution
    _, (a, b) = galilean_mismatch(cfg.variant, n_list[-1], coeffs, gas, c=c, t_end=t_end,
                                  L=cfg.grid.length, profile=profile)
    grid = Grid1D(n_list[-1], cfg.grid.length)
    io.write_snapshot(out / "frame_rest.csv", a, gas, grid)
    io.write_snapshot(out / "frame_boosted.csv", b, gas, grid)
    return [_order_report("galilean_mismatch", out, conv, res)]


def task_center_of_mass(cfg: ScenarioConfig, out: Path, res: RunResult):
    conv = center_of_mass_convergence(cfg.variant, cfg.coefficients(), cfg.gas_model(),
                                      cfg.analysis.n_list or [64, 128, 256],
                                      t_end=cfg.analysis.t_end or 0.05, L=cfg.grid.length)
    return [_order_report("center_of_mass_residual", out, conv, res)]


def random_smooth_state(rng, grid: Grid1D, gas: GasModel, modes=4):
    x = grid.x / grid.length

    def series(amp):
        out = np.zeros_like(x)
        for m in range(1, modes + 1):
            out += rng.uniform(-amp, amp) / m * np.sin(2 * np.pi * m * x + rng.uniform(0, 2 * np.pi))
        return out

    rho = 1.0 + series(0.15)
    u = series(0.2)
    T = 1.0 + series(0.15)
    return FlowState.from_density(rho, u, gas.c_v * T, gas)


def task_model_reduction(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, grid = cfg.gas_model(), cfg.make_grid()
    base = cfg.coefficients().replace(kappa_m=0.0, kappa_klim=0.0)
    rng = np.random.default_rng(cfg.analysis.seed if cfg.analysis.seed is not None else 0)
    rows, worst = [], {}
    for i in range(cfg.analysis.n_fields or 10):
        st = random_smooth_state(rng, grid, gas)
        ref = rhs(ModelVariant.NSF_BASELINE, st, base, gas, grid).data
        scale = np.max(np.abs(ref), axis=1, keepdims=True)
        full = rhs(ModelVariant.VOLUME_FULL, st, base, gas, grid)
        # compare the full model on the (rho, rho U, rho E) = M (A, A U, E) equations
        full3 = gas.M * full.data[:3]
        for name, d in (("BIVELOCITY_REDUCED", rhs(ModelVariant.BIVELOCITY_REDUCED, st, base, gas, grid).data),
                        ("KLIMONTOVICH", rhs(ModelVariant.KLIMONTOVICH, st, base, gas, grid).data),
                        ("VOLUME_FULL", full3)):
            rel = float(np.max(np.abs(d - ref) / scale))
            rows.append([i, name, rel])
            worst[name] = max(worst.get(name, 0.0), rel)
    io.write_csv(out / "reduction.csv", ["field", "variant", "max_rel_diff"], rows)
    for name, w in worst.items():
        res.metrics[f"max_rel_diff_{name}"] = w
        limit = 1e-12
        res.checks.append(Check(f"{name} degenerates to NSF", w <= limit, w, "<= 1e-12 relative"))
    return []


def positivity_samples(rng, n, mu=1.0):
    """min over random 3x3 velocity gradients of -Pi(grad U):grad U (must be >= 0)."""
    g = rng.normal(size=(n, 3, 3))
    pi = shear_stress_tensor(g, mu)
    return -np.einsum("...ij,...ij->...", pi, g)


def task_entropy_search(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, grid = cfg.gas_model(), cfg.make_grid()
    coeffs = cfg.coefficients()
    rng = np.random.default_rng(cfg.analysis.seed if cfg.analysis.seed is not None else 0)
    n = cfg.analysis.n_fields or 1000
    rows = []
    min_visc, curly_min, curly_max, resid_max = np.inf, np.inf, -np.inf, 0.0
    for i in range(n):
        st = random_smooth_state(rng, grid, gas)
        T = st.temperature(gas)
        fl = compute_fluxes(st, coeffs, gas, grid, with_w=False)
        visc = -fl.pi_um * ddx(st.u_m, grid, ODD) / T
        kb = entropy_budget_klimontovich(st, coeffs, gas, grid).terms["curly"]
        rb = entropy_budget_reduced(st, fl, coeffs, gas, grid)
        r = float(np.max(np.abs(rb.terms["residual"])))
        rows.append([i, float(visc.min()), float(kb.min()), float(kb.max()), r, rb.integrated("residual")])
        min_visc = min(min_visc, float(visc.min()))
        curly_min, curly_max = min(curly_min, float(kb.min())), max(curly_max, float(kb.max()))
        resid_max = max(resid_max, r)
    tensor_min = float(positivity_samples(rng, n).min())
    io.write_csv(out / "entropy_search.csv",
                 ["field", "min_viscous_production", "curly_min", "curly_max", "reduced_residual_max",
                  "reduced_residual_integral"], rows)
    res.metrics.update(min_viscous_production=min_visc, tensor_min_production=tensor_min,
                       curly_min=curly_min, curly_max=curly_max, reduced_residual_max=resid_max)
    worst = min(min_visc, tensor_min)
    res.checks += [
        Check("-Pi_Um:grad U_m >= -1e-14", worst >= -1e-14, worst, ">= -1e-14"),
        Check("curly group attains negative values", curly_min < 0, curly_min, "< 0"),
        Check("curly group attains positive values", curly_max > 0, curly_max, "> 0"),
    ]
    if coeffs.kappa_m > 0:
        res.checks.append(Check("reduced residual nonzero for kappa_m > 0", resid_max > 0, resid_max, "> 0"))
    return [{"name": "curly_range", "csv": "entropy_search.csv", "x": "field", "y": ["curly_min", "curly_max"],
             "title": "Klimontovich bracketed group range per field"}]


def task_manufactured(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, coeffs = cfg.gas_model(), cfg.coefficients()
    n_list = cfg.analysis.n_list or [32, 64, 128]
    t_end = cfg.analysis.t_end or 0.1
    from ..analysis.manufactured import manufactured_solution, solve_error, rhs_error

    sol = manufactured_solution(cfg.variant, coeffs, gas, manufactured_profile(cfg))
    errs = [solve_error(sol, n, t_end=t_end) for n in n_list]
    rerrs = [rhs_error(sol, n) for n in n_list]
    h = [cfg.grid.length / n for n in n_list]
    order, rorder = loglog_slope(h, errs), loglog_slope(h, rerrs)
    io.write_csv(out / "manufactured.csv", ["n_cells", "h", "solution_error", "rhs_error"],
                 zip(n_list, h, errs, rerrs))
    res.metrics.update(solver_order=order, rhs_order=rorder)
    res.checks += [
        Check("manufactured solver order", abs(order - 2) <= 0.2 or order > 2, order, ">= 2 (fit tol 0.2)"),
        Check("manufactured RHS order", abs(rorder - 2) <= 0.2 or rorder > 2, rorder, ">= 2 (fit tol 0.2)"),
    ]
    plots = [{"name": "manufactured", "csv": "manufactured.csv", "x": "h",
              "y": ["solution_error", "rhs_error"], "title": "manufactured-solution errors",
              "logx": True, "logy": True}]
    if cfg.variant is ModelVariant.VOLUME_FULL:
        cs = closure_study(coeffs, gas, n_list, manufactured_profile(cfg))
        io.write_csv(out / "entropy_closure.csv", ["n_cells", "h", "residual_l1"], zip(cs.n_cells, h, cs.errors))
        res.metrics["closure_order"] = cs.order
        res.checks.append(Check("entropy budget closure order", cs.order >= 1.8, cs.order,
                                ">= 2 (fit tol 0.2)"))
        plots.append({"name": "entropy_closure", "csv": "entropy_closure.csv", "x": "h", "y": ["residual_l1"],
                      "title": "Gibbs-path closure residual", "logx": True, "logy": True})
    return plots


def task_dispersion(cfg: ScenarioConfig, out: Path, res: RunResult):
    gas, coeffs = cfg.gas_model(), cfg.coefficients()
    omegas = np.array(cfg.analysis.omegas or [0.01, 0.5, 1.0, 2.0, 4.0, 8.0], dtype=float)
    rho0, T0 = cfg.initial.params.get("rho", 1.0), cfg.initial.params.get("T", 1.0)
    km = coeffs.kappa_m if coeffs.kappa_m > 0 else 1e-3
    rows = []
    results = {}
    cases = [("NSF_BASELINE", 0.0), ("BIVELOCITY_REDUCED", 0.0), ("BIVELOCITY_REDUCED", km),
             ("BIVELOCITY_REDUCED", 2 * km), ("VOLUME_FULL", km), ("KLIMONTOVICH", 0.0)]
    for model, k_m in cases:
        r = disp.dispersion_relation(model, rho0, T0, coeffs.replace(kappa_m=k_m), gas, omegas)
        results[(model, k_m)] = r
        for w, k, c, a in zip(r.omega, r.k, r.phase_speed, r.attenuation):
            rows.append([model, k_m, w, k.real, k.imag, c, a])
    io.write_csv(out / "dispersion.csv", ["model", "kappa_m", "omega", "k_real", "k_imag", "phase_speed",
                                          "attenuation"], rows)
    nsf = results[("NSF_BASELINE", 0.0)]
    c_s = float(gas.sound_speed(T0))
    speed_err = abs(nsf.phase_speed[0] - c_s) / c_s
    root_diff = max(float(np.max(np.abs(np.sort_complex(a) - np.sort_complex(b))))
                    for a, b in zip(results[("BIVELOCITY_REDUCED", 0.0)].roots, nsf.roots))
    d1 = np.abs(results[("BIVELOCITY_REDUCED", km)].attenuation - nsf.attenuation)
    d2 = np.abs(results[("BIVELOCITY_REDUCED", 2 * km)].attenuation - nsf.attenuation)
    grows_w = bool(np.all(np.diff(d1) > 0) and np.all(np.diff(d2) > 0))
    grows_k = bool(np.all(d2 > d1) and np.all(d1 > 0))
    res.metrics.update(low_freq_speed_rel_error=speed_err, kappa_m0_root_diff=root_diff,
                       attenuation_diff_max=float(d2.max()))
    res.checks += [
        Check("NSF low-frequency sound speed", speed_err < 5e-3, speed_err, "< 0.5%"),
        Check("bivelocity(kappa_m=0) roots equal NSF", root_diff <= 1e-10, root_diff, "<= 1e-10"),
        Check("attenuation difference grows with omega", grows_w, float(grows_w), "monotone"),
        Check("attenuation difference grows with kappa_m", grows_k, float(grows_k), "monotone"),
    ]
    return []


TASKS = {
    "simulate": task_simulate,
    "entropy-budget": task_entropy_budget,
    "rotation": task_rotation,
    "galilean": task_galilean,
    "center-of-mass": task_center_of_mass,
    "model-reduction": task_model_reduction,
    "entropy-search": task_entropy_search,
    "manufactured": task_manufactured,
    "dispersion": task_dispersion,
}


def _finish(cfg, out, res, plots):
    rows = [[k, v] for k, v in res.metrics.items()]
    io.write_csv(out / "metrics.csv", ["metric", "value"], rows)
    io.write_csv(out / "checks.csv", ["check", "status", "value", "target"], [c.row() for c in res.checks])
    if plots and cfg.output.plot_script:
        res.files.append(io.write_plot_script(out, plots))
    if plots and cfg.output.figures:
        res.files += io.render_figures(out, plots)


def run_scenario(cfg: ScenarioConfig, directory=None) -> RunResult:
    """Execute one (already expanded) scenario and write its output bundle."""
    out = io.ensure_dir(directory or cfg.output.directory)
    res = RunResult(cfg.name, out)
    res.files.append(io.write_manifest(out / "manifest.yaml", cfg.to_dict()))
    t0 = time.perf_counter()
    plots = TASKS[cfg.task](cfg, out, res)
    res.seconds = time.perf_counter() - t0
    _finish(cfg, out, res, plots)
    return res


def _run_one(args):
    label, cfg, directory = args
    res = run_scenario(cfg, directory)
    return label, res


def worker_count(default=1) -> int:
    raw = os.environ.get("BIVELOCITY_WORKERS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"BIVELOCITY_WORKERS must be an integer, got {raw!r}") from None
    return max(1, n)


def run_sweep(cfg: ScenarioConfig, directory=None, workers: int | None = None) -> tuple[list, RunResult]:
    """Run every expanded configuration (concurrently if workers > 1), then write the summary."""
    root = io.ensure_dir(directory or cfg.output.directory)
    jobs = [(label, c, root / label) for label, c in expand_sweep(cfg)]
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    # join barrier passed: deterministic summary in job order
    summary = write_summary(cfg, root, results)
    return results, summary


def write_summary(cfg: ScenarioConfig, root: Path, results) -> RunResult:
    summary = RunResult(cfg.name + "-summary", root)
    metric_names = sorted({k for _, r in results for k in r.metrics})
    axes = [a.parameter for a in cfg.sweep]
    rows = []
    for (label, r), values in zip(results, _axis_values(cfg)):
        rows.append([label, *values, *[r.metrics.get(k, "") for k in metric_names]])
    io.write_csv(root / "summary.csv", ["run", *axes, *metric_names], rows)
    summary.files.append(root / "summary.csv")
    plots = []
    if cfg.task == "entropy-budget" and axes == ["reference.kn"]:
        kn = np.array([r.metrics["kn"] for _, r in results])
        slope_rows = []
        tolerances = {1: 0.1, 2: 0.1, 3: 0.15}
        for term, order in VOLUME_KN_ORDERS.items():
            mags = np.array([r.metrics[f"nondim_{term}"] for _, r in results])
            slope = loglog_slope(kn, mags)
            tol = tolerances[order]
            slope_rows.append([term, order, slope, tol])
            summary.metrics[f"slope_{term}"] = slope
            summary.checks.append(Check(f"Kn slope {term}", abs(slope - order) <= tol, slope,
                                        f"{order} +/- {tol}"))
        io.write_csv(root / "slopes.csv", ["term", "expected", "fitted", "tolerance"], slope_rows)
        io.write_csv(root / "kn_magnitudes.csv", ["kn"] + [f"nondim_{t}" for t in VOLUME_KN_ORDERS],
                     [[k] + [r.metrics[f"nondim_{t}"] for t in VOLUME_KN_ORDERS] for k, (_, r) in zip(kn, results)])
        plots.append({"name": "kn_ordering", "csv": "kn_magnitudes.csv", "x": "kn",
                      "y": [f"nondim_{t}" for t in VOLUME_KN_ORDERS], "title": "entropy terms vs Kn",
                      "logx": True, "logy": True})
    for label, r in results:
        for c in r.checks:
            summary.checks.append(Check(f"{label}: {c.name}", c.passed, c.value, c.target))
    io.write_csv(root / "checks.csv", ["check", "status", "value", "target"], [c.row() for c in summary.checks])
    io.write_manifest(root / "manifest.yaml", cfg.to_dict(), {"runs": [label for label, _ in results]})
    if plots and cfg.output.plot_script:
        io.write_plot_script(root, plots)
    if plots and cfg.output.figures:
        io.render_figures(root, plots)
    return summary


def _axis_values(cfg):
    import itertools
    return itertools.product(*[a.values for a in cfg.sweep]) if cfg.sweep else [()]
