"""Explicit RK4 time integration under an advective/diffusive step limit."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .governing import ModelVariant, from_conserved, make_rhs, to_conserved, variable_names
from .state import FlowState, GasModel, Grid1D, TransportCoefficients, ValidationError, require_valid

log = logging.getLogger(__name__)


class SimulationDiverged(RuntimeError):
    def __init__(self, step, t, cause):
        super().__init__(f"simulation diverged at step {step} (t={t:.6g}): {cause}")
        self.step = step
        self.t = t


@dataclass(frozen=True)
class IntegratorConfig:
    t_end: float
    cfl_advective: float = 0.5
    cfl_diffusive: float = 0.25
    max_steps: int = 1_000_000
    fixed_dt: float | None = None
    snapshot_every: int = 100

    def __post_init__(self):
        if not (0 < self.cfl_advective <= 1 and 0 < self.cfl_diffusive <= 1):
            raise ValueError("CFL safety factors must lie in (0, 1]")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.max_steps < 1 or self.snapshot_every < 1:
            raise ValueError("max_steps and snapshot_every must be >= 1")
        if self.fixed_dt is not None and not self.fixed_dt > 0:
            raise ValueError("fixed_dt must be positive when set")


def max_diffusivity(state: FlowState, coeffs: TransportCoefficients, gas: GasModel) -> float:
    rho = state.rho_bar(gas)
    mu = np.max(coeffs.viscosity(state.temperature(gas)))
    return float(max(
        np.max(4.0 / 3.0 * mu / rho),
        np.max(coeffs.kappa_h / (rho * gas.c_v)),
        coeffs.kappa_m,
        coeffs.kappa_klim,
    ))


def stable_dt(state: FlowState, coeffs: TransportCoefficients, gas: GasModel, grid: Grid1D,
              config: IntegratorConfig) -> float:
    c_s = gas.sound_speed(state.temperature(gas))
    dt = config.cfl_advective * grid.dx / np.max(np.abs(state.u_m) + c_s)
    nu = max_diffusivity(state, coeffs, gas)
    if nu > 0:
        dt = min(dt, config.cfl_diffusive * grid.dx**2 / (2.0 * nu))
    if config.fixed_dt is not None:
        dt = min(dt, config.fixed_dt)
    if not np.isfinite(dt) or dt <= 0:
        raise ValidationError(f"non-finite time step {dt!r}")
    return float(dt)


def rk4_step(f: Callable, t: float, q: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(t, q)
    k2 = f(t + 0.5 * dt, q + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, q + 0.5 * dt * k2)
    k4 = f(t + dt, q + dt * k3)
    return q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(state: FlowState, variant, coeffs: TransportCoefficients, gas: GasModel,
             grid: Grid1D, dt: float, t: float = 0.0, source=None, step_index: int = 0) -> FlowState:
    f = make_rhs(variant, coeffs, gas, grid, source)
    q = to_conserved(state, variant, gas, coeffs, grid)
    try:
        q_new = rk4_step(f, t, q, dt)
        out = from_conserved(q_new, variant, gas, coeffs, grid)
        require_valid(out)
    except ValidationError as exc:
        raise SimulationDiverged(step_index, t, exc) from exc
    return out


@dataclass
class Problem:
    variant: ModelVariant
    state: FlowState
    coeffs: TransportCoefficients
    gas: GasModel
    grid: Grid1D
    integrator: IntegratorConfig
    # source(t) -> array shaped like the conserved vector (manufactured solutions)
    source: Callable | None = None


@dataclass
class Trajectory:
    variant: ModelVariant
    grid: Grid1D
    names: tuple[str, ...]
    times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    step_times: list = field(default_factory=list)
    step_dt: list = field(default_factory=list)
    integrals: list = field(default_factory=list)

    @property
    def final(self) -> FlowState:
        return self.snapshots[-1]

    def integral_table(self) -> np.ndarray:
        """Rows (t, dt, integral of each conserved variable)."""
        return np.column_stack([self.step_times, self.step_dt, np.array(self.integrals)])


def run(problem: Problem, on_snapshot: Callable | None = None) -> Trajectory:
    variant = ModelVariant.parse(problem.variant)
    cfg, grid = problem.integrator, problem.grid
    require_valid(problem.state)
    f = make_rhs(variant, problem.coeffs, problem.gas, grid, problem.source)
    q = to_conserved(problem.state, variant, problem.gas, problem.coeffs, grid)
    traj = Trajectory(variant, grid, variable_names(variant))
    state, t, step = problem.state, 0.0, 0

    def record(dt):
        traj.step_times.append(t)
        traj.step_dt.append(dt)
        traj.integrals.append(q.sum(axis=1) * grid.dx)

    def snapshot():
        traj.times.append(t)
        traj.snapshots.append(state)
        if on_snapshot is not None:
            on_snapshot(t, state)

    record(0.0)
    snapshot()
    while t < cfg.t_end * (1 - 1e-14) and step < cfg.max_steps:
        dt = min(stable_dt(state, problem.coeffs, problem.gas, grid, cfg), cfg.t_end - t)
        try:
            q = rk4_step(f, t, q, dt)
            state = from_conserved(q, variant, problem.gas, problem.coeffs, grid)
            require_valid(state)
        except ValidationError as exc:
            raise SimulationDiverged(step + 1, t, exc) from exc
        t += dt
        step += 1
        record(dt)
        if step % cfg.snapshot_every == 0:
            snapshot()
    if traj.times[-1] != t:
        snapshot()
    log.debug("run finished: %d steps, t=%.6g", step, t)
    return traj
