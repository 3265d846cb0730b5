"""Built-in scenario library: YAML configs plus a short description each."""

from __future__ import annotations

from dataclasses import dataclass

from .config import ScenarioConfig, parse_config


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    description: str
    text: str

    def config(self) -> ScenarioConfig:
        return parse_config(self.text)


_LIBRARY = [
    Scenario(
        "acoustic-decay",
        "NSF standing sound wave; decay rate versus the dispersion root",
        """A small-amplitude adiabatic standing wave (one wavelength on 64 cells) is
integrated with the Navier-Stokes-Fourier set.  The decay rate of the velocity
mode is fitted from successive envelope peaks and compared with -Im(omega) of
the linear dispersion relation at the same wavenumber (target: within 2%).""",
        """\
name: acoustic-decay
task: simulate
model: NSF_BASELINE
transport: {mu: 0.005, kappa_h: 0.0075}
grid: {n_cells: 64, length: 1.0, bc: periodic}
initial: {profile: sinusoidal-acoustic, params: {rho0: 1.0, T0: 1.0, amplitude: 0.001, mode: 1}}
integrator: {t_end: 4.0, snapshot_every: 4}
diagnostics: [conserved, drift]
output: {directory: runs/acoustic-decay}
"""),
    Scenario(
        "gaussian-pulse",
        "Gaussian pulse on a periodic grid; conservation over 1000 steps",
        """A Gaussian bump in density, velocity and temperature on 256 periodic cells,
advanced 1000 fixed steps.  The domain sums of mass, momentum and total
energy must drift by less than 1e-10 relative for every model variant.""",
        """\
name: gaussian-pulse
task: simulate
model: BIVELOCITY_REDUCED
transport: {mu: 0.002, kappa_h: 0.003, kappa_m: 0.002, kappa_klim: 0.002}
grid: {n_cells: 256, length: 1.0, bc: periodic}
initial: {profile: gaussian-pulse, params: {amplitude: 0.2, width: 0.08, centre: 0.5, velocity: 0.1}}
integrator: {t_end: 100.0, fixed_dt: 0.0005, max_steps: 1000, snapshot_every: 250}
diagnostics: [conserved, drift, entropy]
output: {directory: runs/gaussian-pulse}
"""),
    Scenario(
        "klimontovich-entropy-search",
        "Random smooth fields; sign structure of the entropy production terms",
        """Draws random smooth periodic fields and evaluates, pointwise:
the viscous production -Pi_Um:grad(U_m) (never negative), the Klimontovich
bracketed group 2 kappa c_v grad(rho).grad(T)/T - kappa R |grad rho|^2 / rho
(searched for both signs), and the reduced-model residual -(1/T) J_v div(Pi_v)
(reported; nonzero whenever kappa_m > 0).""",
        """\
name: klimontovich-entropy-search
task: entropy-search
model: KLIMONTOVICH
transport: {mu: 0.01, kappa_h: 0.015, kappa_m: 0.01, kappa_klim: 0.01}
grid: {n_cells: 128, length: 1.0, bc: periodic}
initial: {profile: uniform}
analysis: {n_fields: 1000, seed: 7}
output: {directory: runs/klimontovich-entropy-search}
"""),
    Scenario(
        "kn-ordering-sweep",
        "Knudsen sweep of the volume-model entropy terms; expected slopes {1, 2, 3}",
        """Holds the dimensionless fields fixed and varies the mean free path, so only
the Knudsen number changes.  Each term of the volume-model entropy rate is
integrated in reference units and its log-log slope against Kn is fitted.
Expected slopes, from the Kn prefactors of the dimensionless entropy equation:
heat conduction 1, NSF shear -Pi_Um:grad(U_m) 1, the two cross groups
Pi_Um:grad(J_v/v) and Pi_Jv:grad(U_m) 2, and Pi_Jv:grad(J_v/v) 3.""",
        """\
name: kn-ordering-sweep
task: entropy-budget
model: VOLUME_FULL
dimensionless: true
reference: {kn: 0.01, L: 1.0, rho0: 1.0, T0: 1.0, mu_star: 1.0, kappa_h_star: 1.0, kappa_m_star: 1.0}
grid: {n_cells: 128, length: 1.0, bc: periodic}
initial: {profile: manufactured}
output: {directory: runs/kn-ordering-sweep}
sweep:
  - {parameter: reference.kn, values: [0.001, 0.003, 0.01, 0.03, 0.1]}
"""),
    Scenario(
        "rigid-rotation-eval",
        "Rotating isothermal equilibrium; vanishing Pi_Um and q_s, Kn^3 Pi_Jv production",
        """Evaluates the volume-model closures on a planar rigid rotation with the
isothermal centrifugal density profile.  Pi_Um and the entropic heat flux
vanish identically; the Pi_Jv:grad(J_v/v) production is positive and scales as
Kn^3 at fixed dimensionless angular velocity.""",
        """\
name: rigid-rotation-eval
task: rotation
model: VOLUME_FULL
transport: {mu: 0.01, kappa_h: 0.015, kappa_m: 0.01}
initial: {profile: rigid-rotation-field, params: {omega_star: 0.5}}
analysis: {kn_values: [0.001, 0.003, 0.01, 0.03, 0.1], n_samples: 33}
output: {directory: runs/rigid-rotation-eval}
"""),
    Scenario(
        "galilean-pair",
        "Same wave in two frames; mismatch versus resolution",
        """Runs a smooth periodic wave at rest and boosted by a uniform velocity, then
translates the boosted result back.  The frame mismatch must fall at second
order in the grid spacing over N = 64, 128, 256.""",
        """\
name: galilean-pair
task: galilean
model: BIVELOCITY_REDUCED
transport: {mu: 0.01, kappa_h: 0.015, kappa_m: 0.01, kappa_klim: 0.01}
initial: {profile: sinusoidal-acoustic, params: {amplitude: 0.1}}
analysis: {n_list: [64, 128, 256], boost: 0.5, t_end: 0.5}
output: {directory: runs/galilean-pair}
"""),
    Scenario(
        "center-of-mass",
        "Gaussian pulse; centre-of-mass balance residual and its convergence",
        """Evolves a Gaussian pulse and evaluates the centre-of-mass balance
d/dt[rho (X - U t)] + div[rho (X - U t) U - t (p + Pi_v)] on interior cells,
with the time derivative taken across three consecutive steps.  The residual
converges at second order in the grid spacing.""",
        """\
name: center-of-mass
task: center-of-mass
model: BIVELOCITY_REDUCED
transport: {mu: 0.01, kappa_h: 0.015, kappa_m: 0.01}
initial: {profile: gaussian-pulse}
analysis: {n_list: [64, 128, 256], t_end: 0.05}
output: {directory: runs/center-of-mass}
"""),
    Scenario(
        "model-reduction",
        "Degeneracy of the variants under coefficient zeroing",
        """Evaluates the right-hand sides of all variants on random smooth states with
kappa_m = 0 and kappa = 0.  The reduced bivelocity, Klimontovich and full volume
models (with v_bar = 1/A_n) must reproduce the Navier-Stokes-Fourier baseline
elementwise to 1e-12 relative.""",
        """\
name: model-reduction
task: model-reduction
model: NSF_BASELINE
transport: {mu: 0.01, kappa_h: 0.015}
grid: {n_cells: 128, length: 1.0, bc: periodic}
initial: {profile: uniform}
analysis: {n_fields: 10, seed: 3}
output: {directory: runs/model-reduction}
"""),
    Scenario(
        "manufactured-convergence",
        "Manufactured solutions; solver order and entropy-budget closure",
        """Forces each variant with a symbolically derived source so that closed-form
periodic fields solve the equations exactly.  The solver error after a short
integration must fall at order 2 over three resolutions.  For the volume
model the Gibbs-path entropy rate is also compared with the summed budget
terms on an unforced run from the same fields (order 2 or better).""",
        """\
name: manufactured-convergence
task: manufactured
model: VOLUME_FULL
transport: {mu: 0.02, kappa_h: 0.03, kappa_m: 0.02, kappa_klim: 0.02}
initial: {profile: manufactured}
analysis: {n_list: [32, 64, 128], t_end: 0.1}
output: {directory: runs/manufactured-convergence}
"""),
    Scenario(
        "dispersion-scan",
        "Linear sound dispersion and attenuation of all variants",
        """Solves the linear plane-wave dispersion relation of every variant over a
range of frequencies.  Checks the adiabatic low-frequency sound speed, exact
agreement of the bivelocity roots with NSF at kappa_m = 0, and records how the
attenuation departs from NSF as kappa_m grows.""",
        """\
name: dispersion-scan
task: dispersion
model: BIVELOCITY_REDUCED
transport: {mu: 0.001, kappa_h: 0.0015, kappa_m: 0.001, kappa_klim: 0.001}
initial: {profile: uniform}
analysis: {omegas: [0.01, 0.5, 1.0, 2.0, 4.0, 8.0]}
output: {directory: runs/dispersion-scan}
"""),
]

SCENARIOS = {s.name: s for s in _LIBRARY}


def list_scenarios() -> list[str]:
    return [s.name for s in _LIBRARY]


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(list_scenarios())}") from None


def describe(name: str) -> str:
    s = get_scenario(name)
    return f"{s.name}: {s.summary}\n\n{s.description}\n\nConfig:\n{s.text}"
