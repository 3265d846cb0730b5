"""Scenario configuration: a YAML key-value tree parsed into typed dataclasses.

Grammar (all sections optional except ``name``, ``model`` and ``initial``)::

    name: gaussian-pulse
    task: simulate            # simulate | entropy-budget | rotation | galilean | center-of-mass
                              # | manufactured | dispersion | entropy-search | model-reduction
    model: NSF_BASELINE
    gas: {M: 1.0, R: 1.0}
    transport: {mu: 0.0, kappa_h: 0.0, kappa_m: 0.0, kappa_klim: 0.0, power_law_s: 0.0, T_ref: 1.0}
    dimensionless: false      # true: coefficients come from `reference`
    reference: {kn: 0.01, L: 1.0, rho0: 1.0, T0: 1.0, mu_star: 1.0, kappa_h_star: 1.0,
                kappa_m_star: 1.0, kappa_klim_star: 0.0}
    grid: {n_cells: 128, length: 1.0, bc: periodic}
    initial: {profile: gaussian-pulse, params: {amplitude: 0.2}}
    integrator: {t_end: 0.1, cfl_advective: 0.5, cfl_diffusive: 0.25, max_steps: 1000000,
                 fixed_dt: null, snapshot_every: 100}
    diagnostics: [conserved, drift]
    analysis: {n_list: [64, 128, 256]}
    output: {directory: runs/gaussian-pulse, plot_script: true, figures: true}
    sweep: [{parameter: reference.kn, values: [0.001, 0.01]}]

Unknown keys are errors.  Parsing collects every problem before failing.
"""

from __future__ import annotations

import copy
import dataclasses
import itertools
from dataclasses import dataclass, field, fields

import yaml

from ..governing import ModelVariant
from ..state import GasModel, Grid1D, TransportCoefficients
from ..solver import IntegratorConfig
from ..analysis.knudsen import ReferenceScales

TASKS = ("simulate", "entropy-budget", "rotation", "galilean", "center-of-mass", "manufactured",
         "dispersion", "entropy-search", "model-reduction")
PROFILES = {
    "uniform": {"rho", "u", "T"},
    "sinusoidal-acoustic": {"rho0", "T0", "amplitude", "mode"},
    "gaussian-pulse": {"amplitude", "width", "centre", "velocity"},
    "rigid-rotation-field": {"omega_star"},
    "manufactured": {"rho_amp", "u_amp", "T_amp", "v_amp"},
}
DIAGNOSTICS = ("conserved", "drift", "entropy")


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid scenario config:\n  " + "\n  ".join(self.errors))


@dataclass
class GasSpec:
    M: float = 1.0
    R: float = 1.0


@dataclass
class TransportSpec:
    mu: float = 0.0
    kappa_h: float = 0.0
    kappa_m: float = 0.0
    kappa_klim: float = 0.0
    power_law_s: float = 0.0
    T_ref: float = 1.0


@dataclass
class ReferenceSpec:
    kn: float = 0.01
    L: float = 1.0
    rho0: float = 1.0
    T0: float = 1.0
    mu_star: float = 1.0
    kappa_h_star: float = 1.0
    kappa_m_star: float = 1.0
    kappa_klim_star: float = 0.0


@dataclass
class GridSpec:
    n_cells: int = 128
    length: float = 1.0
    bc: str = "periodic"


@dataclass
class InitialSpec:
    profile: str = "uniform"
    params: dict = field(default_factory=dict)


@dataclass
class IntegratorSpec:
    t_end: float = 0.1
    cfl_advective: float = 0.5
    cfl_diffusive: float = 0.25
    max_steps: int = 1_000_000
    fixed_dt: float | None = None
    snapshot_every: int = 100


@dataclass
class AnalysisSpec:
    n_list: list | None = None
    kn_values: list | None = None
    omegas: list | None = None
    n_fields: int | None = None
    seed: int | None = None
    boost: float | None = None
    omega_star: float | None = None
    n_samples: int | None = None
    t_end: float | None = None


@dataclass
class OutputSpec:
    directory: str = "runs"
    plot_script: bool = True
    figures: bool = True


@dataclass
class SweepAxis:
    parameter: str
    values: list


@dataclass
class ScenarioConfig:
    name: str
    model: str
    initial: InitialSpec
    task: str = "simulate"
    gas: GasSpec = field(default_factory=GasSpec)
    transport: TransportSpec = field(default_factory=TransportSpec)
    dimensionless: bool = False
    reference: ReferenceSpec | None = None
    grid: GridSpec = field(default_factory=GridSpec)
    integrator: IntegratorSpec = field(default_factory=IntegratorSpec)
    diagnostics: list = field(default_factory=lambda: ["conserved", "drift"])
    analysis: AnalysisSpec = field(default_factory=AnalysisSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    sweep: list = field(default_factory=list)

    # -- resolved objects ----------------------------------------------------

    @property
    def variant(self) -> ModelVariant:
        return ModelVariant.parse(self.model)

    def gas_model(self) -> GasModel:
        return GasModel(M=self.gas.M, R=self.gas.R)

    def scales(self) -> ReferenceScales | None:
        if self.reference is None:
            return None
        r = self.reference
        return ReferenceScales.for_gas(r.kn, r.L, self.gas_model(), rho0=r.rho0, T0=r.T0)

    def coefficients(self) -> TransportCoefficients:
        if self.dimensionless:
            r = self.reference
            return self.scales().coefficients(r.mu_star, r.kappa_h_star, r.kappa_m_star,
                                              r.kappa_klim_star, self.transport.power_law_s)
        t = self.transport
        return TransportCoefficients(t.mu, t.kappa_h, t.kappa_m, t.kappa_klim, t.power_law_s, t.T_ref)

    def make_grid(self) -> Grid1D:
        return Grid1D(self.grid.n_cells, self.grid.length, self.grid.bc)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(**dataclasses.asdict(self.integrator))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["reference"] is None:
            del d["reference"]
        d["analysis"] = {k: v for k, v in d["analysis"].items() if v is not None}
        return d


_SECTIONS = {
    "gas": GasSpec, "transport": TransportSpec, "reference": ReferenceSpec, "grid": GridSpec,
    "initial": InitialSpec, "integrator": IntegratorSpec, "analysis": AnalysisSpec, "output": OutputSpec,
}
_TOP = {f.name for f in fields(ScenarioConfig)}
_REQUIRED = ("name", "model", "initial")


def _type_ok(value, f) -> bool:
    t = str(f.type)
    if value is None:
        return "None" in t
    if t.startswith("float"):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if t.startswith("int"):
        return isinstance(value, int) and not isinstance(value, bool)
    if t.startswith("bool"):
        return isinstance(value, bool)
    if t.startswith("str"):
        return isinstance(value, str)
    if t.startswith("list"):
        return isinstance(value, list)
    if t.startswith("dict"):
        return isinstance(value, dict)
    return True


def _coerce(value, f):
    # ints are accepted where floats are expected; store them as floats so round-trips are stable
    if value is not None and str(f.type).startswith("float") and isinstance(value, int):
        return float(value)
    return value


def _section(name, raw, errors):
    cls = _SECTIONS[name]
    if not isinstance(raw, dict):
        errors.append(f"{name}: expected a mapping, got {type(raw).__name__}")
        return cls() if name != "initial" else None
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in raw.items():
        if key not in known:
            errors.append(f"{name}.{key}: unknown key")
        elif not _type_ok(value, known[key]):
            errors.append(f"{name}.{key}: expected {known[key].type}, got {value!r}")
        else:
            kwargs[key] = _coerce(value, known[key])
    return cls(**kwargs)


def _check_values(cfg: ScenarioConfig, errors):
    try:
        cfg.variant
    except ValueError as exc:
        errors.append(f"model: {exc}")
    if cfg.task not in TASKS:
        errors.append(f"task: unknown task {cfg.task!r}; expected one of {list(TASKS)}")
    for k in ("M", "R"):
        if not getattr(cfg.gas, k) > 0:
            errors.append(f"gas.{k}: must be positive")
    for k in ("mu", "kappa_h", "kappa_m", "kappa_klim"):
        if getattr(cfg.transport, k) < 0:
            errors.append(f"transport.{k}: must be non-negative, got {getattr(cfg.transport, k)}")
    if not cfg.transport.T_ref > 0:
        errors.append("transport.T_ref: must be positive")
    if cfg.dimensionless and cfg.reference is None:
        errors.append("reference: dimensionless mode requires a reference section")
    if cfg.reference is not None:
        r = cfg.reference
        for k in ("kn", "L", "rho0", "T0"):
            if not getattr(r, k) > 0:
                errors.append(f"reference.{k}: must be positive")
        for k in ("mu_star", "kappa_h_star", "kappa_m_star", "kappa_klim_star"):
            if getattr(r, k) < 0:
                errors.append(f"reference.{k}: must be non-negative")
    if cfg.grid.n_cells < 8:
        errors.append("grid.n_cells: need at least 8 cells")
    if not cfg.grid.length > 0:
        errors.append("grid.length: must be positive")
    if cfg.grid.bc not in ("periodic", "reflective"):
        errors.append(f"grid.bc: expected periodic or reflective, got {cfg.grid.bc!r}")
    if cfg.initial is not None:
        allowed = PROFILES.get(cfg.initial.profile)
        if allowed is None:
            errors.append(f"initial.profile: unknown profile {cfg.initial.profile!r}; "
                          f"expected one of {sorted(PROFILES)}")
        else:
            for key in cfg.initial.params:
                if key not in allowed:
                    errors.append(f"initial.params.{key}: unknown parameter for {cfg.initial.profile}")
            for key, value in cfg.initial.params.items():
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    errors.append(f"initial.params.{key}: expected a number, got {value!r}")
        if cfg.initial.profile == "rigid-rotation-field" and cfg.task != "rotation":
            errors.append("initial.profile: rigid-rotation-field is a planar field, only valid with task rotation")
    it = cfg.integrator
    if not it.t_end > 0:
        errors.append("integrator.t_end: must be positive")
    for k in ("cfl_advective", "cfl_diffusive"):
        if not 0 < getattr(it, k) <= 1:
            errors.append(f"integrator.{k}: must lie in (0, 1]")
    if it.max_steps < 1:
        errors.append("integrator.max_steps: must be >= 1")
    if it.snapshot_every < 1:
        errors.append("integrator.snapshot_every: must be >= 1")
    if it.fixed_dt is not None and not it.fixed_dt > 0:
        errors.append("integrator.fixed_dt: must be positive when set")
    for d in cfg.diagnostics:
        if d not in DIAGNOSTICS:
            errors.append(f"diagnostics: unknown diagnostic {d!r}; expected any of {list(DIAGNOSTICS)}")
    for i, axis in enumerate(cfg.sweep):
        if not axis.values:
            errors.append(f"sweep[{i}].values: must be a non-empty list")
        if not _path_exists(cfg, axis.parameter):
            errors.append(f"sweep[{i}].parameter: {axis.parameter!r} does not name a config parameter")


def _path_exists(cfg, path) -> bool:
    parts = path.split(".")
    obj = cfg
    for i, part in enumerate(parts):
        if obj is None and i == 1 and parts[0] == "reference":
            obj = ReferenceSpec()
        if isinstance(obj, dict):
            return i == len(parts) - 1 or part in obj
        if not dataclasses.is_dataclass(obj) or part not in {f.name for f in fields(obj)}:
            return False
        obj = getattr(obj, part)
    return not dataclasses.is_dataclass(obj)


def from_dict(raw) -> ScenarioConfig:
    errors = []
    if not isinstance(raw, dict):
        raise ConfigError([f"top level: expected a mapping, got {type(raw).__name__}"])
    for key in raw:
        if key not in _TOP:
            errors.append(f"{key}: unknown key")
    for key in _REQUIRED:
        if key not in raw:
            errors.append(f"{key}: missing required key")
    kwargs = {}
    for key in ("name", "model", "task"):
        if key in raw:
            if isinstance(raw[key], str):
                kwargs[key] = raw[key]
            else:
                errors.append(f"{key}: expected a string, got {raw[key]!r}")
    if "dimensionless" in raw:
        if isinstance(raw["dimensionless"], bool):
            kwargs["dimensionless"] = raw["dimensionless"]
        else:
            errors.append(f"dimensionless: expected true/false, got {raw['dimensionless']!r}")
    for name in _SECTIONS:
        if name in raw and raw[name] is not None:
            kwargs[name] = _section(name, raw[name], errors)
    if "diagnostics" in raw:
        if isinstance(raw["diagnostics"], list):
            kwargs["diagnostics"] = list(raw["diagnostics"])
        else:
            errors.append("diagnostics: expected a list")
    axes = []
    for i, item in enumerate(raw.get("sweep") or []):
        if not isinstance(item, dict) or set(item) != {"parameter", "values"}:
            errors.append(f"sweep[{i}]: expected exactly the keys parameter and values")
            continue
        if not isinstance(item["values"], list):
            errors.append(f"sweep[{i}].values: expected a list")
            continue
        axes.append(SweepAxis(str(item["parameter"]), list(item["values"])))
    kwargs["sweep"] = axes
    if all(k in kwargs for k in _REQUIRED) and kwargs.get("initial") is not None:
        cfg = ScenarioConfig(**kwargs)
        _check_values(cfg, errors)
    else:
        cfg = None
    if errors:
        raise ConfigError(errors)
    return cfg


def parse_config(text: str) -> ScenarioConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"syntax: {exc}"]) from exc
    return from_dict(raw)


def serialize(cfg: ScenarioConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False, default_flow_style=None)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# -- sweeps ---------------------------------------------------------------------

def _set_path(d: dict, path: str, value):
    parts = path.split(".")
    for part in parts[:-1]:
        d = d.setdefault(part, {})
    d[parts[-1]] = value


def _label(path, value) -> str:
    return f"{path.split('.')[-1]}={value}"


def expand_sweep(cfg: ScenarioConfig) -> list[tuple[str, ScenarioConfig]]:
    """Cross-product of sweep axes; each entry is (run label, resolved config without sweep)."""
    if not cfg.sweep:
        return [("run", cfg)]
    base = cfg.to_dict()
    base["sweep"] = []
    out = []
    for combo in itertools.product(*[axis.values for axis in cfg.sweep]):
        d = copy.deepcopy(base)
        labels = []
        for axis, value in zip(cfg.sweep, combo):
            _set_path(d, axis.parameter, value)
            labels.append(_label(axis.parameter, value))
        out.append(("_".join(labels), from_dict(d)))
    return out
