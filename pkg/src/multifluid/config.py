"""INI-style run configuration with strict validation.

The grammar is line-based INI (configparser dialect, ``#`` comments,
no interpolation).  Vectors are whitespace- or comma-separated numbers;
matrices separate rows with ``;``.  Unknown sections or keys are
rejected, every value is validated at load time, and all errors carry
the offending ``section.key`` path.

Sections: ``[mixture]`` (always required), ``[pressure]``, ``[grid]``,
``[time]``, ``[initial]`` (required for simulation), and the optional
``[alpha]``, ``[viscosity]``, ``[forces]``, ``[output]``, ``[run]``,
``[adiabat]``.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

from .mixture import GAS_CONSTANT, MixtureSpec, ReferenceState
from .solver import (
    DEFAULT_CFL,
    AlphaRule,
    CompositePressureLaw,
    ConcentrationViscosity,
    ConstantViscosity,
    FieldState,
    ForceField,
    Grid1D,
    SimplePressureLaw,
    init_state,
)
from .viscosity import OFFDIAG_SIMPLE, ViscosityMatrices, ViscosityModel

__all__ = [
    "GRAMMAR_VERSION",
    "ConfigError",
    "RunConfig",
    "SimulationPlan",
    "AdiabatRange",
    "parse_config",
    "load_config",
]

GRAMMAR_VERSION = "1"

_SCHEMA = {
    "mixture": {"molar_masses", "gammas", "degrees_of_freedom",
                "pure_viscosities", "gas_constant", "reference_densities",
                "reference_temperature", "reference_volume"},
    "pressure": {"law", "k", "k1", "gamma", "gamma_mode"},
    "grid": {"cells", "length"},
    "time": {"t_end", "cfl"},
    "initial": {"profile", "density", "velocity", "density_amplitude",
                "velocity_amplitude", "mode", "phase", "center", "width",
                "seed"},
    "alpha": {"mode", "constants"},
    "viscosity": {"rule", "shear", "second"},
    "forces": {"kind", "amplitude", "mode", "phase"},
    "output": {"directory", "snapshot_interval"},
    "run": {"max_steps"},
    "adiabat": {"v_start", "v_end", "steps"},
}


class ConfigError(ValueError):
    """Configuration rejection with the offending key path attached."""

    def __init__(self, path: str | None, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _require(section, name: str, key: str) -> str:
    if key not in section:
        raise ConfigError(f"{name}.{key}", "key is required")
    return section[key]


def _float(name: str, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name}.{key}", f"not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name}.{key}", "value must be finite")
    return value


def _int(name: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name}.{key}", f"not an integer: {raw!r}") from None


def _vector(name: str, key: str, raw: str) -> np.ndarray:
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ConfigError(f"{name}.{key}", "empty vector")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise ConfigError(f"{name}.{key}", f"not a number vector: {raw!r}") from None


def _matrix(name: str, key: str, raw: str) -> np.ndarray:
    rows = [r for r in raw.split(";") if r.strip()]
    if not rows:
        raise ConfigError(f"{name}.{key}", "empty matrix")
    vectors = [_vector(name, key, r) for r in rows]
    widths = {v.size for v in vectors}
    if len(widths) != 1:
        raise ConfigError(f"{name}.{key}", "matrix rows have unequal lengths")
    return np.stack(vectors)


def _choice(name: str, key: str, raw: str, options: tuple[str, ...]) -> str:
    value = raw.strip().lower()
    if value not in options:
        raise ConfigError(f"{name}.{key}",
                          f"must be one of {', '.join(options)}; got {raw!r}")
    return value


def _forbid(section, name: str, keys: tuple[str, ...], reason: str) -> None:
    for key in keys:
        if key in section:
            raise ConfigError(f"{name}.{key}", reason)


@dataclass(frozen=True)
class InitialProfile:
    """Raw initial-condition description from the ``[initial]`` section."""

    profile: str
    density: np.ndarray
    velocity: np.ndarray
    density_amplitude: np.ndarray | None
    velocity_amplitude: np.ndarray | None
    mode: int
    phase: float
    center: float
    width: float
    seed: int

    def arrays(self, grid: Grid1D, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centered (density, velocity) fields of shape (N, J)."""
        if self.density.size != n or self.velocity.size != n:
            raise ConfigError("initial.density",
                              "need one base value per constituent")
        d_amp = (np.zeros(n) if self.density_amplitude is None
                 else self.density_amplitude)
        v_amp = (np.zeros(n) if self.velocity_amplitude is None
                 else self.velocity_amplitude)
        if d_amp.size != n or v_amp.size != n:
            raise ConfigError("initial.density_amplitude",
                              "need one amplitude per constituent")
        x = grid.cell_centers
        base_rho = np.repeat(self.density[:, None], grid.n_cells, axis=1)
        base_vel = np.repeat(self.velocity[:, None], grid.n_cells, axis=1)
        if self.profile == "uniform":
            return base_rho, base_vel
        if self.profile == "sine":
            wave = np.sin(2.0 * math.pi * self.mode * x / grid.length + self.phase)
            return (base_rho + d_amp[:, None] * wave,
                    base_vel + v_amp[:, None] * wave)
        if self.profile == "bump":
            center = self.center * grid.length
            width = self.width * grid.length
            offset = x - center
            offset -= grid.length * np.round(offset / grid.length)
            bump = np.exp(-(offset / width) ** 2)
            return (base_rho + d_amp[:, None] * bump,
                    base_vel + v_amp[:, None] * bump)
        # noise: relative jitter on density, additive on velocity
        rng = np.random.default_rng(self.seed)
        shape = (n, grid.n_cells)
        rho = base_rho * (1.0 + d_amp[:, None] * rng.uniform(-1.0, 1.0, shape))
        vel = base_vel + v_amp[:, None] * rng.uniform(-1.0, 1.0, shape)
        return rho, vel


@dataclass(frozen=True)
class AdiabatRange:
    """Volume tabulation request for the closed-volume isentrope."""

    v_start: float
    v_end: float
    steps: int

    def volumes(self) -> np.ndarray:
        return np.linspace(self.v_start, self.v_end, self.steps + 1)


@dataclass(frozen=True)
class SimulationPlan:
    """Everything needed to launch one integration."""

    state: FieldState
    t_end: float
    cfl: float
    snapshot_interval: float | None
    directory: str
    max_steps: int | None
    seed: int


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration; sections that were absent are None."""

    spec: MixtureSpec
    closure: SimplePressureLaw | CompositePressureLaw | None
    grid: Grid1D | None
    t_end: float | None
    cfl: float
    initial: InitialProfile | None
    alpha: AlphaRule
    viscosity: ConstantViscosity | ConcentrationViscosity | None
    forces: ForceField
    directory: str
    snapshot_interval: float | None
    max_steps: int | None
    seed: int
    adiabat: AdiabatRange | None

    def simulation_plan(self) -> SimulationPlan:
        """Build the initial state; raises ConfigError when a section the
        simulation needs is missing or inconsistent."""
        missing = [name for name, part in (("pressure", self.closure),
                                           ("grid", self.grid),
                                           ("time", self.t_end),
                                           ("initial", self.initial))
                   if part is None]
        if missing:
            raise ConfigError(missing[0],
                              "section is required for simulation "
                              f"(missing: {', '.join(missing)})")
        rho, vel = self.initial.arrays(self.grid, self.spec.n_constituents)
        try:
            state = init_state(self.grid, self.spec, rho, vel, self.closure,
                               alpha=self.alpha, viscosity=self.viscosity,
                               forces=self.forces)
        except ValueError as exc:
            raise ConfigError("initial", str(exc)) from exc
        return SimulationPlan(state=state, t_end=self.t_end, cfl=self.cfl,
                              snapshot_interval=self.snapshot_interval,
                              directory=self.directory,
                              max_steps=self.max_steps, seed=self.seed)

    def adiabat_request(self) -> tuple[MixtureSpec, np.ndarray]:
        if self.adiabat is None:
            raise ConfigError("adiabat", "section is required for the "
                                         "isentrope tabulation")
        return self.spec, self.adiabat.volumes()


def _build_mixture(section) -> MixtureSpec:
    name = "mixture"
    mm = _vector(name, "molar_masses", _require(section, name, "molar_masses"))
    has_gamma = "gammas" in section
    has_freedom = "degrees_of_freedom" in section
    if has_gamma == has_freedom:
        raise ConfigError("mixture.gammas",
                          "give exactly one of gammas / degrees_of_freedom")
    if has_gamma:
        gammas = _vector(name, "gammas", section["gammas"])
    else:
        freedoms = _vector(name, "degrees_of_freedom",
                           section["degrees_of_freedom"])
        if np.any(freedoms <= 0.0):
            raise ConfigError("mixture.degrees_of_freedom",
                              "degrees of freedom must be positive")
        gammas = 1.0 + 2.0 / freedoms
    if "pure_viscosities" in section:
        mu = _vector(name, "pure_viscosities", section["pure_viscosities"])
    else:
        mu = np.zeros_like(mm)
    gas_constant = (_float(name, "gas_constant", section["gas_constant"])
                    if "gas_constant" in section else GAS_CONSTANT)
    ref_rho = (_vector(name, "reference_densities", section["reference_densities"])
               if "reference_densities" in section else np.ones_like(mm))
    ref_theta = (_float(name, "reference_temperature",
                        section["reference_temperature"])
                 if "reference_temperature" in section else 1.0)
    ref_volume = (_float(name, "reference_volume", section["reference_volume"])
                  if "reference_volume" in section else 1.0)
    try:
        reference = ReferenceState(ref_rho, ref_theta, ref_volume)
        return MixtureSpec(mm, gammas, mu, reference, gas_constant)
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def _build_pressure(section):
    name = "pressure"
    law = _choice(name, "law", _require(section, name, "law"),
                  ("simple", "composite"))
    try:
        if law == "simple":
            _forbid(section, name, ("k1", "gamma_mode"),
                    "not valid for the simple law")
            return SimplePressureLaw(
                k=_float(name, "k", _require(section, name, "k")),
                gamma=_float(name, "gamma", _require(section, name, "gamma")))
        _forbid(section, name, ("k",), "not valid for the composite law")
        gamma_mode = (_choice(name, "gamma_mode", section["gamma_mode"],
                              ("frozen", "pointwise"))
                      if "gamma_mode" in section else "frozen")
        frozen = (_float(name, "gamma", section["gamma"])
                  if "gamma" in section else None)
        if gamma_mode == "pointwise" and frozen is not None:
            raise ConfigError("pressure.gamma",
                              "pointwise mode computes the exponent itself")
        return CompositePressureLaw(
            k1=_float(name, "k1", _require(section, name, "k1")),
            gamma_mode=gamma_mode, frozen_gamma=frozen)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def _build_grid(section) -> Grid1D:
    name = "grid"
    try:
        return Grid1D(n_cells=_int(name, "cells", _require(section, name, "cells")),
                      length=_float(name, "length",
                                    _require(section, name, "length")))
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def _build_initial(section) -> InitialProfile:
    name = "initial"
    profile = _choice(name, "profile", _require(section, name, "profile"),
                      ("uniform", "sine", "bump", "noise"))
    mode = _int(name, "mode", section["mode"]) if "mode" in section else 1
    if mode < 1:
        raise ConfigError("initial.mode", "spatial mode must be positive")
    center = (_float(name, "center", section["center"])
              if "center" in section else 0.5)
    width = _float(name, "width", section["width"]) if "width" in section else 0.1
    if not 0.0 <= center <= 1.0:
        raise ConfigError("initial.center", "center must lie in [0, 1]")
    if not width > 0.0:
        raise ConfigError("initial.width", "width must be positive")
    return InitialProfile(
        profile=profile,
        density=_vector(name, "density", _require(section, name, "density")),
        velocity=_vector(name, "velocity", _require(section, name, "velocity")),
        density_amplitude=(_vector(name, "density_amplitude",
                                   section["density_amplitude"])
                           if "density_amplitude" in section else None),
        velocity_amplitude=(_vector(name, "velocity_amplitude",
                                    section["velocity_amplitude"])
                            if "velocity_amplitude" in section else None),
        mode=mode, phase=(_float(name, "phase", section["phase"])
                          if "phase" in section else 0.0),
        center=center, width=width,
        seed=_int(name, "seed", section["seed"]) if "seed" in section else 0)


def _build_alpha(section) -> AlphaRule:
    name = "alpha"
    mode = _choice(name, "mode", _require(section, name, "mode"),
                   ("concentration", "constant"))
    if mode == "concentration":
        _forbid(section, name, ("constants",),
                "not valid for the concentration mode")
        return AlphaRule()
    constants = _vector(name, "constants",
                        _require(section, name, "constants"))
    if np.any(constants <= 0.0) or abs(constants.sum() - 1.0) > 1e-12:
        raise ConfigError("alpha.constants",
                          "constants must be positive and sum to one")
    return AlphaRule(mode="constant", constants=constants)


def _build_viscosity(section, spec: MixtureSpec):
    name = "viscosity"
    rule = _choice(name, "rule", _require(section, name, "rule"),
                   ("none", "constant", "concentration"))
    if rule == "none":
        _forbid(section, name, ("shear", "second"),
                "not valid for the inviscid rule")
        return None
    n = spec.n_constituents
    second = (_matrix(name, "second", section["second"])
              if "second" in section else None)
    try:
        if rule == "constant":
            shear = _matrix(name, "shear",
                            _require(section, name, "shear"))
            return ConstantViscosity(ViscosityMatrices(
                shear, np.zeros((n, n)) if second is None else second,
                provenance="constant"))
        _forbid(section, name, ("shear",),
                "the concentration rule builds the shear matrix itself")
        model = ViscosityModel(spec.pure_viscosities,
                               offdiag_rule=OFFDIAG_SIMPLE,
                               second_matrix=second)
        return ConcentrationViscosity(model)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def _build_forces(section) -> ForceField:
    name = "forces"
    kind = _choice(name, "kind", _require(section, name, "kind"),
                   ("zero", "constant", "sine"))
    if kind == "zero":
        _forbid(section, name, ("amplitude", "mode", "phase"),
                "not valid for zero forcing")
        return ForceField()
    try:
        return ForceField(
            kind=kind,
            amplitude=_vector(name, "amplitude",
                              _require(section, name, "amplitude")),
            mode=_int(name, "mode", section["mode"]) if "mode" in section else 1,
            phase=(_float(name, "phase", section["phase"])
                   if "phase" in section else 0.0))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(name, str(exc)) from exc


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Raises ConfigError for syntax errors, unknown sections or keys, and
    any value that fails the owning module's validation.
    """
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(None, f"bad syntax: {exc}") from exc
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(section, "unknown section")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
    if not parser.has_section("mixture"):
        raise ConfigError("mixture", "section is required")
    spec = _build_mixture(parser["mixture"])

    closure = (_build_pressure(parser["pressure"])
               if parser.has_section("pressure") else None)
    grid = _build_grid(parser["grid"]) if parser.has_section("grid") else None

    t_end = None
    cfl = DEFAULT_CFL
    if parser.has_section("time"):
        sec = parser["time"]
        t_end = _float("time", "t_end", _require(sec, "time", "t_end"))
        if t_end < 0.0:
            raise ConfigError("time.t_end", "end time must be nonnegative")
        if "cfl" in sec:
            cfl = _float("time", "cfl", sec["cfl"])
            if not 0.0 < cfl <= 1.0:
                raise ConfigError("time.cfl", "cfl must lie in (0, 1]")

    initial = (_build_initial(parser["initial"])
               if parser.has_section("initial") else None)
    alpha = (_build_alpha(parser["alpha"])
             if parser.has_section("alpha") else AlphaRule())
    viscosity = (_build_viscosity(parser["viscosity"], spec)
                 if parser.has_section("viscosity") else None)
    forces = (_build_forces(parser["forces"])
              if parser.has_section("forces") else ForceField())

    directory = "out"
    snapshot_interval = None
    if parser.has_section("output"):
        sec = parser["output"]
        if "directory" in sec:
            directory = sec["directory"].strip()
            if not directory:
                raise ConfigError("output.directory", "empty directory name")
        if "snapshot_interval" in sec:
            snapshot_interval = _float("output", "snapshot_interval",
                                       sec["snapshot_interval"])
            if not snapshot_interval > 0.0:
                raise ConfigError("output.snapshot_interval",
                                  "interval must be positive")

    max_steps = None
    if parser.has_section("run") and "max_steps" in parser["run"]:
        max_steps = _int("run", "max_steps", parser["run"]["max_steps"])
        if max_steps < 1:
            raise ConfigError("run.max_steps", "step budget must be positive")

    adiabat = None
    if parser.has_section("adiabat"):
        sec = parser["adiabat"]
        v_start = _float("adiabat", "v_start", _require(sec, "adiabat", "v_start"))
        v_end = _float("adiabat", "v_end", _require(sec, "adiabat", "v_end"))
        steps = _int("adiabat", "steps", _require(sec, "adiabat", "steps"))
        if v_start <= 0.0 or v_end <= 0.0:
            raise ConfigError("adiabat.v_start", "volumes must be positive")
        if steps < 1:
            raise ConfigError("adiabat.steps", "need at least one step")
        adiabat = AdiabatRange(v_start, v_end, steps)

    seed = initial.seed if initial is not None else 0
    return RunConfig(spec=spec, closure=closure, grid=grid, t_end=t_end,
                     cfl=cfl, initial=initial, alpha=alpha,
                     viscosity=viscosity, forces=forces, directory=directory,
                     snapshot_interval=snapshot_interval, max_steps=max_steps,
                     seed=seed, adiabat=adiabat)


def load_config(path) -> RunConfig:
    """Read and parse a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(None, f"cannot read {path}: {exc}") from exc
    return parse_config(text)
