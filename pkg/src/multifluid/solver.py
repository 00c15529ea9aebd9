"""Finite-volume integrator for one-dimensional periodic multi-fluid flow.

Every constituent is advected by the shared coefficient-weighted average
velocity; each momentum balance carries its split of the common pressure
gradient, a matrix-coupled viscous stress, and an optional body force.
First-order upwind transport keeps concentrations inside their initial
range, the flux form conserves each constituent mass to round-off, and a
two-stage strong-stability-preserving Runge-Kutta step preserves both
properties in time.  A uniform state with zero forcing is a bitwise
fixed point of the step.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import mixture
from .mixture import MixtureSpec, adiabatic_index, concentrations
from .viscosity import (
    OFFDIAG_SIMPLE,
    PositivityReport,
    ViscosityMatrices,
    ViscosityModel,
    bulk_constraint_check,
)

__all__ = [
    "DENSITY_FLOOR",
    "DensityFloorError",
    "Grid1D",
    "SimplePressureLaw",
    "CompositePressureLaw",
    "AlphaRule",
    "ConstantViscosity",
    "ConcentrationViscosity",
    "ForceField",
    "FieldState",
    "Snapshot",
    "RunResult",
    "init_state",
    "rhs",
    "stable_dt",
    "step",
    "run",
]

#: partial densities below this abort the run
DENSITY_FLOOR = 1e-10

#: minimal initial concentration for the concentration-dependent viscosity
MIN_INITIAL_CONCENTRATION = 1e-8

DEFAULT_CFL = 0.4


class DensityFloorError(RuntimeError):
    """A partial density fell below the positivity floor."""

    def __init__(self, constituent: int, cell: int, value: float, time: float):
        self.constituent = constituent
        self.cell = cell
        self.value = value
        self.time = time
        super().__init__(
            f"density of constituent {constituent} in cell {cell} fell to "
            f"{value:.6g} (floor {DENSITY_FLOOR:g}) at t={time:.6g}")


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic cell-centered grid on [0, length)."""

    n_cells: int
    length: float

    def __post_init__(self) -> None:
        if int(self.n_cells) != self.n_cells or self.n_cells < 4:
            raise ValueError("need at least 4 cells")
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise ValueError("domain length must be positive")
        object.__setattr__(self, "n_cells", int(self.n_cells))
        object.__setattr__(self, "length", float(self.length))

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class SimplePressureLaw:
    """Power law ``k * rho^gamma`` in the total density.

    ``k = 0`` switches the pressure off entirely, which is useful for
    pure-transport experiments.
    """

    k: float
    gamma: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k >= 0.0):
            raise ValueError("pressure coefficient must be nonnegative")
        if not (math.isfinite(self.gamma) and self.gamma > 1.0):
            raise ValueError("heat-capacity ratio must exceed 1")

    def pressure(self, rho: np.ndarray, spec: MixtureSpec) -> np.ndarray:
        total = rho.sum(axis=0)
        return self.k * total ** self.gamma

    def gamma_field(self, rho: np.ndarray, spec: MixtureSpec):
        return self.gamma


@dataclass(frozen=True)
class CompositePressureLaw:
    """Reduced-density law ``k1 * rho^(gamma-1) * tilde_rho``.

    ``gamma_mode`` selects whether the exponent is frozen at one value
    for the whole run ("frozen", the value taken from ``frozen_gamma`` or
    filled in from the initial mean composition) or re-evaluated from the
    local concentrations every call ("pointwise").
    """

    k1: float
    gamma_mode: str = "frozen"
    frozen_gamma: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k1) and self.k1 > 0.0):
            raise ValueError("pressure coefficient must be strictly positive")
        if self.gamma_mode not in ("frozen", "pointwise"):
            raise ValueError(f"unknown exponent mode {self.gamma_mode!r}")
        if self.frozen_gamma is not None and not self.frozen_gamma > 1.0:
            raise ValueError("frozen heat-capacity ratio must exceed 1")

    def pressure(self, rho: np.ndarray, spec: MixtureSpec) -> np.ndarray:
        if self.gamma_mode == "frozen":
            if self.frozen_gamma is None:
                raise ValueError("frozen exponent was never fixed; build the "
                                 "state through init_state")
            return mixture.pressure_composite(rho, self.k1, spec, self.frozen_gamma)
        return mixture.pressure_composite(rho, self.k1, spec)

    def gamma_field(self, rho: np.ndarray, spec: MixtureSpec):
        if self.gamma_mode == "frozen":
            if self.frozen_gamma is None:
                raise ValueError("frozen exponent was never fixed; build the "
                                 "state through init_state")
            return self.frozen_gamma
        return adiabatic_index(concentrations(rho), spec)


@dataclass(frozen=True)
class AlphaRule:
    """How the common pressure gradient is split between constituents."""

    mode: str = "concentration"
    constants: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("concentration", "constant"):
            raise ValueError(f"unknown coefficient mode {self.mode!r}")
        if self.mode == "constant":
            if self.constants is None:
                raise ValueError("constant mode needs a coefficient vector")
            # full validation happens in alpha_coeffs on first use
            object.__setattr__(self, "constants",
                               np.asarray(self.constants, dtype=float))

    def field(self, xi: np.ndarray) -> np.ndarray:
        return mixture.alpha_coeffs(xi, self.mode, self.constants)


@dataclass(frozen=True)
class ConstantViscosity:
    """Fixed viscosity matrices used in every cell."""

    matrices: ViscosityMatrices

    @property
    def second_matrix(self) -> np.ndarray:
        return self.matrices.second

    def positivity(self, xi0: np.ndarray) -> PositivityReport:
        return bulk_constraint_check(self.matrices)

    def face_coefficient(self, xi: np.ndarray) -> np.ndarray:
        return self.matrices.stress_coefficient_1d

    def cell_coefficient(self, xi: np.ndarray) -> np.ndarray:
        return self.matrices.stress_coefficient_1d

    def max_coefficient_eigenvalue(self, xi: np.ndarray) -> float:
        coeff = self.matrices.stress_coefficient_1d
        return float(np.linalg.eigvalsh(0.5 * (coeff + coeff.T)).max())


def _simple_rule_matrices(pure: np.ndarray, second: np.ndarray,
                          xi: np.ndarray) -> np.ndarray:
    """Stress coefficient 2 * shear + second for many composition columns
    at once; ``xi`` has shape (N, J), the result (J, N, N)."""
    nu = np.sqrt(pure)[:, None] * xi
    shear = nu.T[:, :, None] * nu.T[:, None, :]
    idx = np.arange(pure.size)
    shear[:, idx, idx] += (nu * (nu.sum(axis=0) - nu)).T
    return 2.0 * shear + second


@dataclass(frozen=True)
class ConcentrationViscosity:
    """Viscosity matrices rebuilt from the local composition each call.

    Only the plain geometric-mean mixing rule is supported here; the
    exponential correction stays available for pointwise studies through
    the viscosity module itself.
    """

    model: ViscosityModel

    def __post_init__(self) -> None:
        if self.model.offdiag_rule != OFFDIAG_SIMPLE:
            raise ValueError("the integrator supports the plain mixing rule only")

    @property
    def second_matrix(self) -> np.ndarray:
        return self.model.second_matrix

    def positivity(self, xi0: np.ndarray) -> PositivityReport:
        """Worst-cell positivity of the coefficient pair at composition
        ``xi0`` of shape (N, J)."""
        worst = None
        for j in range(xi0.shape[1]):
            pair = ViscosityMatrices.from_model(self.model, xi0[:, j])
            report = bulk_constraint_check(pair)
            if worst is None or (report.shear_min_eigenvalue
                                 < worst.shear_min_eigenvalue):
                worst = report
            if not report.passed:
                return report
        return worst

    def face_coefficient(self, xi: np.ndarray) -> np.ndarray:
        xi_face = 0.5 * (np.roll(xi, 1, axis=1) + xi)
        return _simple_rule_matrices(self.model.pure_viscosities,
                                     self.model.second_matrix, xi_face)

    def cell_coefficient(self, xi: np.ndarray) -> np.ndarray:
        return _simple_rule_matrices(self.model.pure_viscosities,
                                     self.model.second_matrix, xi)

    def max_coefficient_eigenvalue(self, xi: np.ndarray) -> float:
        coeffs = self.cell_coefficient(xi)
        sym = 0.5 * (coeffs + np.swapaxes(coeffs, 1, 2))
        return float(np.linalg.eigvalsh(sym).max())


@dataclass(frozen=True)
class ForceField:
    """Per-constituent body force density (force per unit mass).

    ``kind`` is "zero", "constant" (amplitude per constituent) or "sine"
    (amplitude per constituent times a sinusoid of the given spatial mode
    and phase).  The waveforms are steady in time.
    """

    kind: str = "zero"
    amplitude: np.ndarray | None = None
    mode: int = 1
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "constant", "sine"):
            raise ValueError(f"unknown force kind {self.kind!r}")
        if self.kind != "zero":
            if self.amplitude is None:
                raise ValueError(f"{self.kind} forcing needs an amplitude vector")
            amp = np.asarray(self.amplitude, dtype=float)
            if amp.ndim != 1 or not np.all(np.isfinite(amp)):
                raise ValueError("force amplitudes must be a finite 1-D sequence")
            object.__setattr__(self, "amplitude", amp)
        if self.kind == "sine" and (int(self.mode) != self.mode or self.mode < 1):
            raise ValueError("spatial mode must be a positive integer")

    def evaluate(self, grid: Grid1D, time: float, n_constituents: int) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros((n_constituents, grid.n_cells))
        if self.amplitude.size != n_constituents:
            raise ValueError("need one force amplitude per constituent")
        if self.kind == "constant":
            return np.repeat(self.amplitude[:, None], grid.n_cells, axis=1)
        wave = np.sin(2.0 * math.pi * self.mode * grid.cell_centers / grid.length
                      + self.phase)
        return self.amplitude[:, None] * wave


@dataclass(frozen=True)
class FieldState:
    """Complete discrete state of a run at one instant."""

    grid: Grid1D
    spec: MixtureSpec
    time: float
    rho: np.ndarray       # (N, J) partial densities
    momentum: np.ndarray  # (N, J) partial momenta
    closure: SimplePressureLaw | CompositePressureLaw
    alpha: AlphaRule
    viscosity: ConstantViscosity | ConcentrationViscosity | None
    forces: ForceField

    @property
    def n_constituents(self) -> int:
        return self.rho.shape[0]

    def with_fields(self, rho: np.ndarray, momentum: np.ndarray,
                    time: float) -> "FieldState":
        return dataclasses.replace(self, rho=rho, momentum=momentum, time=time)

    def total_density(self) -> np.ndarray:
        return self.rho.sum(axis=0)

    def concentrations(self) -> np.ndarray:
        return concentrations(self.rho)

    def velocities(self) -> np.ndarray:
        """Per-constituent velocities; raises DensityFloorError when any
        partial density sits below the positivity floor."""
        if np.any(self.rho < DENSITY_FLOOR):
            flat = int(np.argmin(self.rho))
            i, j = np.unravel_index(flat, self.rho.shape)
            raise DensityFloorError(int(i), int(j), float(self.rho[i, j]), self.time)
        return self.momentum / self.rho

    def average_velocity(self) -> np.ndarray:
        xi = self.concentrations()
        return mixture.average_velocity(self.alpha.field(xi), self.velocities())

    def pressure(self) -> np.ndarray:
        return self.closure.pressure(self.rho, self.spec)

    def gamma_field(self):
        return self.closure.gamma_field(self.rho, self.spec)


def init_state(grid: Grid1D, spec: MixtureSpec, rho, velocities,
               closure, alpha: AlphaRule | None = None,
               viscosity: ConstantViscosity | ConcentrationViscosity | None = None,
               forces: ForceField | None = None,
               time: float = 0.0) -> FieldState:
    """Validate and assemble the initial state of a run.

    ``rho`` and ``velocities`` have shape (N, J).  Partial densities must
    be nonnegative with a positive total in every cell; constant
    viscosity matrices must pass the dissipation sign check, and the
    concentration-dependent rule additionally requires every initial
    concentration above ``MIN_INITIAL_CONCENTRATION`` so the rebuilt
    matrices stay uniformly positive definite.  A frozen-exponent
    composite closure without an explicit value gets the exponent of the
    domain-mean composition.
    """
    rho = np.array(rho, dtype=float)
    vel = np.array(velocities, dtype=float)
    shape = (spec.n_constituents, grid.n_cells)
    if rho.shape != shape or vel.shape != shape:
        raise ValueError(f"density and velocity fields must have shape {shape}")
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(vel))):
        raise ValueError("initial fields must be finite")
    if np.any(rho < 0.0):
        raise ValueError("initial partial densities must be nonnegative")
    if np.any(rho.sum(axis=0) <= 0.0):
        raise ValueError("every cell needs positive total density")
    alpha = alpha if alpha is not None else AlphaRule()
    forces = forces if forces is not None else ForceField()
    if viscosity is not None:
        xi0 = concentrations(rho)
        if (isinstance(viscosity, ConcentrationViscosity)
                and xi0.min() < MIN_INITIAL_CONCENTRATION):
            raise ValueError(
                "concentration-dependent viscosity needs every initial "
                f"concentration above {MIN_INITIAL_CONCENTRATION:g}; "
                "use constant matrices for near-vanishing constituents")
        report = viscosity.positivity(xi0)
        if not report.passed:
            raise ValueError(f"viscosity rejected: {report.failure_reason}")
    if (isinstance(closure, CompositePressureLaw)
            and closure.gamma_mode == "frozen" and closure.frozen_gamma is None):
        xi_mean = rho.sum(axis=1) / rho.sum()
        frozen = float(adiabatic_index(xi_mean, spec))
        closure = dataclasses.replace(closure, frozen_gamma=frozen)
    return FieldState(grid=grid, spec=spec, time=float(time),
                      rho=rho, momentum=rho * vel,
                      closure=closure, alpha=alpha,
                      viscosity=viscosity, forces=forces)


def rhs(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    """Semi-discrete time derivatives (d rho / dt, d momentum / dt).

    Continuity and momentum advection use first-order upwind fluxes of
    the shared average velocity evaluated at faces; the pressure gradient
    is centered and split by the alpha coefficients; the viscous term is
    a conservative face-flux difference of the coefficient matrix applied
    to the face velocity gradients.
    """
    grid = state.grid
    dx = grid.dx
    rho = state.rho
    mom = state.momentum
    vel = state.velocities()
    xi = rho / rho.sum(axis=0)
    alpha = state.alpha.field(xi)
    avg = (alpha * vel).sum(axis=0)

    # face j sits between cells j-1 and j
    v_face = 0.5 * (np.roll(avg, 1) + avg)
    take_left = v_face > 0.0
    flux_rho = v_face * np.where(take_left, np.roll(rho, 1, axis=1), rho)
    flux_mom = v_face * np.where(take_left, np.roll(mom, 1, axis=1), mom)
    drho = -(np.roll(flux_rho, -1, axis=1) - flux_rho) / dx
    dmom = -(np.roll(flux_mom, -1, axis=1) - flux_mom) / dx

    pressure = state.closure.pressure(rho, state.spec)
    grad_p = (np.roll(pressure, -1) - np.roll(pressure, 1)) / (2.0 * dx)
    dmom = dmom - alpha * grad_p

    if state.viscosity is not None:
        dvel_face = (vel - np.roll(vel, 1, axis=1)) / dx
        coeff = state.viscosity.face_coefficient(xi)
        if coeff.ndim == 2:
            stress_face = coeff @ dvel_face
        else:
            stress_face = np.einsum("jik,kj->ij", coeff, dvel_face)
        dmom = dmom + (np.roll(stress_face, -1, axis=1) - stress_face) / dx

    if state.forces.kind != "zero":
        force = state.forces.evaluate(grid, state.time, state.n_constituents)
        dmom = dmom + rho * force

    return drho, dmom


def stable_dt(state: FieldState, cfl: float = DEFAULT_CFL) -> float:
    """Largest stable step from the acoustic and viscous restrictions.

    The acoustic bound is dx / (|v| + c) with the frozen-composition
    sound speed c = sqrt(gamma p / rho); the viscous bound is
    dx^2 rho_min / (2 sigma) with sigma the largest symmetric eigenvalue
    of the stress coefficient matrix.  The result is ``cfl`` times the
    smaller of the two; concentration bounds need cfl <= 1/2.
    """
    if not (0.0 < cfl <= 1.0):
        raise ValueError("cfl must lie in (0, 1]")
    rho = state.rho
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(state.momentum))):
        raise ValueError("fields are no longer finite")
    vel = state.velocities()
    xi = state.concentrations()
    avg = mixture.average_velocity(state.alpha.field(xi), vel)
    pressure = state.pressure()
    if np.any(pressure < 0.0) or not np.all(np.isfinite(pressure)):
        raise ValueError("pressure field is not finite and nonnegative")
    total = rho.sum(axis=0)
    sound = np.sqrt(np.asarray(state.gamma_field()) * pressure / total)
    speed = np.abs(avg) + sound
    with np.errstate(divide="ignore"):
        dt = float(np.min(np.where(speed > 0.0, state.grid.dx / speed, np.inf)))
    if state.viscosity is not None:
        sigma = state.viscosity.max_coefficient_eigenvalue(xi)
        if sigma > 0.0:
            dt_visc = state.grid.dx ** 2 * float(rho.min()) / (2.0 * sigma)
            dt = min(dt, dt_visc)
    return cfl * dt


def step(state: FieldState, dt: float) -> FieldState:
    """One two-stage strong-stability-preserving Runge-Kutta step.

    The update is the half-and-half average of the input state and a
    twice-advanced Euler state, so any convex-combination bound of the
    Euler step survives.  A floor breach in either stage aborts with
    DensityFloorError and leaves the input state with the caller.
    """
    if not (math.isfinite(dt) and dt >= 0.0):
        raise ValueError("time step must be finite and nonnegative")
    d_rho1, d_mom1 = rhs(state)
    stage = state.with_fields(state.rho + dt * d_rho1,
                              state.momentum + dt * d_mom1,
                              state.time + dt)
    d_rho2, d_mom2 = rhs(stage)
    rho_new = 0.5 * state.rho + 0.5 * (stage.rho + dt * d_rho2)
    mom_new = 0.5 * state.momentum + 0.5 * (stage.momentum + dt * d_mom2)
    return state.with_fields(rho_new, mom_new, state.time + dt)


@dataclass(frozen=True)
class Snapshot:
    """Cell-centered field snapshot at one output instant."""

    time: float
    x: np.ndarray
    rho: np.ndarray
    velocity: np.ndarray
    concentration: np.ndarray
    pressure: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True)
class RunResult:
    """Snapshots and per-step diagnostics of one integration."""

    snapshots: tuple[Snapshot, ...]
    diagnostics: tuple
    steps: int
    final_state: FieldState

    @property
    def final_time(self) -> float:
        return self.final_state.time


def take_snapshot(state: FieldState) -> Snapshot:
    gamma = np.broadcast_to(np.asarray(state.gamma_field(), dtype=float),
                            (state.grid.n_cells,))
    return Snapshot(time=state.time, x=state.grid.cell_centers,
                    rho=state.rho.copy(), velocity=state.velocities(),
                    concentration=state.concentrations(),
                    pressure=np.broadcast_to(state.pressure(),
                                             (state.grid.n_cells,)).copy(),
                    gamma=gamma.copy())


def run(state: FieldState, t_end: float, cfl: float = DEFAULT_CFL,
        snapshot_interval: float | None = None,
        max_steps: int | None = None) -> RunResult:
    """Advance the state to ``t_end`` with adaptive stable steps.

    Snapshots are taken at the start, every ``snapshot_interval`` of
    simulated time (when given), and at the end.  Diagnostics are
    recorded every step; the opening row carries a NaN energy residual
    because no step precedes it.
    """
    from . import diagnostics as diag

    if not (math.isfinite(t_end) and t_end >= state.time):
        raise ValueError("end time must be finite and not before the state time")
    if snapshot_interval is not None and not snapshot_interval > 0.0:
        raise ValueError("snapshot interval must be positive")
    if max_steps is not None and max_steps < 1:
        raise ValueError("step budget must be positive")

    snapshots = [take_snapshot(state)]
    rows = [diag.initial_row(state)]
    next_snapshot = (state.time + snapshot_interval
                     if snapshot_interval is not None else math.inf)
    tiny = 1e-12 * max(1.0, abs(t_end))
    steps = 0
    while t_end - state.time > tiny:
        if max_steps is not None and steps >= max_steps:
            raise RuntimeError(f"step budget of {max_steps} exhausted at "
                               f"t={state.time:.6g}")
        dt = min(stable_dt(state, cfl), t_end - state.time)
        if not dt > 0.0:
            raise RuntimeError("stable step collapsed to zero")
        previous = state
        state = step(state, dt)
        steps += 1
        rows.append(diag.step_row(previous, state, dt))
        if state.time + tiny >= next_snapshot:
            snapshots.append(take_snapshot(state))
            next_snapshot += snapshot_interval
    if steps > 0 and snapshots[-1].time != state.time:
        snapshots.append(take_snapshot(state))
    return RunResult(snapshots=tuple(snapshots), diagnostics=tuple(rows),
                     steps=steps, final_state=state)
