"""Conservation and energy-budget audits of discrete states.

All integrals are cell sums times the cell width; the constituent
masses use compensated summation so drift measurements are not limited
by the accumulator.  The energy residual compares the change of total
energy across one step with the trapezoidal average of dissipation and
forcing power, which is the discrete shadow of the continuous budget
dE/dt = -D + W on a periodic domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .solver import FieldState

__all__ = [
    "DiagnosticsRow",
    "ExtremumVerdict",
    "masses",
    "energy",
    "dissipation",
    "power_input",
    "energy_residual",
    "internal_energy_residual",
    "extremum_check",
    "initial_row",
    "step_row",
]


@dataclass(frozen=True)
class DiagnosticsRow:
    """Per-step audit record."""

    time: float
    masses: np.ndarray
    energy: float
    dissipation: float
    power_input: float
    energy_residual: float


def masses(state: "FieldState") -> np.ndarray:
    """Constituent masses, compensated cell sums times the cell width."""
    dx = state.grid.dx
    return np.array([math.fsum(row) * dx for row in state.rho])


def energy(state: "FieldState") -> float:
    """Total energy: kinetic plus barotropic internal, p / (gamma - 1)."""
    gamma = np.asarray(state.gamma_field(), dtype=float)
    if np.any(gamma <= 1.0):
        raise ValueError("heat-capacity ratio must exceed 1 for the "
                         "internal energy to be defined")
    vel = state.velocities()
    kinetic = 0.5 * float((state.rho * vel * vel).sum())
    internal = float((state.pressure() / (gamma - 1.0)).sum())
    return (kinetic + internal) * state.grid.dx


def _strain_rates(state: "FieldState") -> np.ndarray:
    """Centered velocity derivatives, one row per constituent."""
    vel = state.velocities()
    return (np.roll(vel, -1, axis=1) - np.roll(vel, 1, axis=1)) / (2.0 * state.grid.dx)


def dissipation(state: "FieldState") -> float:
    """Viscous dissipation rate, the strain-weighted quadratic form of
    the stress coefficient matrix summed over cells."""
    if state.viscosity is None:
        return 0.0
    rates = _strain_rates(state)
    coeff = state.viscosity.cell_coefficient(state.concentrations())
    if coeff.ndim == 2:
        cellwise = np.einsum("ij,ik,jk->k", coeff, rates, rates)
    else:
        cellwise = np.einsum("kij,ik,jk->k", coeff, rates, rates)
    return float(cellwise.sum()) * state.grid.dx


def power_input(state: "FieldState") -> float:
    """Rate of work of the body forces on the constituent momenta."""
    if state.forces.kind == "zero":
        return 0.0
    force = state.forces.evaluate(state.grid, state.time, state.n_constituents)
    return float((state.momentum * force).sum()) * state.grid.dx


def energy_residual(previous: "FieldState", current: "FieldState",
                    dt: float) -> float:
    """Defect of the discrete energy budget across one step.

    Returns (E1 - E0)/dt + (D0 + D1)/2 - (W0 + W1)/2; for the continuous
    flow this combination vanishes, so its size measures the numerical
    energy production of the scheme.
    """
    if previous.grid != current.grid:
        raise ValueError("states live on different grids")
    if not dt > 0.0:
        raise ValueError("time step must be positive")
    delta = energy(current) - energy(previous)
    mean_dissipation = 0.5 * (dissipation(previous) + dissipation(current))
    mean_power = 0.5 * (power_input(previous) + power_input(current))
    return delta / dt + mean_dissipation - mean_power


def internal_energy_residual(previous: "FieldState", current: "FieldState",
                             dt: float) -> float:
    """Defect of the advected internal-energy identity across one step.

    The barotropic internal energy satisfies d/dt (integral of
    p/(gamma-1)) + integral of p dv/dx = 0 on a periodic domain when the
    polytropic data are spatially uniform; this returns the discrete
    version with a trapezoidal average of the compression term.  Raises
    when the exponent varies across cells.
    """
    if previous.grid != current.grid:
        raise ValueError("states live on different grids")
    if not dt > 0.0:
        raise ValueError("time step must be positive")

    def _internal(state: "FieldState") -> float:
        gamma = np.asarray(state.gamma_field(), dtype=float)
        if gamma.ndim and np.ptp(gamma) > 1e-12:
            raise ValueError("identity requires a spatially uniform exponent")
        return float((state.pressure() / (gamma - 1.0)).sum()) * state.grid.dx

    def _compression(state: "FieldState") -> float:
        avg = state.average_velocity()
        div = (np.roll(avg, -1) - np.roll(avg, 1)) / (2.0 * state.grid.dx)
        return float((state.pressure() * div).sum()) * state.grid.dx

    delta = _internal(current) - _internal(previous)
    mean = 0.5 * (_compression(previous) + _compression(current))
    return delta / dt + mean


@dataclass(frozen=True)
class ExtremumVerdict:
    """Outcome of a discrete maximum-principle check."""

    passed: bool
    lower: float
    upper: float
    observed_min: float
    observed_max: float
    tolerance: float


def extremum_check(field, bounds: tuple[float, float],
                   tolerance: float = 1e-10) -> ExtremumVerdict:
    """Check that a field stays inside [lower, upper] up to ``tolerance``."""
    lower, upper = float(bounds[0]), float(bounds[1])
    if not lower <= upper:
        raise ValueError("bounds must be ordered")
    arr = np.asarray(field, dtype=float)
    observed_min = float(arr.min())
    observed_max = float(arr.max())
    passed = (observed_min >= lower - tolerance
              and observed_max <= upper + tolerance)
    return ExtremumVerdict(passed, lower, upper, observed_min,
                           observed_max, tolerance)


def initial_row(state: "FieldState") -> DiagnosticsRow:
    """Audit record of the starting state; no step precedes it, so the
    residual slot carries NaN."""
    return DiagnosticsRow(time=state.time, masses=masses(state),
                          energy=energy(state),
                          dissipation=dissipation(state),
                          power_input=power_input(state),
                          energy_residual=float("nan"))


def step_row(previous: "FieldState", current: "FieldState",
             dt: float) -> DiagnosticsRow:
    """Audit record after one step from ``previous`` to ``current``."""
    return DiagnosticsRow(time=current.time, masses=masses(current),
                          energy=energy(current),
                          dissipation=dissipation(current),
                          power_input=power_input(current),
                          energy_residual=energy_residual(previous, current, dt))
