"""Tests of the conservation and energy-budget audits."""

import math

import numpy as np
import pytest

from multifluid import diagnostics
from multifluid.diagnostics import (
    dissipation,
    energy,
    energy_residual,
    extremum_check,
    internal_energy_residual,
    masses,
    power_input,
)
from multifluid.mixture import MixtureSpec, ReferenceState
from multifluid.solver import (
    CompositePressureLaw,
    ConstantViscosity,
    ForceField,
    Grid1D,
    SimplePressureLaw,
    init_state,
    run,
    stable_dt,
    step,
)
from multifluid.viscosity import ViscosityMatrices


def make_spec(gammas=(1.4, 1.4)):
    return MixtureSpec(np.array([2.0, 1.0]), np.asarray(gammas, float),
                       np.zeros(2), ReferenceState(np.ones(2), 1.0, 1.0),
                       gas_constant=1.0)


def uniform_state(velocity=(0.5, -0.25), k=1.0, viscosity=None, forces=None):
    grid = Grid1D(16, 2.0)
    rho = np.stack([np.full(16, 1.5), np.full(16, 0.5)])
    vel = np.stack([np.full(16, velocity[0]), np.full(16, velocity[1])])
    return init_state(grid, make_spec(), rho, vel,
                      SimplePressureLaw(k, 1.4), viscosity=viscosity,
                      forces=forces)


class TestMasses:
    def test_uniform_values(self):
        state = uniform_state()
        np.testing.assert_array_equal(masses(state), [3.0, 1.0])

    def test_matches_fsum_oracle(self):
        grid = Grid1D(16, 2.0)
        rng = np.random.default_rng(5)
        rho = rng.uniform(0.5, 2.0, (2, 16))
        state = init_state(grid, make_spec(), rho, np.zeros((2, 16)),
                           SimplePressureLaw(1.0, 1.4))
        got = masses(state)
        for i in range(2):
            oracle = math.fsum(rho[i]) * 0.125
            assert got[i] == oracle


class TestEnergy:
    def test_hand_value(self):
        # kinetic: (1.5*0.25 + 0.5*0.0625)/2 per cell, internal: 2^1.4/0.4
        state = uniform_state()
        kinetic = 0.5 * (1.5 * 0.25 + 0.5 * 0.0625) * 2.0
        internal = (2.0 ** 1.4 / 0.4) * 2.0
        assert abs(energy(state) - (kinetic + internal)) <= 1e-12

    def test_zero_pressure_keeps_kinetic_only(self):
        state = uniform_state(k=0.0)
        kinetic = 0.5 * (1.5 * 0.25 + 0.5 * 0.0625) * 2.0
        assert abs(energy(state) - kinetic) <= 1e-14


class TestDissipation:
    def viscous_state(self):
        grid = Grid1D(32, 1.0)
        x = grid.cell_centers
        rho = np.ones((2, 32))
        vel = np.stack([0.2 * np.sin(2.0 * math.pi * x),
                        -0.1 * np.sin(2.0 * math.pi * x)])
        shear = np.array([[2.0, 0.5], [0.5, 1.0]])
        visc = ConstantViscosity(ViscosityMatrices(shear, np.zeros((2, 2))))
        return init_state(grid, make_spec(), rho, vel,
                          SimplePressureLaw(1.0, 1.4), viscosity=visc)

    def test_matches_quadratic_form_oracle(self):
        state = self.viscous_state()
        vel = state.velocities()
        dx = state.grid.dx
        coeff = 2.0 * np.array([[2.0, 0.5], [0.5, 1.0]])
        total = 0.0
        for j in range(32):
            grad = [(vel[i, (j + 1) % 32] - vel[i, j - 1]) / (2.0 * dx)
                    for i in range(2)]
            for a in range(2):
                for b in range(2):
                    total += coeff[a, b] * grad[a] * grad[b] * dx
        value = dissipation(state)
        assert abs(value - total) <= 1e-12 * max(1.0, abs(total))
        assert value > 0.0

    def test_inviscid_is_zero(self):
        assert dissipation(uniform_state()) == 0.0


class TestPowerInput:
    def test_uniform_force_value(self):
        force = ForceField("constant", amplitude=(1.0, 2.0))
        state = uniform_state(velocity=(0.5, -0.25), forces=force)
        # integral of rho_i u_i f_i: (1.5*0.5*1 + 0.5*(-0.25)*2) * 2
        assert abs(power_input(state) - (0.75 - 0.25) * 2.0) <= 1e-14

    def test_zero_without_forcing(self):
        assert power_input(uniform_state()) == 0.0


class TestEnergyResidual:
    def test_uniform_forced_flow_is_exact(self):
        # uniform fields stay uniform; kinetic energy is quadratic in time
        # and the trapezoidal budget matches it to round-off
        force = ForceField("constant", amplitude=(0.3, -0.2))
        state = uniform_state(velocity=(0.0, 0.0), forces=force)
        dt = 0.01
        for _ in range(5):
            nxt = step(state, dt)
            residual = energy_residual(state, nxt, dt)
            assert abs(residual) <= 1e-12
            state = nxt

    def test_quiescent_flow_zero(self):
        state = uniform_state(velocity=(0.0, 0.0))
        nxt = step(state, 0.01)
        assert energy_residual(state, nxt, 0.01) == 0.0

    def test_grid_mismatch_rejected(self):
        a = uniform_state()
        grid = Grid1D(8, 2.0)
        b = init_state(grid, make_spec(), np.ones((2, 8)), np.zeros((2, 8)),
                       SimplePressureLaw(1.0, 1.4))
        with pytest.raises(ValueError, match="grids"):
            energy_residual(a, b, 0.01)
        with pytest.raises(ValueError, match="positive"):
            energy_residual(a, a, 0.0)

    def test_recorded_in_run_rows(self):
        grid = Grid1D(32, 1.0)
        x = grid.cell_centers
        rho = np.stack([1.0 + 0.05 * np.sin(2.0 * math.pi * x),
                        np.full(32, 1.0)])
        state = init_state(grid, make_spec(), rho, np.zeros((2, 32)),
                           SimplePressureLaw(1.0, 1.4))
        out = run(state, 0.02)
        assert math.isnan(out.diagnostics[0].energy_residual)
        for row in out.diagnostics[1:]:
            assert math.isfinite(row.energy_residual)


class TestInternalEnergyResidual:
    def test_uniform_flow_zero(self):
        state = uniform_state(velocity=(0.2, 0.2))
        nxt = step(state, stable_dt(state))
        # uniform fields: both the internal energy and the compression
        # term are constant, so the defect vanishes identically
        assert internal_energy_residual(state, nxt,
                                        nxt.time - state.time) == 0.0

    def test_rejects_varying_exponent(self):
        grid = Grid1D(8, 1.0)
        spec = make_spec(gammas=(1.4, 5.0 / 3.0))
        rho = np.stack([np.linspace(0.5, 1.5, 8), np.full(8, 1.0)])
        state = init_state(grid, spec, rho, np.zeros((2, 8)),
                           CompositePressureLaw(1.0, gamma_mode="pointwise"))
        nxt = step(state, 1e-4)
        with pytest.raises(ValueError, match="uniform exponent"):
            internal_energy_residual(state, nxt, 1e-4)


class TestExtremumCheck:
    def test_pass_and_fail(self):
        verdict = extremum_check(np.array([0.2, 0.5, 0.8]), (0.0, 1.0))
        assert verdict.passed
        verdict = extremum_check(np.array([0.2, 1.2]), (0.0, 1.0))
        assert not verdict.passed
        assert verdict.observed_max == 1.2

    def test_tolerance_band(self):
        field = np.array([-1e-12, 1.0 + 1e-12])
        assert extremum_check(field, (0.0, 1.0), tolerance=1e-10).passed
        assert not extremum_check(field, (0.0, 1.0), tolerance=1e-13).passed

    def test_rejects_unordered_bounds(self):
        with pytest.raises(ValueError, match="ordered"):
            extremum_check(np.zeros(3), (1.0, 0.0))


class TestRowHelpers:
    def test_initial_row_nan_residual(self):
        row = diagnostics.initial_row(uniform_state())
        assert math.isnan(row.energy_residual)
        np.testing.assert_array_equal(row.masses, [3.0, 1.0])

    def test_step_row_consistency(self):
        state = uniform_state(velocity=(0.1, 0.1))
        dt = stable_dt(state)
        nxt = step(state, dt)
        row = diagnostics.step_row(state, nxt, dt)
        assert row.time == nxt.time
        assert row.energy == energy(nxt)
        assert row.energy_residual == energy_residual(state, nxt, dt)
