"""Tests of the configuration grammar and plan building."""

import math

import numpy as np
import pytest

from multifluid.config import AdiabatRange, ConfigError, parse_config
from multifluid.solver import (
    CompositePressureLaw,
    ConcentrationViscosity,
    ConstantViscosity,
    SimplePressureLaw,
)

MINIMAL = """
[mixture]
molar_masses = 1.0
gammas = 1.4

[pressure]
law = simple
k = 1.0
gamma = 1.4

[grid]
cells = 8
length = 1.0

[time]
t_end = 0.0

[initial]
profile = uniform
density = 1.0
velocity = 0.0
"""

FULL = """
[mixture]
molar_masses = 2.0, 1.0
degrees_of_freedom = 5 3
pure_viscosities = 0.02 0.01
gas_constant = 1.0
reference_densities = 0.9 0.3
reference_temperature = 300.0
reference_volume = 2.0

[pressure]
law = composite
k1 = 2.0
gamma_mode = pointwise

[grid]
cells = 16
length = 2.0

[time]
t_end = 0.05
cfl = 0.3

[initial]
profile = sine
density = 1.0 1.0
velocity = 0.0 0.0
density_amplitude = 0.1 0.05
mode = 2
phase = 0.25

[alpha]
mode = constant
constants = 0.25 0.75

[viscosity]
rule = constant
shear = 0.02 0.005 ; 0.005 0.01

[forces]
kind = sine
amplitude = 0.1 0.0
mode = 1

[output]
directory = results
snapshot_interval = 0.01

[run]
max_steps = 5000

[adiabat]
v_start = 2.0
v_end = 0.5
steps = 8
"""


class TestAcceptance:
    def test_minimal_config_accepted(self):
        config = parse_config(MINIMAL)
        plan = config.simulation_plan()
        assert plan.state.n_constituents == 1
        assert plan.t_end == 0.0
        assert plan.cfl == 0.4
        assert plan.directory == "out"
        assert plan.snapshot_interval is None

    def test_full_config_round_trip(self):
        config = parse_config(FULL)
        assert config.spec.n_constituents == 2
        np.testing.assert_allclose(config.spec.gamma_constituents,
                                   [1.4, 1.0 + 2.0 / 3.0], rtol=1e-15)
        assert isinstance(config.closure, CompositePressureLaw)
        assert config.closure.gamma_mode == "pointwise"
        assert config.grid.n_cells == 16
        assert config.cfl == 0.3
        assert config.alpha.mode == "constant"
        assert isinstance(config.viscosity, ConstantViscosity)
        assert config.forces.kind == "sine"
        assert config.directory == "results"
        assert config.max_steps == 5000
        assert config.adiabat == AdiabatRange(2.0, 0.5, 8)
        plan = config.simulation_plan()
        assert plan.state.rho.shape == (2, 16)

    def test_comments_and_separators(self):
        text = MINIMAL.replace("density = 1.0",
                               "density = 1.0  # base density")
        parse_config(text)


class TestRejections:
    def test_unknown_section(self):
        with pytest.raises(ConfigError, match="unknown section"):
            parse_config(MINIMAL + "\n[turbulence]\nmodel = none\n")

    def test_unknown_key_with_path(self):
        with pytest.raises(ConfigError, match="grid.spacing"):
            parse_config(MINIMAL.replace("length = 1.0",
                                         "length = 1.0\nspacing = 0.1"))

    def test_bad_syntax(self):
        with pytest.raises(ConfigError, match="bad syntax"):
            parse_config("molar_masses = 1.0\n")

    def test_missing_mixture(self):
        with pytest.raises(ConfigError, match="mixture"):
            parse_config("[grid]\ncells = 8\nlength = 1.0\n")

    def test_gamma_and_freedom_conflict(self):
        text = MINIMAL.replace("gammas = 1.4",
                               "gammas = 1.4\ndegrees_of_freedom = 5")
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config(text)

    def test_nonnumeric_value_has_path(self):
        with pytest.raises(ConfigError, match="time.t_end"):
            parse_config(MINIMAL.replace("t_end = 0.0", "t_end = soon"))

    def test_domain_validation_with_path(self):
        with pytest.raises(ConfigError, match="mixture"):
            parse_config(MINIMAL.replace("gammas = 1.4", "gammas = 0.9"))
        with pytest.raises(ConfigError, match="grid"):
            parse_config(MINIMAL.replace("cells = 8", "cells = 2"))
        with pytest.raises(ConfigError, match="time.cfl"):
            parse_config(MINIMAL.replace("t_end = 0.0",
                                         "t_end = 0.0\ncfl = 1.5"))

    def test_law_specific_keys(self):
        with pytest.raises(ConfigError, match="pressure.k1"):
            parse_config(MINIMAL.replace("k = 1.0", "k = 1.0\nk1 = 2.0"))

    def test_pointwise_with_gamma_rejected(self):
        text = FULL.replace("gamma_mode = pointwise",
                            "gamma_mode = pointwise\ngamma = 1.4")
        with pytest.raises(ConfigError, match="pressure.gamma"):
            parse_config(text)

    def test_alpha_constants_must_sum_to_one(self):
        text = FULL.replace("constants = 0.25 0.75",
                            "constants = 0.25 0.25")
        with pytest.raises(ConfigError, match="alpha.constants"):
            parse_config(text)

    def test_viscosity_rule_keys(self):
        text = FULL.replace("rule = constant", "rule = none")
        with pytest.raises(ConfigError, match="viscosity.shear"):
            parse_config(text)

    def test_indefinite_viscosity_rejected_at_plan(self):
        text = FULL.replace("shear = 0.02 0.005 ; 0.005 0.01",
                            "shear = 0.01 0.05 ; 0.05 0.01")
        with pytest.raises(ConfigError, match="initial"):
            parse_config(text).simulation_plan()

    def test_missing_simulation_sections(self):
        config = parse_config("[mixture]\nmolar_masses = 1.0\ngammas = 1.4\n")
        with pytest.raises(ConfigError, match="missing"):
            config.simulation_plan()

    def test_missing_adiabat_section(self):
        config = parse_config(MINIMAL)
        with pytest.raises(ConfigError, match="adiabat"):
            config.adiabat_request()

    def test_negative_initial_density_rejected(self):
        text = MINIMAL.replace(
            "profile = uniform",
            "profile = sine").replace(
            "velocity = 0.0",
            "velocity = 0.0\ndensity_amplitude = 2.0")
        with pytest.raises(ConfigError, match="initial"):
            parse_config(text).simulation_plan()


class TestProfiles:
    def grid_and_spec(self, text):
        config = parse_config(text)
        return config, config.simulation_plan().state

    def test_sine_profile_values(self):
        config, state = self.grid_and_spec(FULL)
        x = config.grid.cell_centers
        wave = np.sin(2.0 * math.pi * 2 * x / 2.0 + 0.25)
        np.testing.assert_allclose(state.rho[0], 1.0 + 0.1 * wave, rtol=1e-14)
        np.testing.assert_allclose(state.rho[1], 1.0 + 0.05 * wave,
                                   rtol=1e-14)

    def test_bump_profile(self):
        text = MINIMAL.replace(
            "profile = uniform",
            "profile = bump").replace(
            "velocity = 0.0",
            "velocity = 0.0\ndensity_amplitude = 0.5\ncenter = 0.5"
            "\nwidth = 0.1")
        _, state = self.grid_and_spec(text)
        assert state.rho[0].max() > 1.3
        assert abs(state.rho[0, 0] - 1.0) < 1e-5
        # centered bump is mirror symmetric across the cell layout
        np.testing.assert_allclose(state.rho[0], state.rho[0][::-1],
                                   rtol=1e-12)

    def test_noise_profile_deterministic(self):
        text = MINIMAL.replace(
            "profile = uniform",
            "profile = noise").replace(
            "velocity = 0.0",
            "velocity = 0.0\ndensity_amplitude = 0.1\nseed = 7")
        _, state_a = self.grid_and_spec(text)
        _, state_b = self.grid_and_spec(text)
        np.testing.assert_array_equal(state_a.rho, state_b.rho)
        _, state_c = self.grid_and_spec(text.replace("seed = 7", "seed = 8"))
        assert not np.array_equal(state_a.rho, state_c.rho)

    def test_concentration_viscosity_rule(self):
        text = FULL.replace("rule = constant", "rule = concentration")
        text = text.replace("shear = 0.02 0.005 ; 0.005 0.01\n", "")
        config = parse_config(text)
        assert isinstance(config.viscosity, ConcentrationViscosity)
        np.testing.assert_array_equal(
            config.viscosity.model.pure_viscosities, [0.02, 0.01])


class TestAdiabatSection:
    def test_volumes(self):
        config = parse_config(FULL)
        spec, volumes = config.adiabat_request()
        assert spec.n_constituents == 2
        np.testing.assert_allclose(volumes, np.linspace(2.0, 0.5, 9),
                                   rtol=1e-15)

    def test_rejects_nonpositive_volume(self):
        text = FULL.replace("v_end = 0.5", "v_end = -0.5")
        with pytest.raises(ConfigError, match="adiabat"):
            parse_config(text)
