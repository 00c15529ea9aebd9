"""Tests of the HTTP service layer."""

import pytest
from fastapi.testclient import TestClient

from multifluid import __version__
from multifluid.service.app import app

SIM_CONFIG = """
[mixture]
molar_masses = 2.0 1.0
gammas = 1.4 1.4

[pressure]
law = simple
k = 1.0
gamma = 1.4

[grid]
cells = 16
length = 1.0

[time]
t_end = 0.01

[initial]
profile = sine
density = 1.0 1.0
velocity = 0.0 0.0
density_amplitude = 0.1 0.05
"""

ADIABAT_CONFIG = """
[mixture]
molar_masses = 0.028 0.032
degrees_of_freedom = 5 3
reference_densities = 0.9 0.3
reference_temperature = 300.0
reference_volume = 2.0

[adiabat]
v_start = 2.0
v_end = 0.5
steps = 4
"""


@pytest.fixture()
def client():
    return TestClient(app)


class TestMeta:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_version(self, client):
        body = client.get("/version").json()
        assert body["version"] == __version__
        assert body["grammar"] == "1"


class TestCounterexampleRoutes:
    def test_tilde_case(self, client):
        response = client.post("/counterexample", json={"case": "tilde"})
        assert response.status_code == 200
        body = response.json()
        assert body["verdict"] == "tilde"
        assert body["product_tilde"] < 0.0
        assert body["densities_positive"] is True
        assert len(body["state1"]["components"]) == 2

    def test_total_case_with_ratio(self, client):
        response = client.post("/counterexample",
                               json={"case": "total", "ratio": 1.3})
        assert response.status_code == 200
        assert response.json()["product_total"] == pytest.approx(
            -0.021528629627634552, rel=1e-12)

    def test_invalid_parameters_rejected(self, client):
        response = client.post("/counterexample",
                               json={"case": "tilde", "m1": 1.0, "m2": 2.0})
        assert response.status_code == 422
        assert "m1 > m2" in response.json()["detail"]

    def test_integral_route(self, client):
        response = client.post("/counterexample/integral",
                               json={"case": "total", "weight": [1.0, 1.0]})
        assert response.status_code == 200
        body = response.json()
        assert body["negative"] is True
        assert body["value"] < 0.0

    def test_search_route(self, client):
        response = client.post("/counterexample/search",
                               json={"weight": [0.0, 1.0], "samples": 300,
                                     "seed": 11})
        assert response.status_code == 200
        body = response.json()
        assert body["found"] is True
        assert body["value"] < 0.0

    def test_schema_validation(self, client):
        response = client.post("/counterexample", json={"case": "sideways"})
        assert response.status_code == 422


class TestViscosityRoute:
    def test_worked_matrix(self, client):
        response = client.post("/viscosity",
                               json={"pure_viscosities": [4.0, 1.0],
                                     "concentrations": [0.5, 0.5]})
        assert response.status_code == 200
        body = response.json()
        assert body["shear"] == [[1.5, 0.5], [0.5, 0.75]]
        assert body["positive"] is True
        assert body["failure_reason"] is None

    def test_negative_second_flagged(self, client):
        response = client.post("/viscosity",
                               json={"pure_viscosities": [1.0, 1.0],
                                     "concentrations": [0.5, 0.5],
                                     "second": [[-5.0, 0.0], [0.0, -5.0]]})
        body = response.json()
        assert body["positive"] is False
        assert "2/3" in body["failure_reason"]


class TestConfigRoutes:
    def test_adiabat(self, client):
        response = client.post("/adiabat", json={"config": ADIABAT_CONFIG})
        assert response.status_code == 200
        body = response.json()
        assert body["rows"] == 5
        assert body["document"].startswith("volume,rho,theta")
        assert body["k1_composite"] == pytest.approx(2302.1740500888573,
                                                     rel=1e-12)

    def test_adiabat_missing_section(self, client):
        response = client.post("/adiabat", json={"config": SIM_CONFIG})
        assert response.status_code == 422
        assert "adiabat" in response.json()["detail"]

    def test_simulate(self, client):
        response = client.post("/simulate", json={"config": SIM_CONFIG})
        assert response.status_code == 200
        body = response.json()
        assert body["steps"] >= 1
        assert body["final_time"] == pytest.approx(0.01, abs=1e-12)
        assert body["masses"] == pytest.approx([1.0, 1.0], rel=1e-12)
        names = [doc["name"] for doc in body["documents"]]
        assert "diagnostics.csv" in names
        assert names[0] == "snapshot_0000.csv"

    def test_simulate_bad_config(self, client):
        response = client.post("/simulate",
                               json={"config": "[mixture]\nbad_key = 1\n"})
        assert response.status_code == 422
        assert "mixture.bad_key" in response.json()["detail"]

    def test_simulate_floor_breach_conflict(self, client):
        config = """
[mixture]
molar_masses = 2.0 1.0
gammas = 1.4 1.4

[pressure]
law = simple
k = 0.0
gamma = 1.4

[grid]
cells = 32
length = 1.0

[time]
t_end = 10.0

[initial]
profile = sine
density = 1.0 1.0
velocity = 0.0 0.0
velocity_amplitude = 4.0 4.0

[run]
max_steps = 100000
"""
        response = client.post("/simulate", json={"config": config})
        assert response.status_code == 409
        assert "floor" in response.json()["detail"]
