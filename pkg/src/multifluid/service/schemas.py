"""Request and response models of the HTTP interface.

Structured endpoints (counterexamples, viscosity) take their parameters
directly; the configuration-driven endpoints (adiabat, simulate) take
the same INI document the CLI reads, so one description drives both
interfaces.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

__all__ = [
    "CounterexampleRequest",
    "IntegralRequest",
    "SearchRequest",
    "DensityStateOut",
    "CounterexampleOut",
    "IntegralOut",
    "SearchOut",
    "ViscosityRequest",
    "ViscosityOut",
    "ConfigRequest",
    "AdiabatOut",
    "SimulateOut",
    "DocumentOut",
    "VersionOut",
]


class CounterexampleRequest(BaseModel):
    """Parameters of one closed-form non-monotonicity construction."""

    case: Literal["tilde", "total"] = "tilde"
    m1: float = 2.0
    m2: float = 1.0
    gamma: float = 2.0
    ratio: float | None = Field(
        default=None, description="total-density ratio for the total case; "
                                  "default is the geometric midpoint")


class IntegralRequest(BaseModel):
    """Two-cell integral form of a construction under a density weight."""

    case: Literal["tilde", "total"] = "tilde"
    m1: float = 2.0
    m2: float = 1.0
    gamma: float = 2.0
    ratio: float | None = None
    weight: tuple[float, float] = (1.0, 1.0)
    measure: float = 1.0


class SearchRequest(BaseModel):
    """Randomized search for a pair defeating a density weight."""

    weight: tuple[float, float]
    m_low: float = 1.01
    m_high: float = 100.0
    gamma_low: float = 1.05
    gamma_high: float = 5.0
    samples: int = 1000
    seed: int = 0


class DensityStateOut(BaseModel):
    rho_total: float
    tilde_rho: float
    components: list[float]
    pressure: float


class CounterexampleOut(BaseModel):
    case: str
    m1: float
    m2: float
    gamma: float
    epsilon: float
    ratio: float | None
    state1: DensityStateOut
    state2: DensityStateOut
    product_tilde: float
    product_total: float
    densities_positive: bool
    verdict: str
    near_degenerate: bool


class IntegralOut(BaseModel):
    report: CounterexampleOut
    weight: tuple[float, float]
    measure: float
    value: float
    negative: bool


class SearchOut(BaseModel):
    found: bool
    draws: int
    weight: tuple[float, float]
    m1: float | None
    m2: float | None
    gamma: float | None
    case: str | None
    ratio: float | None
    value: float | None


class ViscosityRequest(BaseModel):
    """Mixture viscosity matrices at one composition."""

    pure_viscosities: list[float]
    concentrations: list[float]
    rule: Literal["simple", "exponential"] = "simple"
    empiric_alpha: list[list[float]] | None = None
    empiric_beta: list[list[float]] | None = None
    second: list[list[float]] | None = None


class ViscosityOut(BaseModel):
    shear: list[list[float]]
    second: list[list[float]]
    bulk_combination: list[list[float]]
    shear_min_eigenvalue: float
    bulk_min_eigenvalue: float
    positive: bool
    failure_reason: str | None


class ConfigRequest(BaseModel):
    """An INI configuration document, as the CLI would read from file."""

    config: str


class AdiabatOut(BaseModel):
    alpha_sum: float
    beta_sum: float
    exponent: float
    gamma_reference: float
    c_temperature_volume: float
    c_temperature_density: float
    c_pressure_density: float
    k_simple: float
    k1_composite: float
    rows: int
    document: str


class DocumentOut(BaseModel):
    name: str
    content: str


class SimulateOut(BaseModel):
    steps: int
    final_time: float
    masses: list[float]
    energy: float
    directory: str
    documents: list[DocumentOut]


class VersionOut(BaseModel):
    version: str
    grammar: str
