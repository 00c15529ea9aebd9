"""Constitutive relations for barotropic mixtures of ideal gases.

Everything here is a function of the partial densities of the
constituents: mass concentrations, the mixture heat-capacity ratio,
two equivalent pressure laws (a reduced-density form and a plain power
law in the total density), the pressure-splitting coefficients, and
the tabulation of an isentropic compression of a closed material
volume.

Per-constituent field arrays carry the constituent index on axis 0, so
every operation accepts a single state of shape ``(N,)`` or a field of
shape ``(N, ...)`` and broadcasts coefficient vectors accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ReferenceState",
    "MixtureSpec",
    "AdiabatSample",
    "AdiabatResult",
    "concentrations",
    "tilde_quantities",
    "adiabatic_index",
    "pressure_simple",
    "pressure_composite",
    "alpha_coeffs",
    "average_velocity",
    "reconstruct_densities",
    "adiabat_process",
    "adiabat_heat_residual",
]

#: molar (universal) gas constant, J / (mol K)
GAS_CONSTANT = 8.314462618

#: tolerance on "coefficients sum to one" checks
SIMPLEX_TOL = 1e-12


def _coeff(values: np.ndarray, ndim: int) -> np.ndarray:
    """Reshape a length-N coefficient vector so it broadcasts against
    per-constituent field arrays of dimension ``ndim``."""
    arr = np.asarray(values, dtype=float)
    return arr.reshape(arr.shape + (1,) * (ndim - 1))


def _as_positive_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(arr <= 0.0):
        raise ValueError(f"{name} must be strictly positive")
    return arr


@dataclass(frozen=True)
class ReferenceState:
    """Thermodynamic reference point that fixes the isentrope constants.

    Attributes
    ----------
    densities : ndarray, shape (N,)
        Partial densities of the constituents at the reference point.
    temperature : float
        Common temperature of the constituents at the reference point.
    volume : float
        Volume of the material region at the reference point.
    """

    densities: np.ndarray
    temperature: float
    volume: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "densities", _as_positive_vector(self.densities, "reference densities")
        )
        if not (math.isfinite(self.temperature) and self.temperature > 0.0):
            raise ValueError("reference temperature must be positive")
        if not (math.isfinite(self.volume) and self.volume > 0.0):
            raise ValueError("reference volume must be positive")

    @property
    def total_density(self) -> float:
        return float(self.densities.sum())


@dataclass(frozen=True)
class MixtureSpec:
    """Material description of an N-constituent ideal-gas mixture.

    Attributes
    ----------
    molar_masses : ndarray, shape (N,)
        Molar masses of the constituents, strictly positive.
    gamma_constituents : ndarray, shape (N,)
        Heat-capacity ratios of the pure constituents, each > 1.
    pure_viscosities : ndarray, shape (N,)
        Shear viscosities of the pure constituents, nonnegative.
    gas_constant : float
        Molar gas constant used in the pressure laws.
    reference : ReferenceState
        Reference point fixing the isentrope constants.
    """

    molar_masses: np.ndarray
    gamma_constituents: np.ndarray
    pure_viscosities: np.ndarray
    reference: ReferenceState
    gas_constant: float = GAS_CONSTANT

    def __post_init__(self) -> None:
        mm = _as_positive_vector(self.molar_masses, "molar masses")
        gg = np.asarray(self.gamma_constituents, dtype=float)
        vv = np.asarray(self.pure_viscosities, dtype=float)
        if gg.shape != mm.shape or vv.shape != mm.shape:
            raise ValueError("molar masses, heat-capacity ratios and viscosities "
                             "must have one entry per constituent")
        if not np.all(np.isfinite(gg)) or np.any(gg <= 1.0):
            raise ValueError("constituent heat-capacity ratios must exceed 1")
        if not np.all(np.isfinite(vv)) or np.any(vv < 0.0):
            raise ValueError("pure-constituent viscosities must be nonnegative")
        if not (math.isfinite(self.gas_constant) and self.gas_constant > 0.0):
            raise ValueError("gas constant must be positive")
        if self.reference.densities.shape != mm.shape:
            raise ValueError("reference densities must have one entry per constituent")
        object.__setattr__(self, "molar_masses", mm)
        object.__setattr__(self, "gamma_constituents", gg)
        object.__setattr__(self, "pure_viscosities", vv)

    @property
    def n_constituents(self) -> int:
        return self.molar_masses.size

    @property
    def degrees_of_freedom(self) -> np.ndarray:
        """Mechanical degrees of freedom per molecule, 2 / (gamma - 1)."""
        return 2.0 / (self.gamma_constituents - 1.0)

    @classmethod
    def from_degrees_of_freedom(cls, molar_masses, freedoms, pure_viscosities,
                                reference: ReferenceState,
                                gas_constant: float = GAS_CONSTANT) -> "MixtureSpec":
        """Build the spec from per-molecule degrees of freedom instead of
        heat-capacity ratios."""
        nu = _as_positive_vector(freedoms, "degrees of freedom")
        return cls(molar_masses, 1.0 + 2.0 / nu, pure_viscosities,
                   reference, gas_constant)


def concentrations(rho) -> np.ndarray:
    """Mass concentrations ``rho_i / sum_k rho_k`` of a density field.

    ``rho`` has shape (N, ...); the result has the same shape, sums to one
    along axis 0, and requires a strictly positive total in every cell.
    """
    rho = np.asarray(rho, dtype=float)
    total = rho.sum(axis=0)
    if np.any(total <= 0.0):
        raise ValueError("total density must be strictly positive everywhere")
    return rho / total


def tilde_quantities(rho, spec: MixtureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Mole-weighted reductions of a density field.

    Returns ``(tilde_rho, tilde_xi)`` where ``tilde_rho = sum_i rho_i / M_i``
    and ``tilde_xi = tilde_rho / rho``.  Shapes follow ``rho`` with axis 0
    summed out.
    """
    rho = np.asarray(rho, dtype=float)
    total = rho.sum(axis=0)
    if np.any(total <= 0.0):
        raise ValueError("total density must be strictly positive everywhere")
    tilde_rho = (rho / _coeff(spec.molar_masses, rho.ndim)).sum(axis=0)
    return tilde_rho, tilde_rho / total


def adiabatic_index(xi, spec: MixtureSpec):
    """Heat-capacity ratio of the mixture at mass concentrations ``xi``.

    The value is a mole-weighted harmonic interpolation of the constituent
    ratios and always lies in ``[min gamma_i, max gamma_i]``.  When every
    constituent shares one ratio that common value is returned unchanged,
    without round-off from the interpolation formula.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape[0] != spec.n_constituents:
        raise ValueError("concentration field must carry one row per constituent")
    if np.any(xi < 0.0):
        raise ValueError("concentrations must be nonnegative")
    sums = xi.sum(axis=0)
    if np.any(np.abs(sums - 1.0) > SIMPLEX_TOL):
        raise ValueError("concentrations must sum to one")
    gam = spec.gamma_constituents
    if np.all(gam == gam[0]):
        common = float(gam[0])
        if xi.ndim == 1:
            return common
        return np.full(xi.shape[1:], common)
    weights = xi / _coeff(spec.molar_masses, xi.ndim)
    num = weights.sum(axis=0)
    den = (weights / _coeff(gam - 1.0, xi.ndim)).sum(axis=0)
    return 1.0 + num / den


def pressure_simple(rho_total, k: float, gamma) -> np.ndarray:
    """Power-law pressure ``k * rho^gamma`` of the total density."""
    rho_total = np.asarray(rho_total, dtype=float)
    if np.any(rho_total <= 0.0):
        raise ValueError("total density must be strictly positive")
    if k < 0.0:
        raise ValueError("pressure coefficient must be nonnegative")
    return k * rho_total ** np.asarray(gamma, dtype=float)


def pressure_composite(rho, k1: float, spec: MixtureSpec, gamma=None) -> np.ndarray:
    """Reduced-density pressure ``k1 * rho^(gamma-1) * tilde_rho``.

    With ``gamma=None`` the mixture heat-capacity ratio is evaluated
    pointwise from the concentrations; passing a value freezes it.
    """
    if k1 <= 0.0:
        raise ValueError("pressure coefficient must be strictly positive")
    rho = np.asarray(rho, dtype=float)
    tilde_rho, _ = tilde_quantities(rho, spec)
    total = rho.sum(axis=0)
    if gamma is None:
        gamma = adiabatic_index(rho / total, spec)
    return k1 * total ** (np.asarray(gamma, dtype=float) - 1.0) * tilde_rho


def alpha_coeffs(xi, mode: str = "concentration", constants=None) -> np.ndarray:
    """Pressure-splitting coefficients for the momentum balances.

    ``mode="concentration"`` returns the concentrations themselves;
    ``mode="constant"`` broadcasts a fixed positive vector summing to one.
    Either way the result has the shape of ``xi``.
    """
    xi = np.asarray(xi, dtype=float)
    if mode == "concentration":
        return xi
    if mode != "constant":
        raise ValueError(f"unknown coefficient mode {mode!r}")
    if constants is None:
        raise ValueError("constant mode needs a coefficient vector")
    cc = _as_positive_vector(constants, "pressure-splitting constants")
    if cc.size != xi.shape[0]:
        raise ValueError("need one pressure-splitting constant per constituent")
    if abs(math.fsum(cc) - 1.0) > SIMPLEX_TOL:
        raise ValueError("pressure-splitting constants must sum to one")
    return np.broadcast_to(_coeff(cc, xi.ndim), xi.shape).copy()


def average_velocity(alpha, u) -> np.ndarray:
    """Coefficient-weighted average ``sum_i alpha_i u_i`` over axis 0."""
    alpha = np.asarray(alpha, dtype=float)
    u = np.asarray(u, dtype=float)
    if alpha.shape != u.shape:
        raise ValueError("coefficients and velocities must have matching shapes")
    return (alpha * u).sum(axis=0)


def reconstruct_densities(rho_total, tilde_rho, m1: float, m2: float) -> np.ndarray:
    """Recover the two partial densities of a binary mixture from the
    total density and the mole-weighted density.

    Solves ``rho_1 + rho_2 = rho`` and ``rho_1/m1 + rho_2/m2 = tilde_rho``;
    distinct molar masses are required.  Returns shape ``(2, ...)``.  The
    result can have negative entries when the pair is not realizable.
    """
    if not (m1 > 0.0 and m2 > 0.0):
        raise ValueError("molar masses must be positive")
    if m1 == m2:
        raise ValueError("reconstruction needs distinct molar masses")
    rho_total = np.asarray(rho_total, dtype=float)
    tilde_rho = np.asarray(tilde_rho, dtype=float)
    span = m1 - m2
    rho_1 = m1 * (rho_total - m2 * tilde_rho) / span
    rho_2 = m2 * (m1 * tilde_rho - rho_total) / span
    return np.stack([rho_1, rho_2])


@dataclass(frozen=True)
class AdiabatSample:
    """One tabulated point of an isentropic compression."""

    volume: float
    total_density: float
    temperature: float
    partial_pressures: np.ndarray
    pressure: float


@dataclass(frozen=True)
class AdiabatResult:
    """Isentrope of a closed material volume of fixed composition.

    ``alpha_sum`` and ``beta_sum`` are the two mass-weighted mole sums that
    control the process (``beta_sum / alpha_sum`` is the polytropic
    exponent, i.e. the mixture ratio minus one).  ``c_temperature_volume``,
    ``c_temperature_density`` and ``c_pressure_density`` are the process
    constants relating temperature to volume, temperature to density and
    pressure to density; the last one equals ``k1_composite``.  ``k_simple``
    is the plain power-law coefficient matched at the reference composition.
    """

    alpha_sum: float
    beta_sum: float
    c_temperature_volume: float
    c_temperature_density: float
    c_pressure_density: float
    k_simple: float
    k1_composite: float
    gamma_reference: float
    samples: tuple[AdiabatSample, ...]

    @property
    def exponent(self) -> float:
        return self.beta_sum / self.alpha_sum


def _adiabat_constants(spec: MixtureSpec):
    """Shared constants of the closed-volume isentrope: constituent
    masses, the two mole sums, the exponent, and the temperature-volume
    constant."""
    ref = spec.reference
    masses = ref.densities * ref.volume
    alpha_sum = float((masses / (spec.molar_masses * (spec.gamma_constituents - 1.0))).sum())
    beta_sum = float((masses / spec.molar_masses).sum())
    exponent = beta_sum / alpha_sum
    c_tv = ref.volume ** exponent * ref.temperature
    return masses, alpha_sum, beta_sum, exponent, c_tv


def adiabat_process(spec: MixtureSpec, volumes) -> AdiabatResult:
    """Tabulate the isentropic compression of a closed material volume.

    The composition is frozen at the reference state, so the temperature
    follows a single polytrope in the volume and the total pressure is a
    power law in the total density.  ``volumes`` is any positive sequence
    of volumes to tabulate.
    """
    volumes = np.atleast_1d(np.asarray(volumes, dtype=float))
    if volumes.size == 0:
        raise ValueError("need at least one volume")
    if not np.all(np.isfinite(volumes)) or np.any(volumes <= 0.0):
        raise ValueError("volumes must be positive")
    masses, alpha_sum, beta_sum, exponent, c_tv = _adiabat_constants(spec)
    ref = spec.reference
    total_mass = float(masses.sum())
    rho0 = ref.total_density
    c_td = rho0 ** (-exponent) * ref.temperature
    c_pd = spec.gas_constant * c_td
    tilde0 = float((ref.densities / spec.molar_masses).sum())
    k1 = c_pd
    k_simple = k1 * (tilde0 / rho0)
    samples = []
    for vol in volumes:
        rho_i = masses / vol
        theta = c_tv * vol ** (-exponent)
        partial = spec.gas_constant * theta * rho_i / spec.molar_masses
        samples.append(AdiabatSample(
            volume=float(vol),
            total_density=total_mass / vol,
            temperature=float(theta),
            partial_pressures=partial,
            pressure=float(partial.sum()),
        ))
    return AdiabatResult(
        alpha_sum=alpha_sum,
        beta_sum=beta_sum,
        c_temperature_volume=c_tv,
        c_temperature_density=c_td,
        c_pressure_density=c_pd,
        k_simple=k_simple,
        k1_composite=k1,
        gamma_reference=1.0 + exponent,
        samples=tuple(samples),
    )


def adiabat_heat_residual(spec: MixtureSpec, volumes) -> float:
    """Summed first-law defect of a tabulated isentrope.

    Across each volume step the internal-energy change is evaluated in
    closed form while the compression work is integrated with the
    midpoint rule, so the summed magnitude over a fixed volume range
    shrinks quadratically with the step size.
    """
    volumes = np.asarray(volumes, dtype=float)
    if volumes.ndim != 1 or volumes.size < 2:
        raise ValueError("need a 1-D tabulation with at least two volumes")
    if not np.all(np.isfinite(volumes)) or np.any(volumes <= 0.0):
        raise ValueError("volumes must be positive")
    _, alpha_sum, beta_sum, exponent, c_tv = _adiabat_constants(spec)
    theta = c_tv * volumes ** (-exponent)
    energy_change = alpha_sum * spec.gas_constant * np.diff(theta)
    v_mid = 0.5 * (volumes[:-1] + volumes[1:])
    pressure_mid = beta_sum * spec.gas_constant * c_tv * v_mid ** (-exponent) / v_mid
    work = pressure_mid * np.diff(volumes)
    return float(np.abs(energy_change + work).sum())
