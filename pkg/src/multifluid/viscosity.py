"""Viscosity matrices coupling the constituent stresses.

Each constituent's viscous stress is a matrix combination of every
constituent's rate of strain.  Off-diagonal shear entries follow a
geometric-mean mixing rule weighted by the concentrations, optionally
with an exponential concentration correction; diagonal entries are
completed so that each row dominates its off-diagonal part and the
matrix stays symmetric positive definite at interior compositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OFFDIAG_SIMPLE",
    "OFFDIAG_EXPONENTIAL",
    "ViscosityModel",
    "ViscosityMatrices",
    "PositivityReport",
    "shear_matrix",
    "offdiag_general",
    "bulk_constraint_check",
    "stress_1d",
]

OFFDIAG_SIMPLE = "simple"
OFFDIAG_EXPONENTIAL = "exponential"

#: slack allowed on "nonnegative eigenvalue" checks
EIG_TOL = 1e-12


def _square(values, n: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (n, n):
        raise ValueError(f"{name} must be an {n}x{n} matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class ViscosityModel:
    """Concentration-dependent mixing rule for the shear matrix.

    ``pure_viscosities`` are the shear viscosities of the isolated
    constituents.  ``offdiag_rule`` selects how off-diagonal couplings
    depend on composition: the plain geometric-mean product, or the same
    product scaled by an exponential of the two concentrations with
    empirical coefficient matrices ``empiric_alpha`` / ``empiric_beta``.
    ``second_matrix`` is the constant matrix of second (dilatational)
    viscosities added on top of the shear part.
    """

    pure_viscosities: np.ndarray
    offdiag_rule: str = OFFDIAG_SIMPLE
    empiric_alpha: np.ndarray | None = None
    empiric_beta: np.ndarray | None = None
    second_matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        mu = np.asarray(self.pure_viscosities, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("pure viscosities must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(mu)) or np.any(mu < 0.0):
            raise ValueError("pure viscosities must be nonnegative")
        object.__setattr__(self, "pure_viscosities", mu)
        n = mu.size
        if self.offdiag_rule not in (OFFDIAG_SIMPLE, OFFDIAG_EXPONENTIAL):
            raise ValueError(f"unknown off-diagonal rule {self.offdiag_rule!r}")
        for name in ("empiric_alpha", "empiric_beta"):
            given = getattr(self, name)
            arr = np.zeros((n, n)) if given is None else _square(given, n, name)
            object.__setattr__(self, name, arr)
        second = self.second_matrix
        second = np.zeros((n, n)) if second is None else _square(second, n, "second matrix")
        if not np.allclose(second, second.T):
            raise ValueError("second matrix must be symmetric")
        object.__setattr__(self, "second_matrix", second)

    @property
    def n_constituents(self) -> int:
        return self.pure_viscosities.size


def offdiag_general(model: ViscosityModel, i: int, j: int, xi) -> tuple[float, bool]:
    """One off-diagonal shear coupling at concentrations ``xi``.

    Returns ``(value, degenerate)``; ``degenerate`` flags the corner
    ``xi_i + xi_j = 0`` where the exponential weight is 0/0 and the value
    is taken as 0 because the product prefactor vanishes there.
    """
    if i == j:
        raise ValueError("off-diagonal coupling needs i != j")
    xi = np.asarray(xi, dtype=float)
    n = model.n_constituents
    if xi.shape != (n,):
        raise ValueError("need one concentration per constituent")
    if np.any(xi < 0.0):
        raise ValueError("concentrations must be nonnegative")
    xi_i = float(xi[i])
    xi_j = float(xi[j])
    if xi_i + xi_j == 0.0:
        return 0.0, True
    mu = model.pure_viscosities
    prefactor = (math.sqrt(mu[i]) * xi_i) * (math.sqrt(mu[j]) * xi_j)
    weight = (model.empiric_alpha[i, j] * xi_i + model.empiric_beta[i, j] * xi_j) / (xi_i + xi_j)
    return prefactor * math.exp(weight), False


def shear_matrix(model: ViscosityModel, xi) -> np.ndarray:
    """Shear viscosity matrix of the mixture at concentrations ``xi``.

    Off-diagonal entries come from the model's mixing rule; diagonal
    entries equal the pure contribution ``mu_i xi_i^2`` plus the row sum
    of the off-diagonal couplings, which keeps the matrix symmetric and
    positive definite whenever all concentrations are positive.
    """
    xi = np.asarray(xi, dtype=float)
    n = model.n_constituents
    if xi.shape != (n,):
        raise ValueError("need one concentration per constituent")
    if np.any(xi < 0.0):
        raise ValueError("concentrations must be nonnegative")
    if model.offdiag_rule == OFFDIAG_SIMPLE:
        nu = np.sqrt(model.pure_viscosities) * xi
        mat = np.outer(nu, nu)
        mat[np.diag_indices(n)] += nu * (nu.sum() - nu)
        return mat
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                mat[i, j], _ = offdiag_general(model, i, j, xi)
    mat[np.diag_indices(n)] = model.pure_viscosities * xi ** 2 + mat.sum(axis=1)
    return mat


@dataclass(frozen=True)
class ViscosityMatrices:
    """Shear and second viscosity matrices of one mixture state.

    ``provenance`` records how the pair was produced ("constant" for
    user-supplied matrices, "concentration" for the mixing rule).
    """

    shear: np.ndarray
    second: np.ndarray
    provenance: str = "constant"

    def __post_init__(self) -> None:
        shear = np.asarray(self.shear, dtype=float)
        if shear.ndim != 2 or shear.shape[0] != shear.shape[1]:
            raise ValueError("shear matrix must be square")
        second = _square(self.second, shear.shape[0], "second matrix")
        if not np.all(np.isfinite(shear)):
            raise ValueError("shear matrix must be finite")
        object.__setattr__(self, "shear", shear)
        object.__setattr__(self, "second", second)

    @classmethod
    def from_model(cls, model: ViscosityModel, xi) -> "ViscosityMatrices":
        return cls(shear_matrix(model, xi), model.second_matrix,
                   provenance="concentration")

    @property
    def n_constituents(self) -> int:
        return self.shear.shape[0]

    @property
    def bulk_combination(self) -> np.ndarray:
        """Second matrix plus two thirds of the shear matrix; this
        combination must be positive semidefinite for the dissipation to
        have a sign."""
        return self.second + (2.0 / 3.0) * self.shear

    @property
    def stress_coefficient_1d(self) -> np.ndarray:
        """Coefficient matrix of the one-dimensional viscous stress,
        ``2 * shear + second``."""
        return 2.0 * self.shear + self.second


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of the dissipation sign check on a matrix pair."""

    shear_min_eigenvalue: float
    bulk_min_eigenvalue: float
    shear_positive: bool
    bulk_nonnegative: bool

    @property
    def passed(self) -> bool:
        return self.shear_positive and self.bulk_nonnegative

    @property
    def failure_reason(self) -> str | None:
        if self.passed:
            return None
        if not self.shear_positive:
            return ("shear matrix is not positive definite "
                    f"(minimal symmetric eigenvalue {self.shear_min_eigenvalue:.6g})")
        return ("second + (2/3) shear is not positive semidefinite "
                f"(minimal symmetric eigenvalue {self.bulk_min_eigenvalue:.6g})")


def _min_symmetric_eigenvalue(mat: np.ndarray) -> float:
    sym = 0.5 * (mat + mat.T)
    return float(np.linalg.eigvalsh(sym).min())


def bulk_constraint_check(matrices: ViscosityMatrices, tol: float = EIG_TOL) -> PositivityReport:
    """Check the sign constraints that make the viscous dissipation
    nonnegative: shear positive definite, second + (2/3) shear positive
    semidefinite (within ``tol``)."""
    shear_min = _min_symmetric_eigenvalue(matrices.shear)
    bulk_min = _min_symmetric_eigenvalue(matrices.bulk_combination)
    return PositivityReport(
        shear_min_eigenvalue=shear_min,
        bulk_min_eigenvalue=bulk_min,
        shear_positive=shear_min > 0.0,
        bulk_nonnegative=bulk_min >= -tol,
    )


def stress_1d(matrices: ViscosityMatrices, velocity_gradients) -> np.ndarray:
    """One-dimensional viscous stresses ``(2 shear + second) @ du/dx``.

    ``velocity_gradients`` holds one velocity derivative per constituent;
    the result is the stress felt by each constituent's momentum balance.
    """
    grads = np.asarray(velocity_gradients, dtype=float)
    n = matrices.n_constituents
    if grads.shape[0] != n:
        raise ValueError("need one velocity gradient per constituent")
    return matrices.stress_coefficient_1d @ grads
