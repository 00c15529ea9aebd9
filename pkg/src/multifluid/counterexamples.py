"""Non-monotonicity demonstrations for the reduced-density pressure law.

For a binary mixture with distinct molar masses the pressure
``p = rho^(gamma-1) * tilde_rho`` (unit coefficient) is monotone in
neither the mole-weighted density nor the total density: there exist
pairs of physically admissible states, all component densities
positive, whose pressures are ordered against either reduction.  The
constructions here produce such pairs in closed form, extend them to a
two-cell piecewise-constant field with componentwise equal masses, and
search parameter ranges for a pair that defeats a given weighting of
the component densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixture import reconstruct_densities

__all__ = [
    "DensityState",
    "CounterexampleReport",
    "SearchResult",
    "case_tilde_rho",
    "case_total_rho",
    "total_rho_ratio_bounds",
    "two_cell_fields",
    "integral_counterexample",
    "weight_search",
]

#: |product| below this is reported as numerically degenerate
NEAR_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class DensityState:
    """One admissible state of a binary mixture with its pressure."""

    rho_total: float
    tilde_rho: float
    components: np.ndarray
    pressure: float


@dataclass(frozen=True)
class CounterexampleReport:
    """A pair of states with the sign evidence for both orderings.

    ``product_tilde`` is (p2 - p1)(tilde_rho2 - tilde_rho1) and
    ``product_total`` is (p2 - p1)(rho2 - rho1); the construction drives
    the one named by ``case`` negative.  ``verdict`` names the reduction
    whose monotonicity actually failed ("tilde", "total" or "none"),
    and ``near_degenerate`` flags a product too close to zero to carry a
    trustworthy sign.
    """

    case: str
    m1: float
    m2: float
    gamma: float
    epsilon: float
    ratio: float | None
    state1: DensityState
    state2: DensityState
    product_tilde: float
    product_total: float
    densities_positive: bool
    verdict: str
    near_degenerate: bool


def _check_admissible(m1: float, m2: float, gamma: float) -> None:
    if not (m1 > m2 > 0.0):
        raise ValueError(f"need molar masses m1 > m2 > 0, got m1={m1}, m2={m2}")
    if not gamma > 1.0:
        raise ValueError(f"need heat-capacity ratio > 1, got {gamma}")


def _make_state(rho_total: float, tilde_rho: float,
                m1: float, m2: float, gamma: float) -> DensityState:
    components = reconstruct_densities(rho_total, tilde_rho, m1, m2)
    total = float(components.sum())
    tilde = float(components[0] / m1 + components[1] / m2)
    # unit pressure coefficient; the sign argument is scale invariant
    pressure = total ** (gamma - 1.0) * tilde
    return DensityState(float(rho_total), float(tilde_rho), components, pressure)


def _build_report(case: str, m1: float, m2: float, gamma: float,
                  epsilon: float, ratio: float | None,
                  state1: DensityState, state2: DensityState) -> CounterexampleReport:
    dp = state2.pressure - state1.pressure
    product_tilde = dp * (state2.tilde_rho - state1.tilde_rho)
    product_total = dp * (state2.rho_total - state1.rho_total)
    positive = bool(np.all(state1.components > 0.0) and np.all(state2.components > 0.0))
    target = product_tilde if case == "tilde" else product_total
    verdict = case if target < 0.0 else "none"
    return CounterexampleReport(
        case=case, m1=m1, m2=m2, gamma=gamma,
        epsilon=epsilon, ratio=ratio,
        state1=state1, state2=state2,
        product_tilde=product_tilde, product_total=product_total,
        densities_positive=positive, verdict=verdict,
        near_degenerate=abs(target) < NEAR_DEGENERATE_TOL,
    )


def case_tilde_rho(m1: float, m2: float, gamma: float) -> CounterexampleReport:
    """Pair of states whose pressures are ordered against the
    mole-weighted density.

    State 1 sits at ``tilde_rho = 1`` with total density ``m1 - epsilon``;
    state 2 raises ``tilde_rho`` to ``(m1/m2)^((gamma-1)/(2 gamma))`` while
    scaling the total density by ``m2 + epsilon``.  The perturbation
    ``epsilon = sqrt(m1 m2) (m1 - m2) / (3 (m1 + m2))`` keeps both states
    componentwise positive and makes the pressure drop while tilde_rho
    rises, for every admissible ``(m1, m2, gamma)``.
    """
    _check_admissible(m1, m2, gamma)
    epsilon = math.sqrt(m1 * m2) / 3.0 * (m1 - m2) / (m1 + m2)
    tilde2 = (m1 / m2) ** ((gamma - 1.0) / (2.0 * gamma))
    state1 = _make_state(m1 - epsilon, 1.0, m1, m2, gamma)
    state2 = _make_state((m2 + epsilon) * tilde2, tilde2, m1, m2, gamma)
    return _build_report("tilde", m1, m2, gamma, epsilon, None, state1, state2)


def total_rho_ratio_bounds(m1: float, m2: float, gamma: float) -> tuple[float, float]:
    """Open interval of admissible density ratios for the total-density
    construction."""
    _check_admissible(m1, m2, gamma)
    return ((m1 / m2) ** ((gamma - 1.0) / (2.0 * gamma)),
            (m1 / m2) ** 0.5)


def case_total_rho(m1: float, m2: float, gamma: float,
                   ratio: float | None = None) -> CounterexampleReport:
    """Pair of states whose pressures are ordered against the total
    density.

    ``ratio`` is the target ratio rho1 / rho2 of the two total densities
    and must lie strictly inside :func:`total_rho_ratio_bounds`; the
    default is the geometric midpoint of that interval.  The perturbation
    ``epsilon = (m1 - ratio m2) / (1 + ratio)`` then lands in
    ``(0, m1 - m2)``, both states are componentwise positive, and the
    pressure rises while the total density falls.
    """
    lo, hi = total_rho_ratio_bounds(m1, m2, gamma)
    if ratio is None:
        ratio = math.sqrt(lo * hi)
    if not (lo < ratio < hi):
        raise ValueError(
            f"density ratio must lie strictly inside ({lo:.12g}, {hi:.12g}), got {ratio}")
    epsilon = (m1 - ratio * m2) / (1.0 + ratio)
    tilde2 = lo
    state1 = _make_state(m1 - epsilon, 1.0, m1, m2, gamma)
    state2 = _make_state((m2 + epsilon) * tilde2, tilde2, m1, m2, gamma)
    return _build_report("total", m1, m2, gamma, epsilon, ratio, state1, state2)


def two_cell_fields(report: CounterexampleReport,
                    measure: float = 1.0) -> tuple[np.ndarray, np.ndarray, float]:
    """Two piecewise-constant component-density fields on a two-cell
    domain of total measure ``measure``.

    The fields place the report's states in opposite cells, so the
    componentwise masses of the two fields coincide exactly.  Returns
    ``(field1, field2, cell_measure)`` with fields of shape
    (cell, constituent).
    """
    if not measure > 0.0:
        raise ValueError("domain measure must be positive")
    a = report.state1.components
    b = report.state2.components
    return np.stack([a, b]), np.stack([b, a]), measure / 2.0


def integral_counterexample(report: CounterexampleReport, weight,
                            measure: float = 1.0) -> float:
    """Integral of (p(field1) - p(field2)) (w . field1 - w . field2) over
    the two-cell domain.

    For the swapped fields this equals ``measure`` times the pointwise
    product of the report with the weighted density difference, so the
    weights (1/m1, 1/m2) reproduce the tilde product and (1, 1) the total
    product.  Computed by direct quadrature, not the reduction.
    """
    weight = np.asarray(weight, dtype=float)
    if weight.shape != (2,):
        raise ValueError("need one weight per constituent")
    field1, field2, cell = two_cell_fields(report, measure)
    # swapped cells: componentwise masses agree bitwise
    assert np.array_equal(cell * field1.sum(axis=0), cell * field2.sum(axis=0))
    p1 = np.array([report.state1.pressure, report.state2.pressure])
    p2 = p1[::-1]
    w1 = field1 @ weight
    w2 = field2 @ weight
    return float(cell * ((p1 - p2) * (w1 - w2)).sum())


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a randomized search for a weight-defeating pair."""

    found: bool
    draws: int
    weight: np.ndarray
    m1: float | None = None
    m2: float | None = None
    gamma: float | None = None
    case: str | None = None
    ratio: float | None = None
    value: float | None = None


def weight_search(weight, m_range=(1.01, 100.0), gamma_range=(1.05, 5.0),
                  samples: int = 1000, seed: int = 0,
                  measure: float = 1.0) -> SearchResult:
    """Randomized search for a state pair whose two-cell integral is
    negative under the given density weighting.

    Draws molar-mass pairs from ``m_range`` (ordered so m1 > m2) and
    heat-capacity ratios from ``gamma_range``, tries both closed-form
    constructions on each draw, and stops at the first negative integral.
    Deterministic for a fixed ``seed``.
    """
    weight = np.asarray(weight, dtype=float)
    if weight.shape != (2,):
        raise ValueError("need one weight per constituent")
    m_lo, m_hi = float(m_range[0]), float(m_range[1])
    g_lo, g_hi = float(gamma_range[0]), float(gamma_range[1])
    if not (0.0 < m_lo <= m_hi):
        raise ValueError("molar-mass range must be positive and ordered")
    if not (1.0 < g_lo <= g_hi):
        raise ValueError("heat-capacity range must be ordered with lower bound > 1")
    if samples < 1:
        raise ValueError("need at least one draw")
    rng = np.random.default_rng(seed)
    for draw in range(1, samples + 1):
        m_a, m_b = rng.uniform(m_lo, m_hi, size=2)
        m1, m2 = (m_a, m_b) if m_a > m_b else (m_b, m_a)
        gamma = float(rng.uniform(g_lo, g_hi))
        if not m1 > m2:
            continue  # equal draws carry no construction
        for build in (case_tilde_rho, case_total_rho):
            report = build(m1, m2, gamma)
            value = integral_counterexample(report, weight, measure)
            if value < 0.0:
                return SearchResult(True, draw, weight, m1, m2, gamma,
                                    report.case, report.ratio, value)
    return SearchResult(False, samples, weight)
