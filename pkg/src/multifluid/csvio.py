"""CSV serialization of run artifacts.

Every floating-point value is written with 17 significant digits, which
round-trips IEEE doubles exactly, so rerunning a deterministic
configuration reproduces the files byte for byte.
"""

from __future__ import annotations

import os
from collections.abc import Iterable

from .counterexamples import CounterexampleReport, SearchResult
from .mixture import AdiabatResult
from .solver import RunResult, Snapshot

__all__ = [
    "format_value",
    "snapshot_csv",
    "diagnostics_csv",
    "adiabat_csv",
    "counterexample_csv",
    "search_csv",
    "run_documents",
    "write_documents",
]


def format_value(value) -> str:
    """One CSV field: floats at 17 significant digits, the rest as str."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, str)):
        return str(value)
    if value is None:
        return ""
    return f"{float(value):.17g}"


def _table(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def snapshot_csv(snapshot: Snapshot) -> str:
    """Cell table: x, partial densities, velocities, concentrations,
    pressure, exponent."""
    n = snapshot.rho.shape[0]
    header = (["x"]
              + [f"rho_{i + 1}" for i in range(n)]
              + [f"u_{i + 1}" for i in range(n)]
              + [f"xi_{i + 1}" for i in range(n)]
              + ["p", "gamma"])
    rows = []
    for j in range(snapshot.x.size):
        rows.append([snapshot.x[j]]
                    + list(snapshot.rho[:, j])
                    + list(snapshot.velocity[:, j])
                    + list(snapshot.concentration[:, j])
                    + [snapshot.pressure[j], snapshot.gamma[j]])
    return _table(header, rows)


def diagnostics_csv(rows, n_constituents: int) -> str:
    """Per-step table: time, constituent masses, energy, dissipation,
    forcing power, energy residual."""
    header = (["t"]
              + [f"mass_{i + 1}" for i in range(n_constituents)]
              + ["energy", "dissipation", "power_input", "energy_residual"])
    table_rows = []
    for row in rows:
        table_rows.append([row.time] + list(row.masses)
                          + [row.energy, row.dissipation, row.power_input,
                             row.energy_residual])
    return _table(header, table_rows)


def adiabat_csv(result: AdiabatResult) -> str:
    """Isentrope table: volume, total density, temperature, partial
    pressures, total pressure."""
    n = result.samples[0].partial_pressures.size
    header = (["volume", "rho", "theta"]
              + [f"p_{i + 1}" for i in range(n)]
              + ["p"])
    rows = []
    for sample in result.samples:
        rows.append([sample.volume, sample.total_density, sample.temperature]
                    + list(sample.partial_pressures) + [sample.pressure])
    return _table(header, rows)


def counterexample_csv(report: CounterexampleReport) -> str:
    """Single-row table with both states and both sign products."""
    header = ["case", "m1", "m2", "gamma", "epsilon", "ratio",
              "rho_total_1", "tilde_rho_1", "p_1", "rho_1_1", "rho_2_1",
              "rho_total_2", "tilde_rho_2", "p_2", "rho_1_2", "rho_2_2",
              "product_tilde", "product_total", "densities_positive",
              "verdict", "near_degenerate"]
    s1, s2 = report.state1, report.state2
    row = [report.case, report.m1, report.m2, report.gamma, report.epsilon,
           report.ratio,
           s1.rho_total, s1.tilde_rho, s1.pressure,
           s1.components[0], s1.components[1],
           s2.rho_total, s2.tilde_rho, s2.pressure,
           s2.components[0], s2.components[1],
           report.product_tilde, report.product_total,
           report.densities_positive, report.verdict, report.near_degenerate]
    return _table(header, [row])


def search_csv(result: SearchResult) -> str:
    """Single-row table with the search outcome."""
    header = ["found", "draws", "weight_1", "weight_2", "m1", "m2", "gamma",
              "case", "ratio", "value"]
    row = [result.found, result.draws, result.weight[0], result.weight[1],
           result.m1, result.m2, result.gamma,
           "" if result.case is None else result.case,
           result.ratio, result.value]
    return _table(header, [row])


def run_documents(result: RunResult) -> list[tuple[str, str]]:
    """Named CSV documents of one integration: numbered snapshots plus
    the diagnostics series."""
    documents = []
    for index, snapshot in enumerate(result.snapshots):
        documents.append((f"snapshot_{index:04d}.csv", snapshot_csv(snapshot)))
    n = result.final_state.n_constituents
    documents.append(("diagnostics.csv",
                      diagnostics_csv(result.diagnostics, n)))
    return documents


def write_documents(directory: str, documents: list[tuple[str, str]]) -> list[str]:
    """Write named documents under ``directory``; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, content in documents:
        path = os.path.join(directory, name)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(content)
        paths.append(path)
    return paths
