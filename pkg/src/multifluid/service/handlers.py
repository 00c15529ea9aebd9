"""Request handlers shared by the HTTP routes and the CLI.

Each handler maps a request model to a response model and lets domain
exceptions (ValueError, ConfigError, DensityFloorError) propagate; the
callers translate them into status codes or exit codes.
"""

from __future__ import annotations

import numpy as np

from .. import __version__, counterexamples, csvio, solver, viscosity
from ..config import GRAMMAR_VERSION, parse_config
from ..counterexamples import CounterexampleReport
from ..mixture import adiabat_process
from .schemas import (
    AdiabatOut,
    ConfigRequest,
    CounterexampleOut,
    CounterexampleRequest,
    DensityStateOut,
    DocumentOut,
    IntegralOut,
    IntegralRequest,
    SearchOut,
    SearchRequest,
    SimulateOut,
    VersionOut,
    ViscosityOut,
    ViscosityRequest,
)

__all__ = [
    "build_report",
    "counterexample_case",
    "counterexample_integral",
    "counterexample_search",
    "viscosity_report",
    "adiabat_table",
    "simulate",
    "version_info",
]


def build_report(request: CounterexampleRequest) -> CounterexampleReport:
    if request.case == "tilde":
        if request.ratio is not None:
            raise ValueError("the tilde case takes no density ratio")
        return counterexamples.case_tilde_rho(request.m1, request.m2,
                                              request.gamma)
    return counterexamples.case_total_rho(request.m1, request.m2,
                                          request.gamma, request.ratio)


def _state_out(state) -> DensityStateOut:
    return DensityStateOut(rho_total=state.rho_total, tilde_rho=state.tilde_rho,
                           components=[float(c) for c in state.components],
                           pressure=state.pressure)


def _report_out(report: CounterexampleReport) -> CounterexampleOut:
    return CounterexampleOut(
        case=report.case, m1=report.m1, m2=report.m2, gamma=report.gamma,
        epsilon=report.epsilon, ratio=report.ratio,
        state1=_state_out(report.state1), state2=_state_out(report.state2),
        product_tilde=report.product_tilde, product_total=report.product_total,
        densities_positive=report.densities_positive,
        verdict=report.verdict, near_degenerate=report.near_degenerate)


def counterexample_case(request: CounterexampleRequest) -> CounterexampleOut:
    return _report_out(build_report(request))


def counterexample_integral(request: IntegralRequest) -> IntegralOut:
    report = build_report(CounterexampleRequest(
        case=request.case, m1=request.m1, m2=request.m2,
        gamma=request.gamma, ratio=request.ratio))
    value = counterexamples.integral_counterexample(report, request.weight,
                                                    request.measure)
    return IntegralOut(report=_report_out(report), weight=request.weight,
                       measure=request.measure, value=value,
                       negative=value < 0.0)


def counterexample_search(request: SearchRequest) -> SearchOut:
    result = counterexamples.weight_search(
        request.weight, m_range=(request.m_low, request.m_high),
        gamma_range=(request.gamma_low, request.gamma_high),
        samples=request.samples, seed=request.seed)
    return SearchOut(found=result.found, draws=result.draws,
                     weight=tuple(result.weight), m1=result.m1, m2=result.m2,
                     gamma=result.gamma, case=result.case, ratio=result.ratio,
                     value=result.value)


def viscosity_report(request: ViscosityRequest) -> ViscosityOut:
    model = viscosity.ViscosityModel(
        np.asarray(request.pure_viscosities, dtype=float),
        offdiag_rule=request.rule,
        empiric_alpha=request.empiric_alpha,
        empiric_beta=request.empiric_beta,
        second_matrix=request.second)
    xi = np.asarray(request.concentrations, dtype=float)
    matrices = viscosity.ViscosityMatrices.from_model(model, xi)
    check = viscosity.bulk_constraint_check(matrices)
    return ViscosityOut(
        shear=matrices.shear.tolist(), second=matrices.second.tolist(),
        bulk_combination=matrices.bulk_combination.tolist(),
        shear_min_eigenvalue=check.shear_min_eigenvalue,
        bulk_min_eigenvalue=check.bulk_min_eigenvalue,
        positive=check.passed, failure_reason=check.failure_reason)


def adiabat_table(request: ConfigRequest) -> AdiabatOut:
    config = parse_config(request.config)
    spec, volumes = config.adiabat_request()
    result = adiabat_process(spec, volumes)
    return AdiabatOut(
        alpha_sum=result.alpha_sum, beta_sum=result.beta_sum,
        exponent=result.exponent, gamma_reference=result.gamma_reference,
        c_temperature_volume=result.c_temperature_volume,
        c_temperature_density=result.c_temperature_density,
        c_pressure_density=result.c_pressure_density,
        k_simple=result.k_simple, k1_composite=result.k1_composite,
        rows=len(result.samples), document=csvio.adiabat_csv(result))


def simulate(request: ConfigRequest) -> SimulateOut:
    config = parse_config(request.config)
    plan = config.simulation_plan()
    result = solver.run(plan.state, plan.t_end, cfl=plan.cfl,
                        snapshot_interval=plan.snapshot_interval,
                        max_steps=plan.max_steps)
    last = result.diagnostics[-1]
    return SimulateOut(
        steps=result.steps, final_time=result.final_time,
        masses=[float(m) for m in last.masses], energy=last.energy,
        directory=plan.directory,
        documents=[DocumentOut(name=name, content=content)
                   for name, content in csvio.run_documents(result)])


def version_info() -> VersionOut:
    return VersionOut(version=__version__, grammar=GRAMMAR_VERSION)
