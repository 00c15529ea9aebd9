"""FastAPI application exposing the laboratory over HTTP.

Domain validation failures come back as 422 with the offending key
path in the detail; a density-floor breach during a simulation comes
back as 409 because the request was valid but the flow collapsed.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..solver import DensityFloorError
from . import handlers
from .schemas import (
    AdiabatOut,
    ConfigRequest,
    CounterexampleOut,
    CounterexampleRequest,
    IntegralOut,
    IntegralRequest,
    SearchOut,
    SearchRequest,
    SimulateOut,
    VersionOut,
    ViscosityOut,
    ViscosityRequest,
)

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(title="multifluid laboratory", version=__version__)

    def _domain(call, *args):
        try:
            return call(*args)
        except DensityFloorError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/version", response_model=VersionOut)
    def version() -> VersionOut:
        return handlers.version_info()

    @app.post("/counterexample", response_model=CounterexampleOut)
    def counterexample(request: CounterexampleRequest) -> CounterexampleOut:
        return _domain(handlers.counterexample_case, request)

    @app.post("/counterexample/integral", response_model=IntegralOut)
    def integral(request: IntegralRequest) -> IntegralOut:
        return _domain(handlers.counterexample_integral, request)

    @app.post("/counterexample/search", response_model=SearchOut)
    def search(request: SearchRequest) -> SearchOut:
        return _domain(handlers.counterexample_search, request)

    @app.post("/viscosity", response_model=ViscosityOut)
    def viscosity(request: ViscosityRequest) -> ViscosityOut:
        return _domain(handlers.viscosity_report, request)

    @app.post("/adiabat", response_model=AdiabatOut)
    def adiabat(request: ConfigRequest) -> AdiabatOut:
        return _domain(handlers.adiabat_table, request)

    @app.post("/simulate", response_model=SimulateOut)
    def simulate(request: ConfigRequest) -> SimulateOut:
        return _domain(handlers.simulate, request)

    return app


app = create_app()
