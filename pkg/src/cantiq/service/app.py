"""HTTP face of the simulator.

Stateless: every endpoint is a pure function of its request body, so
concurrent requests need no coordination. Numerical failures surface as
422 responses with ``detail.kind == "numerical"``; malformed requests get
the usual validation errors.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, figures
from ..errors import ConfigError, SimulationError
from ..verify import VerifyProfile, run_verification
from .schemas import (
    CatEvolveRequest,
    CheckOutcome,
    CouplingsResponse,
    DataResponse,
    ParamsRequest,
    SqueezeDissipativeRequest,
    SqueezeUnitaryRequest,
    SteadySweepRequest,
    SteadySweepResponse,
    VerifyRequest,
    VerifyResponse,
    WignerRequest,
)


def create_app():
    app = FastAPI(title="cantiq", version=__version__)

    @app.exception_handler(SimulationError)
    async def _numerical_error(request: Request, exc: SimulationError):
        return JSONResponse(
            status_code=422,
            content={"detail": {
                "kind": "numerical",
                "error": type(exc).__name__,
                "message": str(exc),
            }},
        )

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"kind": "config", "message": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/wigner", response_model=DataResponse)
    def wigner(req: WignerRequest):
        header, rows = figures.wigner_rows(req)
        return DataResponse(name=req.name, header=header, rows=rows)

    @app.post("/cat-evolve", response_model=DataResponse)
    def cat_evolve(req: CatEvolveRequest):
        header, rows = figures.cat_evolve_rows(req)
        return DataResponse(name=req.name, header=header, rows=rows)

    @app.post("/squeeze-unitary", response_model=DataResponse)
    def squeeze_unitary(req: SqueezeUnitaryRequest):
        header, rows = figures.squeeze_unitary_rows(req)
        return DataResponse(name=req.name, header=header, rows=rows)

    @app.post("/squeeze-dissipative", response_model=DataResponse)
    def squeeze_dissipative(req: SqueezeDissipativeRequest):
        header, rows = figures.squeeze_dissipative_rows(req)
        return DataResponse(name=req.name, header=header, rows=rows)

    @app.post("/steady-sweep", response_model=SteadySweepResponse)
    def steady_sweep(req: SteadySweepRequest):
        header, rows, t_c = figures.steady_sweep_rows(req)
        return SteadySweepResponse(name=req.name, header=header, rows=rows,
                                   critical_temperature=t_c)

    @app.post("/params", response_model=CouplingsResponse)
    def params(req: ParamsRequest):
        return CouplingsResponse(couplings=figures.coupling_report(req))

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        results = run_verification(VerifyProfile(dim=req.dim, tol=req.tol))
        checks = [CheckOutcome(name=r.name, passed=r.passed, value=r.value,
                               threshold=r.threshold, detail=r.detail)
                  for r in results]
        return VerifyResponse(passed=all(c.passed for c in checks),
                              checks=checks)

    return app
