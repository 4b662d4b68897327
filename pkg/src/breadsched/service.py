"""HTTP facade over the benchmark pipeline.

One endpoint per pipeline command. Requests carry filesystem paths (datasets,
snapshots, output directory) plus the same knobs the CLI exposes; responses
are the harness summary dicts. Jobs run synchronously in the request: this is
a local orchestration shell, not a job queue.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import harness
from .config import AppConfig, load_config


class JobRequest(BaseModel):
    config: str | None = None         # INI overlay; defaults apply when omitted
    out: str = "out"
    seed: int = Field(default=0, ge=0)
    grid_stride: int | None = Field(default=None, ge=1)


class GenerateRequest(JobRequest):
    volatility: str = "medium"
    days: int = Field(default=400, ge=1)


class TuneRequest(JobRequest):
    data: str


class TrainRequest(JobRequest):
    data: str
    beta: float | None = None
    gamma: float | None = None
    use_all: bool = False


class PredictRequest(JobRequest):
    data: str
    snapshot: str
    split: str = "holdout"


class CrossvalRequest(JobRequest):
    data: str


class LearningCurveRequest(JobRequest):
    data: str
    sizes: list[int] | None = None
    repeats: int | None = Field(default=None, ge=1)


class CompareRequest(JobRequest):
    low: str
    medium: str
    high: str
    extra_results: list[str] = Field(default_factory=list)


def _config_of(req: JobRequest) -> AppConfig:
    return load_config(req.config) if req.config else AppConfig()


def create_app() -> FastAPI:
    app = FastAPI(title="breadsched")

    @app.exception_handler(ValueError)
    async def bad_value(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def missing_file(request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/generate")
    def generate(req: GenerateRequest) -> dict:
        return harness.cmd_generate(
            req.volatility, req.days, req.seed, req.out, _config_of(req)
        )

    @app.post("/tune")
    def tune(req: TuneRequest) -> dict:
        return harness.cmd_tune(req.data, req.out, _config_of(req), req.grid_stride)

    @app.post("/train")
    def train(req: TrainRequest) -> dict:
        return harness.cmd_train(
            req.data, req.out, _config_of(req), req.grid_stride,
            beta=req.beta, gamma=req.gamma, use_all=req.use_all,
        )

    @app.post("/predict")
    def predict(req: PredictRequest) -> dict:
        return harness.cmd_predict(
            req.data, req.snapshot, req.out, _config_of(req), split_name=req.split
        )

    @app.post("/crossval")
    def crossval(req: CrossvalRequest) -> dict:
        return harness.cmd_crossval(
            req.data, req.out, _config_of(req), req.seed, req.grid_stride
        )

    @app.post("/learning-curve")
    def learning_curve(req: LearningCurveRequest) -> dict:
        return harness.cmd_learning_curve(
            req.data, req.out, _config_of(req), req.seed,
            sizes=tuple(req.sizes) if req.sizes else None,
            repeats=req.repeats, grid_stride=req.grid_stride,
        )

    @app.post("/compare")
    def compare(req: CompareRequest) -> dict:
        return harness.cmd_compare(
            {"low": req.low, "medium": req.medium, "high": req.high},
            req.out, _config_of(req), req.seed, req.grid_stride,
            extra_results=list(req.extra_results),
        )

    return app


app = create_app()
