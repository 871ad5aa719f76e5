"""Request and response models of the simulation service.

Field names double as the scenario-file keys; unknown keys are rejected.
All rates are absolute (rad/s with hbar = 1); the scenario files keep them
legible by working in units where either gamma = 1 or omega = 1. Times in
requests are the scaled variables of the figures: ``gamma * t`` for the
decoherence runs, ``omega * t`` for the squeezing runs.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator, \
    model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_branch(k):
    if k not in (-1, 1):
        raise ValueError("k must be +1 or -1")
    return k


class WignerRequest(StrictModel):
    name: str = "wigner"
    omega: float = Field(gt=0)
    gamma: float = Field(gt=0)
    g_s: float
    beta_re: float = 0.0
    beta_im: float = 0.0
    phase: float = 0.0
    times: list[float] = Field(min_length=1)  # gamma * t, order preserved
    x_min: float = -5.0
    x_max: float = 5.0
    y_min: float = -5.0
    y_max: float = 5.0
    step: float = Field(default=0.05, gt=0)
    dim: int = Field(default=60, ge=2)
    numeric: bool = False
    sort_times: bool = False

    @field_validator("times")
    @classmethod
    def _times_nonnegative(cls, times):
        if any(t < 0 for t in times):
            raise ValueError("times must be non-negative")
        return times

    @model_validator(mode="after")
    def _grid_ordered(self):
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValueError("grid bounds must be increasing")
        return self


class CatEvolveRequest(StrictModel):
    name: str = "cat-evolve"
    omega: float = Field(gt=0)
    gamma: float = Field(gt=0)
    g_s: float
    beta_re: float = 0.0
    beta_im: float = 0.0
    phase: float = 0.0
    times: list[float] | None = None  # gamma * t
    t_max: float = Field(default=2.0, gt=0)  # gamma * t when times absent
    t_step: float = Field(default=0.01, gt=0)


class SqueezeUnitaryRequest(StrictModel):
    name: str = "squeeze-unitary"
    omega: float = Field(default=1.0, gt=0)
    gprime: float = Field(gt=0)
    k: int = -1
    t_max: float = Field(default=150.0, gt=0)  # omega * t
    t_step: float = Field(default=0.05, gt=0)

    _branch = field_validator("k")(_check_branch)


class SqueezeDissipativeRequest(StrictModel):
    name: str = "squeeze-dissipative"
    omega: float = Field(default=1.0, gt=0)
    gamma: float = Field(ge=0)
    gprime: float = Field(gt=0)
    k: int = -1
    temperatures: list[float] = Field(default=(0.0, 1.0, 3.0), min_length=1)
    t_max: float = Field(default=150.0, gt=0)  # omega * t
    t_step: float = Field(default=0.05, gt=0)
    tol: float = Field(default=1e-8, gt=0)

    _branch = field_validator("k")(_check_branch)

    @field_validator("temperatures")
    @classmethod
    def _temps_nonnegative(cls, temps):
        if any(t < 0 for t in temps):
            raise ValueError("temperatures must be non-negative")
        return temps


class SteadySweepRequest(StrictModel):
    name: str = "steady-sweep"
    omega: float = Field(default=1.0, gt=0)
    gamma: float = Field(ge=0)
    gprime: float = Field(gt=0)
    k: int = -1
    temp_min: float = Field(default=0.005, gt=0)
    temp_max: float = Field(default=1.0, gt=0)
    temp_step: float = Field(default=0.005, gt=0)

    _branch = field_validator("k")(_check_branch)

    @model_validator(mode="after")
    def _range_ordered(self):
        if self.temp_max < self.temp_min:
            raise ValueError("temp_max must be >= temp_min")
        return self


class ParamsRequest(StrictModel):
    name: str = "params"
    josephson_energy: float
    charging_energy: float = 0.0
    gate_charge: float = 0.5
    external_field: float = 0.0
    cantilever_freq: float = Field(gt=0)
    cantilever_mass: float = 0.0
    tip_moment: float = 0.0
    tip_distance: float = 0.0
    loop_area: float = Field(gt=0)
    field_gradient: float | None = None
    zero_point: float | None = None


class VerifyRequest(StrictModel):
    name: str = "verify"
    dim: int = Field(default=60, ge=2)
    tol: float = Field(default=1e-8, gt=0)


class DataResponse(BaseModel):
    name: str
    header: list[str]
    rows: list[list[float]]


class SteadySweepResponse(DataResponse):
    critical_temperature: float


class CouplingsResponse(BaseModel):
    couplings: dict[str, float]


class CheckOutcome(BaseModel):
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckOutcome]
