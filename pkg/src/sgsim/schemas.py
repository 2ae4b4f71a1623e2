"""Request/response models for the HTTP service (and the CLI that wraps it)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from . import core
from .idealness import DEFAULT_DELTA_SAT, DEFAULT_EPS_E, DEFAULT_EPS_I


class ConstantsModel(BaseModel):
    hbar: float = Field(default=core.DEFAULT_HBAR, gt=0)
    mass: float = Field(default=core.DEFAULT_MASS, gt=0)
    moment: float = Field(default=core.DEFAULT_MOMENT, gt=0)

    def to_core(self) -> core.PhysicalConstants:
        return core.PhysicalConstants(hbar=self.hbar, mass=self.mass, moment=self.moment)


class ConfigModel(BaseModel):
    b: float = Field(ge=0, description="field gradient, gauss/cm")
    tau: float = Field(gt=0, description="interaction time, s")
    sigma0: float = Field(gt=0, description="initial packet width, cm")
    v_y: float = Field(gt=0, description="longitudinal velocity, cm/s")
    B0: float = Field(default=core.DEFAULT_B0, ge=0, description="bias field, gauss")
    constants: ConstantsModel = Field(default_factory=ConstantsModel)
    decoupling_ratio: float = Field(default=core.DEFAULT_DECOUPLING_RATIO, gt=0)

    def to_core(self) -> core.SGConfig:
        return core.SGConfig(
            b=self.b, tau=self.tau, sigma0=self.sigma0, v_y=self.v_y, B0=self.B0,
            constants=self.constants.to_core(), decoupling_ratio=self.decoupling_ratio,
        )

    @classmethod
    def from_core(cls, cfg: core.SGConfig) -> "ConfigModel":
        return cls(
            b=cfg.b, tau=cfg.tau, sigma0=cfg.sigma0, v_y=cfg.v_y, B0=cfg.B0,
            constants=ConstantsModel(hbar=cfg.constants.hbar, mass=cfg.constants.mass,
                                     moment=cfg.constants.moment),
            decoupling_ratio=cfg.decoupling_ratio,
        )


class SpinModel(BaseModel):
    alpha_re: float = 2 ** -0.5
    alpha_im: float = 0.0
    beta_re: float = 2 ** -0.5
    beta_im: float = 0.0

    def to_core(self) -> core.SpinAmplitudes:
        return core.SpinAmplitudes(
            complex(self.alpha_re, self.alpha_im),
            complex(self.beta_re, self.beta_im),
        )


class ReportRequest(BaseModel):
    config: ConfigModel
    spin: SpinModel = Field(default_factory=SpinModel)
    eps_I: float = Field(default=DEFAULT_EPS_I, gt=0, lt=0.5)
    eps_E: float = Field(default=DEFAULT_EPS_E, gt=0, lt=0.5)
    delta_sat: float = Field(default=DEFAULT_DELTA_SAT, gt=0, lt=0.5)
    curve_points: int = Field(default=200, ge=2, le=20000)


class KinematicsModel(BaseModel):
    v_z: float
    k_y: float
    k_z: float
    delta_plus: float
    delta_minus: float


class DecouplingModel(BaseModel):
    ratio: Optional[float] = Field(description="B0/(b*sigma0); null when b = 0")
    threshold: float
    passed: bool


class CurvePoint(BaseModel):
    t: float
    E: float


class IdealnessModel(BaseModel):
    log_abs_I: float
    abs_I: float
    E_s: float
    t_s: float
    regime: str
    curve: list[CurvePoint]


class ProbabilityModel(BaseModel):
    P_up_ideal: float
    P_down_ideal: float
    P_up_ni: float
    P_down_ni: float
    P_plus_ni: float
    P_minus_ni: float
    E_s: float


class ReportResponse(BaseModel):
    config: ConfigModel
    spin: SpinModel
    kinematics: KinematicsModel
    decoupling: DecouplingModel
    idealness: IdealnessModel
    probabilities: ProbabilityModel
    Y_s: float = Field(description="second-analyzer placement v_y * t_s, cm")
    warnings: list[str]


class DatasetModel(BaseModel):
    name: str
    columns: list[str]
    rows: list[list[Union[float, str]]]
    csv: str


class FigureRequest(BaseModel):
    figure: int = Field(ge=2, le=7)


class FigureResponse(BaseModel):
    figure: int
    datasets: list[DatasetModel]


class AxisModel(BaseModel):
    param: Literal["b", "B0", "tau", "sigma0", "v_y"]
    start: float
    stop: float
    steps: int = Field(ge=2)
    scale: Literal["lin", "log"] = "lin"


class SweepRequest(BaseModel):
    base: ConfigModel
    axis1: AxisModel
    axis2: AxisModel
    eps_I: float = Field(default=DEFAULT_EPS_I, gt=0, lt=0.5)
    eps_E: float = Field(default=DEFAULT_EPS_E, gt=0, lt=0.5)


class SweepResponse(BaseModel):
    dataset: DatasetModel


class Table1Request(BaseModel):
    E_s: float = Field(default=0.2478, ge=0, le=0.5)
    compute_from_set3: bool = False


class Table1Response(BaseModel):
    E_s: float
    dataset: DatasetModel


class McRequest(BaseModel):
    config: ConfigModel
    spin: SpinModel = Field(default_factory=SpinModel)
    t_screen: float = Field(default=0.1, ge=0)
    n_samples: int = Field(default=1_000_000, ge=1, le=1_000_000_000)
    seed: int = Field(default=1, ge=0, lt=2 ** 63)
    include_rows: bool = False


class McResponse(BaseModel):
    seed: int
    n_samples: int
    t_screen: float
    up_in_upper: int
    up_in_lower: int
    down_in_upper: int
    down_in_lower: int
    error_estimate: float
    error_stderr: float
    error_expected: float = Field(description="closed-form E(t_screen)")
    rows: Optional[list[tuple[str, float]]] = None


class ValidateRequest(BaseModel):
    config: ConfigModel
    n_points: Optional[int] = Field(default=None, ge=256, le=1 << 18)
    n_steps: int = Field(default=4096, ge=1, le=1 << 20)
    padding_sigmas: float = Field(default=12.0, gt=0)
    include_convergence: bool = True
    include_densities: bool = False


class ComparisonModel(BaseModel):
    l2_density_error: float
    fidelity: float
    norm_drift: float


class ValidateResponse(BaseModel):
    plus: Optional[ComparisonModel]
    minus: Optional[ComparisonModel]
    convergence_errors: Optional[list[float]] = None
    convergence_ratios: Optional[list[float]] = None
    densities: Optional[list[DatasetModel]] = None
    passed: bool
    detail: str


class HealthResponse(BaseModel):
    status: str
    version: str


RESPONSE_SCHEMAS: dict[str, type[BaseModel]] = {
    "report": ReportResponse,
    "figures": FigureResponse,
    "sweep": SweepResponse,
    "table1": Table1Response,
    "mc": McResponse,
    "validate": ValidateResponse,
}

SCHEMA_DIR = Path(__file__).parent / "schemas"


def write_schema_files(target: Path | None = None) -> list[Path]:
    """Dump the published JSON schemas for all response documents."""
    target = Path(target) if target is not None else SCHEMA_DIR
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, model in RESPONSE_SCHEMAS.items():
        path = target / f"{name}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written
