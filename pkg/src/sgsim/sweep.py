"""Two-axis parameter sweeps over idealness measures."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, SGConfig
from .figures import Dataset
from .idealness import DEFAULT_EPS_E, DEFAULT_EPS_I, classify, inner_product, saturation_value

SWEEPABLE = ("b", "B0", "tau", "sigma0", "v_y")
SWEEP_COLUMNS = ("b", "B0", "tau", "sigma0", "v_y", "log_abs_I", "E_s", "regime")
THREADS_ENV = "SG_SIM_THREADS"


@dataclass(frozen=True)
class Axis:
    param: str
    start: float
    stop: float
    steps: int
    scale: str = "lin"

    def __post_init__(self):
        if self.param not in SWEEPABLE:
            raise ConfigError(f"cannot sweep '{self.param}'; choose from {SWEEPABLE}")
        if self.steps < 2:
            raise ConfigError(f"axis '{self.param}' needs at least 2 steps, got {self.steps}")
        if self.scale not in ("lin", "log"):
            raise ConfigError(f"axis scale must be 'lin' or 'log', got {self.scale!r}")
        if self.scale == "log" and (self.start <= 0.0 or self.stop <= 0.0):
            raise ConfigError(f"log axis '{self.param}' needs positive bounds")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


def _max_workers() -> int | None:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(n, 1)


def run_sweep(base: SGConfig, axis1: Axis, axis2: Axis,
              eps_I: float = DEFAULT_EPS_I, eps_E: float = DEFAULT_EPS_E) -> Dataset:
    """Grid evaluation, axis1 outer and axis2 inner; row order is fixed
    regardless of how many worker threads compute the points."""
    if axis1.param == axis2.param:
        raise ConfigError(f"both axes sweep '{axis1.param}'")
    points = [
        {axis1.param: float(v1), axis2.param: float(v2)}
        for v1 in axis1.values()
        for v2 in axis2.values()
    ]

    def evaluate(overrides: dict) -> tuple:
        cfg = base.with_overrides(**overrides)
        return (
            cfg.b, cfg.B0, cfg.tau, cfg.sigma0, cfg.v_y,
            inner_product(cfg).log_abs_I,
            saturation_value(cfg),
            classify(cfg, eps_I, eps_E).value,
        )

    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        rows = tuple(pool.map(evaluate, points))
    return Dataset(name="sweep", columns=SWEEP_COLUMNS, rows=rows)
