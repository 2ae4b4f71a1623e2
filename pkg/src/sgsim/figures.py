"""Data behind the reference figures: error-curve families and packet profiles.

Figures 2-4 are E(t) against flight time for three gradient strengths each;
figures 5-7 are |psi_+(z)|^2 / |psi_-(z)|^2 snapshots of the reference sets
shortly after the magnet (t = 1e-5 s) and far downstream (t = 0.1 s).  Only
data is emitted, no rendering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, PRESETS, SGConfig
from .csvio import csv_text
from .idealness import default_time_grid, error_integral
from .wavepacket import Spin, density_z_profile, packet_at

FIGURE_IDS = (2, 3, 4, 5, 6, 7)

# figure id -> (gradient values, tau, sigma0)
CURVE_FIGURES: dict[int, tuple[tuple[float, ...], float, float]] = {
    2: ((5e4, 5.5e4, 6e4), 5e-4, 1e-5),
    3: ((1e3, 2e3, 3e3), 1e-4, 1e-4),
    4: ((2e4, 3e4, 4e4), 1e-4, 1e-5),
}

# figure id -> reference set shown
PROFILE_FIGURES = {5: "set1", 6: "set2", 7: "set3"}
PROFILE_TIMES = (1e-5, 0.1)
PROFILE_POINTS = 4001
PROFILE_PADDING_SIGMAS = 8.0


@dataclass(frozen=True)
class Dataset:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def csv(self) -> str:
        return csv_text(self.columns, self.rows)


def curve_dataset(figure: int, times: np.ndarray | None = None) -> Dataset:
    """E(t) for each gradient in one curve figure; one column per gradient."""
    if figure not in CURVE_FIGURES:
        raise DomainError(f"figure {figure} is not a curve figure (2, 3 or 4)")
    b_values, tau, sigma0 = CURVE_FIGURES[figure]
    grid = default_time_grid() if times is None else np.asarray(times, dtype=float)
    configs = [SGConfig(b=b, tau=tau, sigma0=sigma0, v_y=1e4) for b in b_values]
    rows = tuple(
        (float(t), *(error_integral(cfg, float(t)) for cfg in configs))
        for t in grid
    )
    columns = ("t_sec", *(f"E_b{b:g}" for b in b_values))
    return Dataset(name=f"fig{figure}_curves", columns=columns, rows=rows)


def profile_grid(cfg: SGConfig, t_free: float, points: int = PROFILE_POINTS,
                 padding_sigmas: float = PROFILE_PADDING_SIGMAS) -> np.ndarray:
    """Symmetric z grid covering both packet centers plus tail padding."""
    state = packet_at(cfg, Spin.PLUS, t_free)
    half = abs(state.center[2]) + padding_sigmas * state.width
    return np.linspace(-half, half, points)


def profile_dataset(figure: int, t_free: float, points: int = PROFILE_POINTS) -> Dataset:
    """z marginals of both components for one profile figure at one time."""
    if figure not in PROFILE_FIGURES:
        raise DomainError(f"figure {figure} is not a profile figure (5, 6 or 7)")
    cfg = PRESETS[PROFILE_FIGURES[figure]]
    z = profile_grid(cfg, t_free, points)
    rho_plus = density_z_profile(packet_at(cfg, Spin.PLUS, t_free), z)
    rho_minus = density_z_profile(packet_at(cfg, Spin.MINUS, t_free), z)
    rows = tuple(zip(z.tolist(), rho_plus.tolist(), rho_minus.tolist()))
    return Dataset(
        name=f"fig{figure}_t{t_free:.0e}s",
        columns=("z_cm", "density_plus", "density_minus"),
        rows=rows,
    )


def figure_datasets(figure: int) -> list[Dataset]:
    """All datasets for one figure id (one file for curves, one per time for profiles)."""
    if figure in CURVE_FIGURES:
        return [curve_dataset(figure)]
    if figure in PROFILE_FIGURES:
        return [profile_dataset(figure, t) for t in PROFILE_TIMES]
    raise DomainError(f"unknown figure id {figure}; expected one of {FIGURE_IDS}")


def overlap_integral(z: np.ndarray, rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Shared probability mass of two densities: integral of min(rho_a, rho_b).

    Equals twice the error integral when the densities are the two packet
    marginals, so it quantifies "appreciable overlap" on the same scale.
    """
    return float(np.trapezoid(np.minimum(rho_a, rho_b), np.asarray(z, dtype=float)))
