"""Closed-form spin-labeled Gaussian packets behind the magnet.

A packet that spent time tau in the gradient and then flew freely for t is,
up to a global phase,

    psi(x, t) = (2 pi s^2)^(-3/4)
                * exp(-[x^2 + (y - v_y(tau+t))^2 + (z -+ c(t))^2] / (4 sigma0 s))
                * exp(i [-delta + k_y (y - v_y(tau+t)/2) +- k_z (z -+ v_z t/2)])

with complex width s = sigma0 (1 + i hbar (tau+t) / (2 m sigma0^2)) and
center offset c(t) = v_z tau/2 + v_z t (upper sign: spin up, deflected +z).
The modulus is an isotropic Gaussian of per-axis variance |s|^2, so every
marginal is available exactly; ``amplitude`` keeps all phases for overlap
integrals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, SGConfig, derive_kinematics


class Spin(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Spin.PLUS else -1


def complex_width(cfg: SGConfig, t_total: float) -> complex:
    """Complex width s_t = sigma0 (1 + i hbar t / (2 m sigma0^2))."""
    c = cfg.constants
    return cfg.sigma0 * (1.0 + 1j * c.hbar * t_total / (2.0 * c.mass * cfg.sigma0 ** 2))


@dataclass(frozen=True)
class PacketState:
    """One spin component frozen at a moment in time.

    ``t_free`` counts from the magnet exit; ``t_total = tau + t_free`` from
    beam entry.  ``center`` is (0, v_y*t_total, +-c(t_free)).
    """

    spin: Spin
    t_free: float
    t_total: float
    center: tuple[float, float, float]
    complex_width: complex
    sigma0: float
    k_y: float
    k_z: float
    v_y: float
    v_z: float
    delta: float

    @property
    def width(self) -> float:
        """|s|, the per-axis standard deviation of the density."""
        return abs(self.complex_width)


def packet_at(cfg: SGConfig, spin: Spin, t_free: float) -> PacketState:
    """State of one spin component after ``t_free`` seconds of free flight."""
    if not (isinstance(t_free, (int, float)) and math.isfinite(t_free)):
        raise DomainError(f"t_free must be a finite number, got {t_free!r}")
    if t_free < 0.0:
        raise DomainError(f"t_free must be >= 0, got {t_free}")
    kin = derive_kinematics(cfg)
    offset = kin.v_z * (cfg.tau / 2.0 + t_free)
    t_total = cfg.tau + t_free
    return PacketState(
        spin=spin,
        t_free=float(t_free),
        t_total=t_total,
        center=(0.0, cfg.v_y * t_total, spin.sign * offset),
        complex_width=complex_width(cfg, t_total),
        sigma0=cfg.sigma0,
        k_y=kin.k_y,
        k_z=kin.k_z,
        v_y=cfg.v_y,
        v_z=kin.v_z,
        delta=kin.delta_plus if spin is Spin.PLUS else kin.delta_minus,
    )


def packet_in_magnet(cfg: SGConfig, spin: Spin, t: float) -> PacketState:
    """Snapshot at 0 < t <= tau inside the magnet.

    The in-flight form is the exit form with tau replaced by t, which is the
    exact solution for the linear potential (the drift built up so far is
    v_z(t) = mu*b*t/m and the center sits at v_z(t)*t/2).
    """
    if not 0.0 < t <= cfg.tau:
        raise DomainError(f"in-magnet time must be in (0, tau], got {t}")
    return packet_at(cfg.with_overrides(tau=float(t)), spin, 0.0)


def amplitude(state: PacketState, x, y, z) -> np.ndarray:
    """Complex wave function value; broadcasts over array coordinates."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    s = state.complex_width
    cx, cy, cz = state.center
    r2 = (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2
    envelope = np.exp(-r2 / (4.0 * state.sigma0 * s))
    sgn = state.spin.sign
    phase = (
        -state.delta
        + state.k_y * (y - state.v_y * state.t_total / 2.0)
        + sgn * state.k_z * (z - sgn * state.v_z * state.t_free / 2.0)
    )
    norm = (2.0 * np.pi * s * s) ** -0.75
    return norm * envelope * np.exp(1j * phase)


def z_factor(state: PacketState, z) -> np.ndarray:
    """One-dimensional z part of the wave function (unit L2 norm).

    The full amplitude factorizes over the axes; this is the z factor with the
    label's linear phase, used to compare against grid solutions.
    """
    z = np.asarray(z, dtype=float)
    s = state.complex_width
    cz = state.center[2]
    sgn = state.spin.sign
    phase = sgn * state.k_z * (z - sgn * state.v_z * state.t_free / 2.0)
    return (2.0 * np.pi * s * s) ** -0.25 * np.exp(-((z - cz) ** 2) / (4.0 * state.sigma0 * s) + 1j * phase)


def density_z_profile(state: PacketState, z_grid) -> np.ndarray:
    """Marginal |psi|^2 over z (x and y integrated out): N(center_z, |s|^2)."""
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise DomainError("z_grid must be a non-empty 1-d array")
    if not np.all(np.isfinite(z)):
        raise DomainError("z_grid must be finite")
    if np.any(np.diff(z) <= 0.0):
        raise DomainError("z_grid must be strictly increasing")
    var = state.width ** 2
    cz = state.center[2]
    return np.exp(-((z - cz) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
