"""Experiment configuration and derived kinematics for the Stern-Gerlach model.

All quantities are CGS: gauss, cm, s, g, erg.  The beam travels along +y with
group velocity v_y; the magnet occupies 0 <= y <= d = v_y*tau and applies a
field of magnitude B0 with transverse gradient b along z.  During the
interaction time tau a spin-up packet acquires drift velocity

    v_z = mu * b * tau / m

along +z (spin-down the mirror image), with wavenumbers k_y = m*v_y/hbar,
k_z = m*v_z/hbar and accumulated phases delta_pm = +-mu*B0*tau/hbar
+ (m*v_z*tau/hbar)**2 / 6.

The one-dimensional treatment of the z motion is only valid when the bias
field dominates the gradient across the packet, B0 >> b*sigma0;
``check_decoupling`` reports how well a configuration satisfies that.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace


class ConfigError(ValueError):
    """Invalid or missing experiment parameter."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


# Standard neutron values; the reference configurations leave them implicit,
# so they are overridable everywhere.
DEFAULT_HBAR = 1.0546e-27      # erg*s
DEFAULT_MASS = 1.6749e-24      # g
DEFAULT_MOMENT = 9.662e-24     # erg/gauss (magnitude)

DEFAULT_B0 = 1e4               # gauss; enters phases and the validity check only
DEFAULT_DECOUPLING_RATIO = 100.0


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, particle mass and magnetic moment magnitude, CGS units."""

    hbar: float = DEFAULT_HBAR
    mass: float = DEFAULT_MASS
    moment: float = DEFAULT_MOMENT

    def __post_init__(self):
        for name in ("hbar", "mass", "moment"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"constant '{name}' must be finite and positive, got {value!r}")


@dataclass(frozen=True)
class SGConfig:
    """One Stern-Gerlach run: gradient b, bias B0, interaction time tau,
    initial packet width sigma0 and longitudinal velocity v_y."""

    b: float                   # gauss/cm
    tau: float                 # s
    sigma0: float              # cm
    v_y: float                 # cm/s
    B0: float = DEFAULT_B0     # gauss
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    decoupling_ratio: float = DEFAULT_DECOUPLING_RATIO

    def __post_init__(self):
        checks = (
            ("b", self.b, 0.0, True),
            ("tau", self.tau, 0.0, False),
            ("sigma0", self.sigma0, 0.0, False),
            ("v_y", self.v_y, 0.0, False),
            ("B0", self.B0, 0.0, True),
            ("decoupling_ratio", self.decoupling_ratio, 0.0, False),
        )
        for name, value, floor, inclusive in checks:
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ConfigError(f"parameter '{name}' must be a finite number, got {value!r}")
            if value < floor or (not inclusive and value == floor):
                op = ">=" if inclusive else ">"
                raise ConfigError(f"parameter '{name}' must be {op} {floor}, got {value}")

    @property
    def d(self) -> float:
        """Magnet length along the beam, cm."""
        return self.v_y * self.tau

    def with_overrides(self, **kwargs) -> "SGConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SpinAmplitudes:
    """Initial spin state alpha|up> + beta|down>, stored unit-normalized.

    Inputs may be off unit norm by up to 1e-4 in |alpha|^2+|beta|^2 (enough to
    absorb four-significant-figure amplitudes such as 0.9487/0.3162); anything
    worse is rejected.
    """

    alpha: complex
    beta: complex

    _NORM_SLACK = 1e-4

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise ConfigError("spin amplitudes must be finite")
        norm2 = abs(a) ** 2 + abs(b) ** 2
        if abs(norm2 - 1.0) > self._NORM_SLACK:
            raise ConfigError(
                f"|alpha|^2 + |beta|^2 = {norm2:.6g}, more than {self._NORM_SLACK} from 1"
            )
        scale = 1.0 / math.sqrt(norm2)
        object.__setattr__(self, "alpha", a * scale)
        object.__setattr__(self, "beta", b * scale)

    @property
    def p_up(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def p_down(self) -> float:
        return abs(self.beta) ** 2


EQUAL_SUPERPOSITION = SpinAmplitudes(2 ** -0.5, 2 ** -0.5)


@dataclass(frozen=True)
class DerivedKinematics:
    v_z: float          # cm/s
    k_y: float          # 1/cm
    k_z: float          # 1/cm
    delta_plus: float   # rad
    delta_minus: float  # rad


def derive_kinematics(cfg: SGConfig) -> DerivedKinematics:
    """Drift velocity, wavenumbers and exit phases for a configuration."""
    c = cfg.constants
    v_z = c.moment * cfg.b * cfg.tau / c.mass
    k_y = c.mass * cfg.v_y / c.hbar
    k_z = c.mass * v_z / c.hbar
    quad = (c.mass * v_z * cfg.tau / c.hbar) ** 2 / 6.0
    larmor = c.moment * cfg.B0 * cfg.tau / c.hbar
    return DerivedKinematics(
        v_z=v_z, k_y=k_y, k_z=k_z,
        delta_plus=larmor + quad, delta_minus=-larmor + quad,
    )


@dataclass(frozen=True)
class DecouplingReport:
    """Outcome of the B0 >> b*sigma0 validity check."""

    ratio: float
    threshold: float
    passed: bool

    def message(self) -> str:
        verdict = "satisfied" if self.passed else "NOT satisfied"
        return (
            f"decoupling condition B0 >> b*sigma0 {verdict}: "
            f"B0/(b*sigma0) = {self.ratio:.4g}, required > {self.threshold:.4g}"
        )


def check_decoupling(cfg: SGConfig) -> DecouplingReport:
    """Report B0/(b*sigma0) against the configured ratio.

    Advisory only: a failing check means the one-dimensional model is
    untrustworthy for the configuration, not that downstream numbers cannot
    be computed.  ``b = 0`` passes trivially (no transverse component at all);
    the threshold comparison is strict.
    """
    denom = cfg.b * cfg.sigma0
    ratio = math.inf if denom == 0.0 else cfg.B0 / denom
    return DecouplingReport(
        ratio=ratio,
        threshold=cfg.decoupling_ratio,
        passed=ratio > cfg.decoupling_ratio,
    )


# Reference parameter sets used throughout: set1 separates cleanly, set2 keeps
# a finite packet inner product, set3 has orthogonal packets that still
# overlap on the screen.
PRESETS: dict[str, SGConfig] = {
    "set1": SGConfig(b=6e4, tau=5e-4, sigma0=1e-5, v_y=1e4),
    "set2": SGConfig(b=2e3, tau=1e-4, sigma0=1e-4, v_y=1e4),
    "set3": SGConfig(b=4e4, tau=1e-4, sigma0=1e-5, v_y=1e4),
}

_CONFIG_KEYS = frozenset({
    "b", "B0", "tau", "sigma0", "v_y",
    "hbar", "mass", "moment",
    "alpha_re", "alpha_im", "beta_re", "beta_im",
})
_REQUIRED_KEYS = ("b", "tau", "sigma0", "v_y")


def parse_config_file(text: str) -> dict[str, float]:
    """Parse flat ``key = value`` text; '#' starts a comment."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        try:
            values[key] = float(rhs.strip())
        except ValueError:
            raise ConfigError(f"line {lineno}: key '{key}' has non-numeric value {rhs.strip()!r}") from None
    return values


def build_config(values: dict[str, float]) -> tuple[SGConfig, SpinAmplitudes]:
    """Assemble (SGConfig, SpinAmplitudes) from a flat key/value mapping.

    Raises ConfigError naming every missing required key.
    """
    unknown = set(values) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    constants = PhysicalConstants(
        hbar=values.get("hbar", DEFAULT_HBAR),
        mass=values.get("mass", DEFAULT_MASS),
        moment=values.get("moment", DEFAULT_MOMENT),
    )
    cfg = SGConfig(
        b=values["b"],
        tau=values["tau"],
        sigma0=values["sigma0"],
        v_y=values["v_y"],
        B0=values.get("B0", DEFAULT_B0),
        constants=constants,
    )
    spin = SpinAmplitudes(
        complex(values.get("alpha_re", 2 ** -0.5), values.get("alpha_im", 0.0)),
        complex(values.get("beta_re", 2 ** -0.5), values.get("beta_im", 0.0)),
    )
    return cfg, spin
