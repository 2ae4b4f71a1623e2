"""Observable probabilities for ideal and nonideal runs.

With saturated error E_s, a fraction E_s of each spin population ends up on
the wrong side of the screen:

    P_up^ni   = (1 - E_s) |alpha|^2        (spin up found in the upper plane)
    P_down^ni = (1 - E_s) |beta|^2
    P_plus^ni  = (1 - E_s)|alpha|^2 + E_s |beta|^2    (total upper plane)
    P_minus^ni = (1 - E_s)|beta|^2  + E_s |alpha|^2

E_s is an explicit input rather than recomputed internally, so the reference
table can be reproduced with its quoted E_s while pipelines chain in a value
from ``idealness.saturation``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DomainError, SGConfig, SpinAmplitudes

# (alpha, beta) rows of the reference probability table.
TABLE1_AMPLITUDES: tuple[tuple[float, float], ...] = (
    (2 ** -0.5, 2 ** -0.5),
    (0.8, 0.6),
    (3 ** 0.5 / 2.0, 0.5),
    (0.9487, 0.3162),
)
TABLE1_E_S = 0.2478

TABLE1_COLUMNS = (
    "alpha", "beta",
    "P_up_i", "P_down_i",
    "P_up_ni", "P_down_ni",
    "P_plus_ni", "P_minus_ni",
)


def _check_es(e_s: float) -> float:
    if not (isinstance(e_s, (int, float)) and 0.0 <= e_s <= 0.5):
        raise DomainError(f"E_s must be in [0, 0.5], got {e_s!r}")
    return float(e_s)


@dataclass(frozen=True)
class ProbabilityTable:
    P_up_ideal: float
    P_down_ideal: float
    P_up_ni: float
    P_down_ni: float
    P_plus_ni: float
    P_minus_ni: float
    E_s: float

    def to_dict(self) -> dict:
        return {
            "P_up_ideal": self.P_up_ideal,
            "P_down_ideal": self.P_down_ideal,
            "P_up_ni": self.P_up_ni,
            "P_down_ni": self.P_down_ni,
            "P_plus_ni": self.P_plus_ni,
            "P_minus_ni": self.P_minus_ni,
            "E_s": self.E_s,
        }


def probability_table(spin: SpinAmplitudes, e_s: float) -> ProbabilityTable:
    """All ideal and nonideal outcome probabilities for one spin state."""
    e_s = _check_es(e_s)
    pu, pd = spin.p_up, spin.p_down
    return ProbabilityTable(
        P_up_ideal=pu,
        P_down_ideal=pd,
        P_up_ni=(1.0 - e_s) * pu,
        P_down_ni=(1.0 - e_s) * pd,
        P_plus_ni=(1.0 - e_s) * pu + e_s * pd,
        P_minus_ni=(1.0 - e_s) * pd + e_s * pu,
        E_s=e_s,
    )


def cascade_upper_plane(spin: SpinAmplitudes, e_s: float) -> tuple[float, float]:
    """Spin-resolved content of the upper plane as seen by a second, ideal
    analyzer: (spin-up fraction, spin-down fraction) of the whole beam."""
    e_s = _check_es(e_s)
    return (1.0 - e_s) * spin.p_up, e_s * spin.p_down


def analyzer_placement(cfg: SGConfig, t_s: float) -> float:
    """Minimum downstream position Y_s = v_y * t_s for the second analyzer."""
    if not (isinstance(t_s, (int, float)) and t_s >= 0.0):
        raise DomainError(f"t_s must be >= 0, got {t_s!r}")
    return cfg.v_y * float(t_s)


def table1_rows(e_s: float = TABLE1_E_S) -> list[dict]:
    """The four reference (alpha, beta) rows with all eight probability columns."""
    e_s = _check_es(e_s)
    rows = []
    for a, b in TABLE1_AMPLITUDES:
        table = probability_table(SpinAmplitudes(a, b), e_s)
        rows.append({
            "alpha": a,
            "beta": b,
            "P_up_i": table.P_up_ideal,
            "P_down_i": table.P_down_ideal,
            "P_up_ni": table.P_up_ni,
            "P_down_ni": table.P_down_ni,
            "P_plus_ni": table.P_plus_ni,
            "P_minus_ni": table.P_minus_ni,
        })
    return rows
