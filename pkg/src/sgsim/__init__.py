"""Stern-Gerlach measurement idealness simulator.

Quantifies the gap between configuration-space orthogonality of the two
spin-labeled packets and their actual distinguishability on a screen, for a
neutral spin-1/2 beam passing a gradient magnet.
"""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    ConfigError,
    DomainError,
    PhysicalConstants,
    PRESETS,
    SGConfig,
    SpinAmplitudes,
    check_decoupling,
    derive_kinematics,
)
from .idealness import (  # noqa: F401
    IdealnessReport,
    Regime,
    build_report,
    classify,
    error_integral,
    inner_product,
    saturation,
)
from .probabilities import probability_table, cascade_upper_plane, analyzer_placement  # noqa: F401
from .wavepacket import PacketState, Spin, amplitude, density_z_profile, packet_at  # noqa: F401
