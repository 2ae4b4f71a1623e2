"""Stochastic screen: sample arrival positions and infer spins from sign(z).

Each particle draws a spin label with probabilities (|alpha|^2, |beta|^2) and
then a z position from that label's Gaussian marginal at the screen time;
z >= 0 counts as the upper plane.  The misclassified fraction estimates the
error integral E(t_screen).

Sampling is chunked with a fixed chunk size, and chunk i derives its own
Philox stream from (seed, i), so the draw for sample number n never depends
on how chunks are scheduled; counts are integer sums, associative under any
partitioning.  Normals come from Box-Muller over the raw uniforms, keeping
the stream layout independent of generator internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import DomainError, SGConfig, SpinAmplitudes
from .wavepacket import Spin, packet_at

CHUNK = 1 << 18
ROW_CAP = 100_000  # per-sample dumps keep at most this many rows


@dataclass(frozen=True)
class McRun:
    seed: int
    n_samples: int
    t_screen: float
    up_in_upper: int
    up_in_lower: int
    down_in_upper: int
    down_in_lower: int

    def __post_init__(self):
        counts = (self.up_in_upper, self.up_in_lower, self.down_in_upper, self.down_in_lower)
        if any(c < 0 for c in counts) or sum(counts) != self.n_samples:
            raise DomainError("counts must be nonnegative and sum to n_samples")

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.up_in_upper, self.up_in_lower, self.down_in_upper, self.down_in_lower)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_samples": self.n_samples,
            "t_screen": self.t_screen,
            "up_in_upper": self.up_in_upper,
            "up_in_lower": self.up_in_lower,
            "down_in_upper": self.down_in_upper,
            "down_in_lower": self.down_in_lower,
        }


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def _box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    pairs = (n + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]: keeps the log finite
    u2 = rng.random(pairs)
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(2.0 * math.pi * u2)
    out[1::2] = r * np.sin(2.0 * math.pi * u2)
    return out[:n]


def _validate(t_screen: float, n_samples: int, seed: int) -> None:
    if not (isinstance(t_screen, (int, float)) and math.isfinite(t_screen) and t_screen >= 0.0):
        raise DomainError(f"t_screen must be finite and >= 0, got {t_screen!r}")
    if not (isinstance(n_samples, int) and n_samples >= 1):
        raise DomainError(f"n_samples must be a positive integer, got {n_samples!r}")
    if not (isinstance(seed, int) and 0 <= seed < 2 ** 64):
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed!r}")


def _draw_chunks(cfg: SGConfig, spin: SpinAmplitudes, t_screen: float,
                 n_samples: int, seed: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    plus = packet_at(cfg, Spin.PLUS, t_screen)
    center = plus.center[2]
    sd = plus.width
    p_up = spin.p_up
    produced = 0
    index = 0
    while produced < n_samples:
        m = min(CHUNK, n_samples - produced)
        rng = _chunk_rng(seed, index)
        up = rng.random(m) < p_up
        z = np.where(up, center, -center) + sd * _box_muller(rng, m)
        yield up, z
        produced += m
        index += 1


def sample_screen(cfg: SGConfig, spin: SpinAmplitudes, t_screen: float,
                  n_samples: int, seed: int) -> McRun:
    """Tally (spin label, arrival half-plane) counts; deterministic in seed."""
    _validate(t_screen, n_samples, seed)
    uu = ul = du = dl = 0
    for up, z in _draw_chunks(cfg, spin, t_screen, n_samples, seed):
        upper = z >= 0.0
        uu += int(np.sum(up & upper))
        ul += int(np.sum(up & ~upper))
        du += int(np.sum(~up & upper))
        dl += int(np.sum(~up & ~upper))
    return McRun(seed=seed, n_samples=n_samples, t_screen=t_screen,
                 up_in_upper=uu, up_in_lower=ul, down_in_upper=du, down_in_lower=dl)


def sample_screen_rows(cfg: SGConfig, spin: SpinAmplitudes, t_screen: float,
                       n_samples: int, seed: int,
                       cap: int = ROW_CAP) -> tuple[McRun, list[tuple[str, float]]]:
    """Like :func:`sample_screen` but also returns the first ``cap`` samples
    as (label, z_cm) rows, drawn from the identical stream."""
    _validate(t_screen, n_samples, seed)
    uu = ul = du = dl = 0
    rows: list[tuple[str, float]] = []
    for up, z in _draw_chunks(cfg, spin, t_screen, n_samples, seed):
        upper = z >= 0.0
        uu += int(np.sum(up & upper))
        ul += int(np.sum(up & ~upper))
        du += int(np.sum(~up & upper))
        dl += int(np.sum(~up & ~upper))
        if len(rows) < cap:
            take = min(cap - len(rows), z.size)
            rows.extend(
                ("up" if u else "down", float(val))
                for u, val in zip(up[:take], z[:take])
            )
    run = McRun(seed=seed, n_samples=n_samples, t_screen=t_screen,
                up_in_upper=uu, up_in_lower=ul, down_in_upper=du, down_in_lower=dl)
    return run, rows


def empirical_error(run: McRun, spin: SpinAmplitudes) -> tuple[float, float]:
    """Estimate E(t_screen) from a run: (estimate, binomial standard error).

    Per-branch estimators up_in_lower/(n |alpha|^2) and
    down_in_upper/(n |beta|^2) are pooled with inverse-variance weights
    (proportional to the expected branch sizes), which reduces to the overall
    misclassified fraction when both amplitudes are nonzero.
    """
    n = run.n_samples
    weights_and_errors = []
    if spin.p_up > 0.0:
        weights_and_errors.append((n * spin.p_up, run.up_in_lower))
    if spin.p_down > 0.0:
        weights_and_errors.append((n * spin.p_down, run.down_in_upper))
    total_weight = sum(w for w, _ in weights_and_errors)
    estimate = sum(w * (err / w) for w, err in weights_and_errors) / total_weight
    stderr = math.sqrt(max(estimate * (1.0 - estimate), 0.0) / total_weight)
    return estimate, stderr
