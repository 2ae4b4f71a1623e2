"""Shared test utilities: seeded random configurations and quadrature grids."""

from __future__ import annotations

import math

import numpy as np

from sgsim.core import SGConfig


def random_config(rng: np.random.Generator, b_zero_fraction: float = 0.0) -> SGConfig:
    """A physically valid configuration with broad log-uniform parameters."""
    b = 0.0 if rng.random() < b_zero_fraction else 10 ** rng.uniform(2.0, 5.0)
    return SGConfig(
        b=b,
        tau=10 ** rng.uniform(-5.0, -3.0),
        sigma0=10 ** rng.uniform(-6.0, -3.0),
        v_y=10 ** rng.uniform(3.0, 5.0),
    )


def random_config_with_overlap(rng: np.random.Generator,
                               log_i_range: tuple[float, float] = (-30.0, -0.01)) -> SGConfig:
    """A configuration whose packet inner product sits in a resolvable range.

    sigma0 and tau are kept moderate so the chirped overlap integrand stays
    cheap to integrate; the gradient is then solved from the target log|I|.
    """
    sigma0 = 10 ** rng.uniform(-4.5, -3.5)
    tau = 10 ** rng.uniform(-5.0, -3.5)
    cfg0 = SGConfig(b=1.0, tau=tau, sigma0=sigma0, v_y=1e4)
    c = cfg0.constants
    # log|I| = -K b^2 with K from the unit-gradient config
    k_unit = (c.moment * tau) ** 2 * (
        tau ** 2 / (8.0 * c.mass ** 2 * sigma0 ** 2) + 2.0 * sigma0 ** 2 / c.hbar ** 2
    )
    target = -rng.uniform(*sorted(-x for x in log_i_range))
    return cfg0.with_overrides(b=math.sqrt(-target / k_unit))


def gauss_legendre_box_integral(f, center: tuple[float, float, float], half_width: float,
                                nodes: int = 80) -> float:
    """Tensor-product Gauss-Legendre integral of f(x, y, z) over a cube."""
    x1d, w1d = np.polynomial.legendre.leggauss(nodes)
    cx, cy, cz = center
    xs = cx + half_width * x1d
    ys = cy + half_width * x1d
    zs = cz + half_width * x1d
    X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
    values = f(X, Y, Z)
    W = w1d[:, None, None] * w1d[None, :, None] * w1d[None, None, :]
    return float(np.sum(values * W)) * half_width ** 3
