"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
complete.  Every tolerance is fixed here, not configurable.
"""

import math
import time

import numpy as np
import pytest

from sgsim.core import PRESETS, SGConfig, SpinAmplitudes, EQUAL_SUPERPOSITION
from sgsim.figures import overlap_integral, profile_dataset
from sgsim.idealness import (
    Regime,
    classify,
    error_integral,
    error_integral_quadrature,
    inner_product,
    inner_product_numeric,
    saturation,
    saturation_value,
)
from sgsim.montecarlo import empirical_error, sample_screen
from sgsim.pde import compare_with_closed_form, splitting_convergence
from sgsim.probabilities import TABLE1_COLUMNS, analyzer_placement, table1_rows
from sgsim.specialfn import integrate_1d
from sgsim.wavepacket import Spin, amplitude, packet_at

from helpers import gauss_legendre_box_integral, random_config, random_config_with_overlap

PAPER_TABLE1 = (
    (0.5000, 0.5000, 0.3761, 0.3761, 0.5000, 0.5000),
    (0.6400, 0.3600, 0.4814, 0.2708, 0.5706, 0.4294),
    (0.7500, 0.2500, 0.5642, 0.1881, 0.6261, 0.3739),
    (0.9000, 0.1000, 0.6770, 0.0752, 0.7018, 0.2982),
)
PAPER_E_S = 0.2478
PAPER_T_S = 0.0012
PAPER_Y_S = 12.0


def record(number: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[criterion {number}] {status}: {description}{suffix}")
    assert ok, f"criterion {number}: {description}{suffix}"


def test_criterion_1_table1_arithmetic():
    started = time.perf_counter()
    rows = table1_rows(PAPER_E_S)
    worst = 0.0
    for row, expected in zip(rows, PAPER_TABLE1):
        values = tuple(row[c] for c in TABLE1_COLUMNS[2:])
        worst = max(worst, max(abs(v - e) for v, e in zip(values, expected)))
    elapsed = time.perf_counter() - started
    record(1, "reference table reproduced to 4 decimals in every column",
           worst <= 5.0e-5 + 1e-12 and elapsed < 1.0,
           f"worst diff {worst:.2e}, {elapsed:.3f}s")


def test_criterion_2_saturated_error_for_set3():
    started = time.perf_counter()
    cfg = PRESETS["set3"]
    e_s = saturation_value(cfg)
    rel = abs(e_s - PAPER_E_S) / PAPER_E_S

    # quadrature route 1: z marginal at finite times
    worst_curve = max(
        abs(error_integral(cfg, t) - error_integral_quadrature(cfg, t))
        for t in (0.0, 1e-3, 0.1)
    )
    # quadrature route 2: asymptotic velocity marginal, mass above zero
    c = cfg.constants
    v_z = c.moment * cfg.b * cfg.tau / c.mass
    sd_v = c.hbar / (2.0 * c.mass * cfg.sigma0)

    def velocity_pdf(v):
        return np.exp(-((v + v_z) ** 2) / (2 * sd_v ** 2)) / (sd_v * math.sqrt(2 * math.pi))

    e_s_quad = integrate_1d(velocity_pdf, 0.0, v_z + 25 * sd_v, tol=1e-13).value
    elapsed = time.perf_counter() - started
    record(2, "saturated error within 10% of 0.2478 and self-consistent to 1e-10",
           rel < 0.10 and worst_curve < 1e-10 and abs(e_s - e_s_quad) < 1e-10 and elapsed < 1.0,
           f"E_s={e_s:.6f} rel={rel:.3%} curve_diff={worst_curve:.1e} "
           f"asymptote_diff={abs(e_s - e_s_quad):.1e}, {elapsed:.3f}s")


def test_criterion_3_regime_reproduction():
    started = time.perf_counter()
    families = {
        Regime.CASE_I: ((5e4, 5.5e4, 6e4), 5e-4, 1e-5),
        Regime.CASE_II: ((1e3, 2e3, 3e3), 1e-4, 1e-4),
        Regime.CASE_III: ((2e4, 3e4, 4e4), 1e-4, 1e-5),
    }
    mismatches = []
    for expected, (b_values, tau, sigma0) in families.items():
        for b in b_values:
            got = classify(SGConfig(b=b, tau=tau, sigma0=sigma0, v_y=1e4))
            if got is not expected:
                mismatches.append((b, tau, sigma0, got.value))
    elapsed = time.perf_counter() - started
    record(3, "all nine reference gradients classify as labeled",
           not mismatches and elapsed < 1.0,
           f"mismatches={mismatches}, {elapsed:.3f}s")


def test_criterion_4_analyzer_placement():
    started = time.perf_counter()
    cfg = PRESETS["set3"]
    _, t_s = saturation(cfg)
    y_s = analyzer_placement(cfg, t_s)
    elapsed = time.perf_counter() - started
    ok = (PAPER_T_S / 2 <= t_s <= PAPER_T_S * 2) and (PAPER_Y_S / 2 <= y_s <= PAPER_Y_S * 2)
    record(4, "saturation time and analyzer position within a factor of 2",
           ok and elapsed < 1.0, f"t_s={t_s:.2e}s Y_s={y_s:.2f}cm, {elapsed:.3f}s")


def test_criterion_5_property_suite():
    started = time.perf_counter()

    # (a) monotone, bounded error integral
    rng = np.random.default_rng(501)
    grid = np.geomspace(1e-6, 1.0, 50)
    ok_a = True
    for _ in range(100):
        cfg = random_config(rng, b_zero_fraction=0.05)
        values = [error_integral(cfg, float(t)) for t in grid]
        ok_a &= all(0.0 <= v <= 0.5 for v in values)
        ok_a &= all(x >= y - 1e-15 for x, y in zip(values, values[1:]))

    # (b) analytic overlap vs factorized quadrature
    rng = np.random.default_rng(502)
    worst_b = 0.0
    for _ in range(50):
        cfg = random_config_with_overlap(rng)
        worst_b = max(worst_b, abs(inner_product_numeric(cfg, 0.0) - inner_product(cfg).abs_I))

    # (c) overlap preserved under free flight
    rng = np.random.default_rng(503)
    worst_c = 0.0
    for _ in range(5):
        cfg = random_config_with_overlap(rng)
        reference = inner_product(cfg).abs_I
        for t_free in (5e-4, 1.5e-3):
            worst_c = max(worst_c, abs(inner_product_numeric(cfg, t_free) - reference))

    # (d) packet normalization
    rng = np.random.default_rng(504)
    worst_d = 0.0
    for _ in range(20):
        cfg = random_config(rng)
        state = packet_at(cfg, Spin.PLUS if rng.random() < 0.5 else Spin.MINUS,
                          float(10 ** rng.uniform(-6, -2)))

        def density(x, y, z):
            return np.abs(amplitude(state, x, y, z)) ** 2

        total = gauss_legendre_box_integral(density, state.center, 10.0 * state.width)
        worst_d = max(worst_d, abs(total - 1.0))

    elapsed = time.perf_counter() - started
    record(5, "property suite: monotone E, overlap quadrature, flight invariance, normalization",
           ok_a and worst_b < 1e-8 and worst_c < 1e-8 and worst_d < 1e-8 and elapsed < 30.0,
           f"overlap_diff={worst_b:.1e} invariance={worst_c:.1e} "
           f"norm={worst_d:.1e}, {elapsed:.1f}s")


def test_criterion_6_grid_solver():
    started = time.perf_counter()
    report = compare_with_closed_form(PRESETS["set3"], Spin.PLUS)
    errors, ratios = splitting_convergence()
    elapsed = time.perf_counter() - started
    ok = (
        report.fidelity > 0.9999
        and report.norm_drift < 1e-10
        and all(3.0 <= r <= 5.0 for r in ratios)
    )
    record(6, "grid solver: fidelity, norm conservation, second-order stepping",
           ok and elapsed < 60.0,
           f"fidelity={report.fidelity:.8f} drift={report.norm_drift:.1e} "
           f"ratios={[f'{r:.2f}' for r in ratios]}, {elapsed:.1f}s")


def test_criterion_7_monte_carlo():
    started = time.perf_counter()
    cfg = PRESETS["set3"]
    n = 1_000_000
    run = sample_screen(cfg, EQUAL_SUPERPOSITION, 0.1, n, seed=20260810)
    rerun = sample_screen(cfg, EQUAL_SUPERPOSITION, 0.1, n, seed=20260810)
    expected = error_integral(cfg, 0.1)
    estimate, stderr = empirical_error(run, EQUAL_SUPERPOSITION)
    elapsed = time.perf_counter() - started
    ok = run == rerun and abs(estimate - expected) <= 3 * stderr
    record(7, "screen statistics within 3 binomial sigma, rerun identical",
           ok and elapsed < 30.0,
           f"estimate={estimate:.6f} expected={expected:.6f} "
           f"z={(estimate - expected) / stderr:+.2f}, {elapsed:.1f}s")


def test_criterion_8_profile_overlap():
    started = time.perf_counter()

    def overlap_of(figure):
        ds = profile_dataset(figure, 0.1)
        z = np.array([r[0] for r in ds.rows])
        plus = np.array([r[1] for r in ds.rows])
        minus = np.array([r[2] for r in ds.rows])
        return overlap_integral(z, plus, minus)

    separated = overlap_of(5)
    persistent = overlap_of(7)
    elapsed = time.perf_counter() - started
    record(8, "far-field profile overlap: negligible for set1, appreciable for set3",
           separated < 1e-6 and persistent > 0.1 and elapsed < 5.0,
           f"fig5={separated:.2e} fig7={persistent:.3f}, {elapsed:.2f}s")
