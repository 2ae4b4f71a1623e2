"""FastAPI service exposing the simulator.

Handlers are plain functions over the pydantic models; the CLI calls them
in-process by default and over HTTP when pointed at a running server
(`sgsim serve`).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .core import ConfigError, DomainError, derive_kinematics, check_decoupling, PRESETS
from .figures import figure_datasets
from .idealness import build_report, default_time_grid, error_integral, saturation_value
from .montecarlo import empirical_error, sample_screen, sample_screen_rows
from .pde import (
    GridLeakError,
    GridSpec,
    compare_with_closed_form,
    default_grid,
    density_comparison_rows,
    splitting_convergence,
)
from .probabilities import TABLE1_COLUMNS, analyzer_placement, probability_table, table1_rows
from .sweep import Axis, run_sweep
from .csvio import csv_text
from .wavepacket import Spin
from . import schemas as sm

FIDELITY_FLOOR = 0.9999
NORM_DRIFT_CEILING = 1e-10
ORDER_RATIO_RANGE = (3.0, 5.0)

app = FastAPI(
    title="sgsim",
    version=__version__,
    description="Stern-Gerlach measurement idealness simulator",
)


@app.exception_handler(ConfigError)
@app.exception_handler(DomainError)
async def _invalid_input(_request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/healthz", response_model=sm.HealthResponse)
def healthz() -> sm.HealthResponse:
    return sm.HealthResponse(status="ok", version=__version__)


@app.post("/report", response_model=sm.ReportResponse)
def report(req: sm.ReportRequest) -> sm.ReportResponse:
    cfg = req.config.to_core()
    spin = req.spin.to_core()
    kin = derive_kinematics(cfg)
    dec = check_decoupling(cfg)
    idl = build_report(
        cfg, eps_I=req.eps_I, eps_E=req.eps_E, delta_sat=req.delta_sat,
        times=default_time_grid(points=req.curve_points),
    )
    prob = probability_table(spin, idl.E_s)
    warnings = [] if dec.passed else [dec.message()]
    return sm.ReportResponse(
        config=sm.ConfigModel.from_core(cfg),
        spin=req.spin,
        kinematics=sm.KinematicsModel(
            v_z=kin.v_z, k_y=kin.k_y, k_z=kin.k_z,
            delta_plus=kin.delta_plus, delta_minus=kin.delta_minus,
        ),
        decoupling=sm.DecouplingModel(
            ratio=None if cfg.b == 0.0 else dec.ratio,
            threshold=dec.threshold, passed=dec.passed,
        ),
        idealness=sm.IdealnessModel(
            log_abs_I=idl.log_abs_I, abs_I=idl.abs_I, E_s=idl.E_s, t_s=idl.t_s,
            regime=idl.regime.value,
            curve=[sm.CurvePoint(t=t, E=e) for t, e in idl.E_curve],
        ),
        probabilities=sm.ProbabilityModel(**prob.to_dict()),
        Y_s=analyzer_placement(cfg, idl.t_s),
        warnings=warnings,
    )


def _dataset_model(ds) -> sm.DatasetModel:
    return sm.DatasetModel(
        name=ds.name, columns=list(ds.columns),
        rows=[list(row) for row in ds.rows], csv=ds.csv(),
    )


@app.post("/figures", response_model=sm.FigureResponse)
def figures(req: sm.FigureRequest) -> sm.FigureResponse:
    return sm.FigureResponse(
        figure=req.figure,
        datasets=[_dataset_model(ds) for ds in figure_datasets(req.figure)],
    )


@app.post("/sweep", response_model=sm.SweepResponse)
def sweep(req: sm.SweepRequest) -> sm.SweepResponse:
    ds = run_sweep(
        req.base.to_core(),
        Axis(**req.axis1.model_dump()),
        Axis(**req.axis2.model_dump()),
        eps_I=req.eps_I, eps_E=req.eps_E,
    )
    return sm.SweepResponse(dataset=_dataset_model(ds))


@app.post("/table1", response_model=sm.Table1Response)
def table1(req: sm.Table1Request) -> sm.Table1Response:
    e_s = saturation_value(PRESETS["set3"]) if req.compute_from_set3 else req.E_s
    rows = table1_rows(e_s)
    row_tuples = [tuple(row[c] for c in TABLE1_COLUMNS) for row in rows]
    ds = sm.DatasetModel(
        name="table1", columns=list(TABLE1_COLUMNS),
        rows=[list(r) for r in row_tuples],
        csv=csv_text(TABLE1_COLUMNS, row_tuples),
    )
    return sm.Table1Response(E_s=e_s, dataset=ds)


@app.post("/mc", response_model=sm.McResponse)
def mc(req: sm.McRequest) -> sm.McResponse:
    cfg = req.config.to_core()
    spin = req.spin.to_core()
    if req.include_rows:
        run, rows = sample_screen_rows(cfg, spin, req.t_screen, req.n_samples, req.seed)
    else:
        run, rows = sample_screen(cfg, spin, req.t_screen, req.n_samples, req.seed), None
    estimate, stderr = empirical_error(run, spin)
    return sm.McResponse(
        **run.to_dict(),
        error_estimate=estimate,
        error_stderr=stderr,
        error_expected=error_integral(cfg, req.t_screen),
        rows=rows,
    )


@app.post("/validate", response_model=sm.ValidateResponse)
def validate(req: sm.ValidateRequest) -> sm.ValidateResponse:
    cfg = req.config.to_core()
    grid = default_grid(cfg, n_steps=req.n_steps, padding_sigmas=req.padding_sigmas)
    if req.n_points is not None:
        grid = GridSpec(z_min=grid.z_min, z_max=grid.z_max, n_points=req.n_points,
                        dt=grid.dt, n_steps=grid.n_steps)
    reports = {}
    densities = [] if req.include_densities else None
    try:
        for spin in (Spin.PLUS, Spin.MINUS):
            rep = compare_with_closed_form(cfg, spin, grid)
            reports[spin] = sm.ComparisonModel(
                l2_density_error=rep.l2_density_error,
                fidelity=rep.fidelity,
                norm_drift=rep.norm_drift,
            )
            if densities is not None:
                rows = density_comparison_rows(cfg, spin, grid)
                densities.append(sm.DatasetModel(
                    name=f"density_{spin.value}",
                    columns=["z_cm", "density_numeric", "density_closed_form"],
                    rows=[list(r) for r in rows],
                    csv=csv_text(("z_cm", "density_numeric", "density_closed_form"), rows),
                ))
    except GridLeakError as exc:
        return sm.ValidateResponse(
            plus=reports.get(Spin.PLUS), minus=None,
            passed=False, detail=f"grid leak: {exc}",
        )

    errors = ratios = None
    checks = [
        (r.fidelity > FIDELITY_FLOOR and r.norm_drift < NORM_DRIFT_CEILING)
        for r in reports.values()
    ]
    detail_parts = [
        f"{label}: fidelity={r.fidelity:.6f}, norm_drift={r.norm_drift:.2e}"
        for label, r in (("plus", reports[Spin.PLUS]), ("minus", reports[Spin.MINUS]))
    ]
    if req.include_convergence:
        errors, ratios = splitting_convergence(cfg.constants)
        checks.append(all(ORDER_RATIO_RANGE[0] <= r <= ORDER_RATIO_RANGE[1] for r in ratios))
        detail_parts.append("order ratios: " + ", ".join(f"{r:.2f}" for r in ratios))
    return sm.ValidateResponse(
        plus=reports[Spin.PLUS], minus=reports[Spin.MINUS],
        convergence_errors=errors, convergence_ratios=ratios,
        densities=densities,
        passed=all(checks), detail="; ".join(detail_parts),
    )
