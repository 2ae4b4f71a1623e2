"""Command-line client for the simulator service.

All computation happens behind the service interface: by default the request
models are handed straight to the in-process handlers, with ``--server URL``
the same JSON goes over HTTP to a running ``sgsim serve``.

Exit codes: 0 success, 1 runtime failure (including failed validation),
2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import __version__, core, service
from . import schemas as sm
from .csvio import csv_text

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_LOCAL_ROUTES = {
    "/report": service.report,
    "/figures": service.figures,
    "/sweep": service.sweep,
    "/table1": service.table1,
    "/mc": service.mc,
    "/validate": service.validate,
}


class ServiceFailure(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def call_service(server: str | None, path: str, request) -> dict:
    """POST a request model to the service, in-process unless a URL is given."""
    if server is None:
        return _LOCAL_ROUTES[path](request).model_dump()
    try:
        resp = httpx.post(server.rstrip("/") + path,
                          json=request.model_dump(mode="json"), timeout=600.0)
    except httpx.HTTPError as exc:
        raise ServiceFailure(f"cannot reach service at {server}: {exc}", EXIT_RUNTIME) from exc
    if resp.status_code >= 500:
        raise ServiceFailure(f"service error {resp.status_code}: {resp.text}", EXIT_RUNTIME)
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise ServiceFailure(f"rejected request: {detail}", EXIT_USAGE)
    return resp.json()


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value parameter file")
    p.add_argument("--preset", choices=sorted(core.PRESETS), help="named reference set")
    p.add_argument("--b", type=float, help="field gradient, gauss/cm")
    p.add_argument("--tau", type=float, help="interaction time, s")
    p.add_argument("--sigma0", type=float, help="initial packet width, cm")
    p.add_argument("--vy", type=float, help="longitudinal velocity, cm/s")
    p.add_argument("--B0", type=float, help="bias field, gauss")
    p.add_argument("--alpha", type=str, help="up amplitude (complex literal)")
    p.add_argument("--beta", type=str, help="down amplitude (complex literal)")


def _add_io_flags(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--server", help="service URL; default runs in-process")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)
    p.add_argument("--out", type=Path, help="output directory")


def _parse_amplitude(label: str, text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise core.ConfigError(f"--{label}: not a complex literal: {text!r}") from None


def resolve_config(args) -> tuple[sm.ConfigModel, sm.SpinModel]:
    """Merge preset < config file < flags, then validate."""
    values: dict[str, float] = {}
    if args.preset:
        preset = core.PRESETS[args.preset]
        values.update(b=preset.b, tau=preset.tau, sigma0=preset.sigma0,
                      v_y=preset.v_y, B0=preset.B0)
    if args.config:
        values.update(core.parse_config_file(args.config.read_text()))
    for key, flag in (("b", args.b), ("tau", args.tau), ("sigma0", args.sigma0),
                      ("v_y", args.vy), ("B0", args.B0)):
        if flag is not None:
            values[key] = flag
    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise core.ConfigError("--alpha and --beta must be given together")
        alpha = _parse_amplitude("alpha", args.alpha)
        beta = _parse_amplitude("beta", args.beta)
        values.update(alpha_re=alpha.real, alpha_im=alpha.imag,
                      beta_re=beta.real, beta_im=beta.imag)
    cfg, spin = core.build_config(values)
    return sm.ConfigModel.from_core(cfg), sm.SpinModel(
        alpha_re=spin.alpha.real, alpha_im=spin.alpha.imag,
        beta_re=spin.beta.real, beta_im=spin.beta.imag,
    )


def _emit(doc: dict, text: str | None, args, filename: str) -> None:
    """Print the chosen rendering; also write files when --out is given."""
    if args.format == "json" or text is None:
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(text)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / f"{filename}.json").write_text(json.dumps(doc, indent=2) + "\n")
        if text is not None:
            (args.out / f"{filename}.csv").write_text(text)


def run_report(args) -> int:
    config, spin = resolve_config(args)
    req = sm.ReportRequest(config=config, spin=spin)
    doc = call_service(args.server, "/report", req)
    for warning in doc["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    curve_csv = csv_text(("t_sec", "E"), [(p["t"], p["E"]) for p in doc["idealness"]["curve"]])
    _emit(doc, curve_csv if args.format == "csv" else None, args, "report")
    if args.out is not None:
        (args.out / "e_curve.csv").write_text(curve_csv)
    return EXIT_OK


def run_figures(args) -> int:
    req = sm.FigureRequest(figure=args.figure)
    doc = call_service(args.server, "/figures", req)
    out = args.out if args.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    for ds in doc["datasets"]:
        path = out / f"{ds['name']}.csv"
        path.write_text(ds["csv"])
        print(path)
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    return EXIT_OK


def _parse_axis(spec: str) -> sm.AxisModel:
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise core.ConfigError(
            f"axis spec must be param:start:stop:steps[:lin|log], got {spec!r}")
    param, start, stop, steps = parts[:4]
    scale = parts[4] if len(parts) == 5 else "lin"
    try:
        return sm.AxisModel(param=param, start=float(start), stop=float(stop),
                            steps=int(steps), scale=scale)
    except ValueError as exc:
        raise core.ConfigError(f"bad axis spec {spec!r}: {exc}") from None


def run_sweep(args) -> int:
    config, _ = resolve_config(args)
    req = sm.SweepRequest(base=config, axis1=_parse_axis(args.axis1),
                          axis2=_parse_axis(args.axis2))
    doc = call_service(args.server, "/sweep", req)
    _emit(doc, doc["dataset"]["csv"], args, "sweep")
    return EXIT_OK


def run_table1(args) -> int:
    req = sm.Table1Request(compute_from_set3=args.from_set3, **(
        {"E_s": args.es} if args.es is not None else {}))
    doc = call_service(args.server, "/table1", req)
    _emit(doc, doc["dataset"]["csv"], args, "table1")
    return EXIT_OK


def run_mc(args) -> int:
    config, spin = resolve_config(args)
    req = sm.McRequest(config=config, spin=spin, t_screen=args.t_screen,
                       n_samples=args.samples, seed=args.seed,
                       include_rows=args.dump_samples is not None)
    doc = call_service(args.server, "/mc", req)
    rows = doc.pop("rows", None)
    if args.dump_samples is not None and rows is not None:
        args.dump_samples.parent.mkdir(parents=True, exist_ok=True)
        args.dump_samples.write_text(csv_text(("label", "z_cm"), rows))
        print(f"wrote {len(rows)} samples to {args.dump_samples}", file=sys.stderr)
    _emit(doc, None, args, "mc")
    return EXIT_OK


def run_validate(args) -> int:
    config, _ = resolve_config(args)
    req = sm.ValidateRequest(config=config, n_points=args.points, n_steps=args.steps,
                             include_convergence=not args.skip_convergence,
                             include_densities=args.dump_densities is not None)
    doc = call_service(args.server, "/validate", req)
    datasets = doc.pop("densities", None)
    if args.dump_densities is not None and datasets:
        args.dump_densities.mkdir(parents=True, exist_ok=True)
        for ds in datasets:
            (args.dump_densities / f"{ds['name']}.csv").write_text(ds["csv"])
            print(args.dump_densities / f"{ds['name']}.csv", file=sys.stderr)
    _emit(doc, None, args, "validate")
    return EXIT_OK if doc["passed"] else EXIT_RUNTIME


def run_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgsim",
        description="Stern-Gerlach measurement idealness simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="idealness report and outcome probabilities")
    _add_config_flags(p)
    _add_io_flags(p, "json")
    p.set_defaults(func=run_report)

    p = sub.add_parser("figures", help="emit reference figure data as CSV")
    p.add_argument("figure", type=int, choices=(2, 3, 4, 5, 6, 7))
    _add_io_flags(p, "csv")
    p.set_defaults(func=run_figures)

    p = sub.add_parser("sweep", help="two-axis parameter sweep")
    _add_config_flags(p)
    _add_io_flags(p, "csv")
    p.add_argument("--axis1", required=True, help="param:start:stop:steps[:lin|log]")
    p.add_argument("--axis2", required=True, help="param:start:stop:steps[:lin|log]")
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("table1", help="reference probability table")
    _add_io_flags(p, "csv")
    p.add_argument("--es", type=float, help="saturated error override")
    p.add_argument("--from-set3", action="store_true",
                   help="compute the saturated error from the set3 preset")
    p.set_defaults(func=run_table1)

    p = sub.add_parser("mc", help="Monte Carlo screen simulation")
    _add_config_flags(p)
    _add_io_flags(p, "json")
    p.add_argument("--t-screen", type=float, default=0.1, help="flight time to the screen, s")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--dump-samples", type=Path, help="per-sample CSV (capped at 1e5 rows)")
    p.set_defaults(func=run_mc)

    p = sub.add_parser("validate", help="grid solver vs closed form")
    _add_config_flags(p)
    _add_io_flags(p, "json")
    p.add_argument("--points", type=int, help="override grid point count")
    p.add_argument("--steps", type=int, default=4096, help="time steps across the magnet")
    p.add_argument("--skip-convergence", action="store_true")
    p.add_argument("--dump-densities", type=Path,
                   help="directory for (z, numeric, closed-form) density CSVs")
    p.set_defaults(func=run_validate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=run_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (core.ConfigError, core.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ServiceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
