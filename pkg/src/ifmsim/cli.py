"""Command-line front end.

Subcommands: ``scan``, ``sweep``, ``mc``, ``analyze``, ``spot`` and
``demo-figures``.  Every command is deterministic given its inputs (Monte
Carlo seeds are explicit), and outputs carry no timestamps, so reruns are
byte-identical.

Exit codes: 0 success, 2 configuration/usage error, 3 I/O failure,
4 analysis-domain error.  The environment variable ``IFMSIM_OUTDIR``, when
set, redirects relative output paths into that directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    efficiency_sweep,
    knife_edge_resolution,
    phase_profile,
    width_fwhm,
)
from .beam import BeamSpec, spot_fwhm
from .config import RunConfig, load_run_config
from .errors import AnalysisError, ConfigError, DomainError
from .interferometer import EVConfig, ObjectSample
from .objects import KnifeEdge, Wire, amplitude_at
from .scan import (
    DriftModel,
    ScanPlan,
    ScanResult,
    monte_carlo,
    read_scan_csv,
    run_scan,
    write_scan_csv,
)
from .svgplot import Series, render_plot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_ANALYSIS = 4

# demo top-hat widths spanning 2x to 23x the 9.1 um reference beam (um)
DEMO_WIRE_WIDTHS = (20.0, 50.0, 95.5, 159.1, 207.9)


def _out_path(path_str: str) -> Path:
    path = Path(path_str)
    outdir = os.environ.get("IFMSIM_OUTDIR")
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(value: float) -> str:
    return format(value, ".12g")


def _write_scan_plot(result: ScanResult, path: Path, title: str) -> None:
    xs = result.x.tolist()
    svg = render_plot(
        [
            Series("P_ifm", xs, result.p_ifm.tolist(), axis="left"),
            Series("P_norm", xs, result.p_norm.tolist(), axis="right"),
        ],
        title=title,
        xlabel="position (um)",
        ylabel_left="P_ifm",
        ylabel_right="P_norm",
    )
    path.write_text(svg, encoding="ascii")


def _require_scan_config(cfg: RunConfig) -> tuple[float, ScanPlan]:
    if cfg.beam_fwhm_um is None:
        raise ConfigError(f"{cfg.source}: a scan needs a [beam] section")
    if cfg.plan is None:
        raise ConfigError(f"{cfg.source}: a scan needs a [scan] section")
    return cfg.beam_fwhm_um, cfg.plan


def cmd_scan(args) -> int:
    cfg = load_run_config(args.config)
    fwhm, plan = _require_scan_config(cfg)
    result = run_scan(plan, cfg.interferometer, cfg.profile, fwhm)
    out = _out_path(args.output)
    write_scan_csv(result, out)
    if args.plot:
        _write_scan_plot(result, out.with_suffix(".svg"), out.stem)
    print(f"wrote {out} ({len(result)} positions)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.points < 1:
        raise ConfigError(f"--points must be >= 1, got {args.points}")
    if not 0.0 <= args.eps < 0.5:
        raise ConfigError(f"--eps must lie in [0, 0.5), got {args.eps}")
    rs = [(i + 1) / (args.points + 1) for i in range(args.points)]
    table = efficiency_sweep(rs, ObjectSample(t=0.0), eps=args.eps)
    out = _out_path(args.output)
    lines = ["r,p_ifm,eta"]
    for row in table.rows:
        lines.append(f"{_fmt(row.r)},{_fmt(row.p_ifm)},{_fmt(row.eta)}")
    out.write_text("\n".join(lines) + "\n", encoding="ascii")
    if args.plot:
        xs = [row.r for row in table.rows]
        svg = render_plot(
            [
                Series("P_ifm", xs, [row.p_ifm for row in table.rows]),
                Series("efficiency", xs, [row.eta for row in table.rows]),
            ],
            title=f"opaque-object sweep, eps = {args.eps:g}",
            xlabel="reflectance R (= R1 = T2)",
            ylabel_left="probability",
        )
        out.with_suffix(".svg").write_text(svg, encoding="ascii")
    print(f"wrote {out} ({len(table.rows)} rows)")
    return EXIT_OK


def cmd_mc(args) -> int:
    cfg = load_run_config(args.config)
    n = args.n if args.n is not None else cfg.mc_n
    seed = args.seed if args.seed is not None else cfg.mc_seed
    if n is None or seed is None:
        raise ConfigError(
            f"{cfg.source}: Monte Carlo needs [mc] n and seed (or --n/--seed)"
        )
    if n < 1:
        raise ConfigError(f"photon count must be >= 1, got {n}")
    t, phi = amplitude_at(cfg.profile, cfg.mc_x_um)
    tally = monte_carlo(cfg.interferometer, ObjectSample(t=t, phi=phi), n, seed)
    payload = tally.to_json()
    if args.output:
        out = _out_path(args.output)
        out.write_text(payload, encoding="ascii")
        print(f"wrote {out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _width_report(scan: ScanResult) -> dict:
    report = {}
    for channel in ("transmission", "ifm"):
        est = width_fwhm(scan, channel)
        report[channel] = {
            "fwhm_um": est.fwhm,
            "half_max_level": est.half_max_level,
        }
    return report


def cmd_analyze(args) -> int:
    scan = read_scan_csv(args.scan_csv)
    if args.kind == "width":
        report = {"kind": "width", "channels": _width_report(scan)}
    elif args.kind == "edge":
        est = knife_edge_resolution(scan)
        report = {
            "kind": "edge",
            "spot_fwhm_um": est.spot_fwhm,
            "rayleigh_um": est.rayleigh,
        }
    else:
        meta = scan.metadata.get("config")
        if not meta:
            raise ConfigError(
                f"{args.scan_csv}: phase analysis needs the metadata sidecar "
                "written alongside the scan"
            )
        config = EVConfig(
            t1=meta["t1"],
            t2=meta["t2"],
            visibility=meta["visibility"],
            crosstalk_eps=meta["crosstalk_eps"],
        )
        points = phase_profile(scan, config)
        report = {
            "kind": "phase",
            "points": [
                {
                    "x_um": p.x,
                    "phi_rad": p.phi,
                    "phi_deg": None if p.phi is None else math.degrees(p.phi),
                }
                for p in points
            ],
        }
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        out = _out_path(args.output)
        out.write_text(payload, encoding="ascii")
        print(f"wrote {out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_spot(args) -> int:
    spec = BeamSpec(
        wavelength=args.wavelength_nm * 1e-9,
        focal_length=args.focal_mm * 1e-3,
        aperture_diameter=args.aperture_mm * 1e-3,
        input_beam_diameter=args.beam_mm * 1e-3,
    )
    pred = spot_fwhm(spec)
    print(f"truncation T      = {spec.truncation:.4f}")
    print(f"K factor          = {pred.k_factor:.4f}")
    print(f"spot FWHM d       = {pred.fwhm * 1e6:.3f} um")
    print(f"Rayleigh d_R      = {pred.rayleigh_resolution * 1e6:.3f} um")
    return EXIT_OK


def cmd_demo_figures(args) -> int:
    outdir = _out_path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    # knife-edge image: visibility-limited noise floor, edge swept through focus
    knife_cfg = EVConfig(t1=0.467, t2=0.422, visibility=0.933)
    knife = run_scan(
        ScanPlan(start=40.0, stop=160.0, step=0.91),
        knife_cfg,
        KnifeEdge(edge_position=95.0, blocks_side="right"),
        beam_fwhm=9.1,
    )
    write_scan_csv(knife, outdir / "knife_edge_scan.csv")
    _write_scan_plot(knife, outdir / "knife_edge_scan.svg", "knife edge")

    # thin-wire image with lock drift truncating the dark-port scan
    wire_cfg = EVConfig(t1=0.525, t2=0.462, visibility=0.96)
    wire = run_scan(
        ScanPlan(
            start=-250.0,
            stop=250.0,
            step=0.91,
            drift=DriftModel(leak_rate=4e-5, lock_loss_position=180.0),
        ),
        wire_cfg,
        Wire(center=0.0, width=95.5),
        beam_fwhm=9.1,
    )
    write_scan_csv(wire, outdir / "wire_scan.csv")
    _write_scan_plot(wire, outdir / "wire_scan.svg", "thin metal wire")

    # efficiency/P_ifm sweeps, ideal and with PBS cross-talk
    for eps, name in ((0.0, "sweep_ideal"), (0.01, "sweep_crosstalk")):
        rs = [(i + 1) / 100.0 for i in range(99)]
        table = efficiency_sweep(rs, ObjectSample(t=0.0), eps=eps)
        lines = ["r,p_ifm,eta"]
        for row in table.rows:
            lines.append(f"{_fmt(row.r)},{_fmt(row.p_ifm)},{_fmt(row.eta)}")
        (outdir / f"{name}.csv").write_text("\n".join(lines) + "\n", encoding="ascii")
        svg = render_plot(
            [
                Series("P_ifm", rs, [row.p_ifm for row in table.rows]),
                Series("efficiency", rs, [row.eta for row in table.rows]),
            ],
            title=f"opaque-object sweep, eps = {eps:g}",
            xlabel="reflectance R (= R1 = T2)",
            ylabel_left="probability",
        )
        (outdir / f"{name}.svg").write_text(svg, encoding="ascii")

    # width report over the five demo wires, both channels
    report: dict = {"kind": "width-report", "beam_fwhm_um": 9.1, "wires": []}
    cfg = EVConfig(t1=0.525, t2=0.462)
    for width in DEMO_WIRE_WIDTHS:
        half_span = width / 2 + 60.0
        scan = run_scan(
            ScanPlan(start=-half_span, stop=half_span, step=0.91),
            cfg,
            Wire(center=0.0, width=width),
            beam_fwhm=9.1,
        )
        channels = _width_report(scan)
        report["wires"].append(
            {
                "true_width_um": width,
                "transmission_fwhm_um": channels["transmission"]["fwhm_um"],
                "ifm_fwhm_um": channels["ifm"]["fwhm_um"],
            }
        )
    (outdir / "width_report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="ascii"
    )

    print(f"wrote demo figures to {outdir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifmsim",
        description="Interaction-free measurement and imaging simulator",
    )
    parser.add_argument("--version", action="version", version=f"ifmsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="simulate a raster scan from a config file")
    p.add_argument("config", help="TOML run configuration")
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="also write an SVG plot")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sweep", help="P_ifm and efficiency versus reflectance")
    p.add_argument("--eps", type=float, default=0.0, help="PBS cross-talk (default 0)")
    p.add_argument("--points", type=int, default=99, help="number of reflectance points")
    p.add_argument("-o", "--output", required=True, help="output CSV path")
    p.add_argument("--plot", action="store_true", help="also write an SVG plot")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mc", help="single-photon Monte Carlo tally")
    p.add_argument("config", help="TOML run configuration")
    p.add_argument("--n", type=int, default=None, help="photon count (overrides [mc].n)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (overrides [mc].seed)")
    p.add_argument("-o", "--output", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("analyze", help="analyze a scan CSV")
    p.add_argument("scan_csv", help="scan CSV written by `ifmsim scan`")
    p.add_argument("--kind", choices=("width", "edge", "phase"), required=True)
    p.add_argument("-o", "--output", default=None, help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spot", help="predict focused-spot size and resolution")
    p.add_argument("--wavelength-nm", type=float, required=True)
    p.add_argument("--focal-mm", type=float, required=True)
    p.add_argument("--aperture-mm", type=float, required=True)
    p.add_argument("--beam-mm", type=float, required=True)
    p.set_defaults(func=cmd_spot)

    p = sub.add_parser(
        "demo-figures", help="write the bundled demo scans, sweeps and width report"
    )
    p.add_argument("-o", "--outdir", required=True, help="output directory")
    p.set_defaults(func=cmd_demo_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnalysisError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
