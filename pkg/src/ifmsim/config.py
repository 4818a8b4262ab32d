"""Run configuration files.

A run is fully determined by one TOML file with flat sections; unknown
sections or keys are rejected so that typos cannot silently change a run.

    [interferometer]        # required
    t1 = 0.525              # reference-arm coupling
    t2 = 0.462              # dark-port analyzer acceptance
    visibility = 1.0        # optional, fringe visibility V
    crosstalk = 0.0         # optional, PBS cross-talk eps

    [beam]                  # required for scans
    fwhm_um = 9.1           # either give the spot directly...
    # ...or the optics, and the spot is predicted:
    # wavelength_nm = 670, focal_mm = 60, aperture_mm = 5, beam_mm = 25

    [object]                # required
    kind = "wire"           # absent | knife_edge | wire | slit | filament | tabulated
    center_um = 0.0
    width_um = 95.5
    # knife_edge: edge_um, blocks = "left"|"right"
    # slit: center_um, width_um, background_t
    # filament: center_um, width_um, min_t, peak_phase_rad
    # tabulated: path = "profile.txt"

    [scan]                  # required for scans
    start_um = -150.0
    stop_um = 150.0
    step_um = 0.91
    mode = "intensity-averaged"   # optional; or point-sampled | coherent-convolved
    drift_leak_per_um = 0.0       # optional
    lock_loss_um = 120.0          # optional

    [mc]                    # required for Monte Carlo runs
    n = 1000000
    seed = 12345
    x_um = 0.0              # optional: where to sample the object
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .beam import BeamSpec, spot_fwhm
from .errors import ConfigError, DomainError
from .objects import (
    Absent,
    Filament,
    KnifeEdge,
    ObjectProfile,
    Slit,
    Tabulated,
    Wire,
    load_profile,
)
from .interferometer import EVConfig
from .scan import SCAN_MODES, DriftModel, ScanPlan

__all__ = ["RunConfig", "load_run_config"]

_SECTION_KEYS = {
    "interferometer": {"t1", "t2", "visibility", "crosstalk"},
    "beam": {"fwhm_um", "wavelength_nm", "focal_mm", "aperture_mm", "beam_mm"},
    "object": {
        "kind",
        "center_um",
        "width_um",
        "edge_um",
        "blocks",
        "background_t",
        "min_t",
        "peak_phase_rad",
        "path",
    },
    "scan": {
        "start_um",
        "stop_um",
        "step_um",
        "mode",
        "drift_leak_per_um",
        "lock_loss_um",
    },
    "mc": {"n", "seed", "x_um"},
}

_OBJECT_KINDS = ("absent", "knife_edge", "wire", "slit", "filament", "tabulated")


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; optional parts are None when absent."""

    interferometer: EVConfig
    profile: ObjectProfile
    beam_fwhm_um: float | None
    plan: ScanPlan | None
    mc_n: int | None
    mc_seed: int | None
    mc_x_um: float
    source: str


def _require(table: dict, section: str, key: str):
    if key not in table:
        raise ConfigError(f"[{section}] is missing required key {key!r}")
    return table[key]


def _number(table: dict, section: str, key: str, default=None):
    if key not in table:
        if default is None:
            raise ConfigError(f"[{section}] is missing required key {key!r}")
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}].{key} must be a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigError(f"[{section}].{key} must be finite, got {value!r}")
    return float(value)


def _check_keys(raw: dict, path: str) -> None:
    unknown_sections = set(raw) - set(_SECTION_KEYS)
    if unknown_sections:
        raise ConfigError(f"{path}: unknown section(s) {sorted(unknown_sections)}")
    for section, table in raw.items():
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: [{section}] must be a section of key = value pairs")
        unknown = set(table) - _SECTION_KEYS[section]
        if unknown:
            raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)} in [{section}]")


def _parse_object(table: dict, base_dir: Path) -> ObjectProfile:
    kind = _require(table, "object", "kind")
    if kind not in _OBJECT_KINDS:
        raise ConfigError(f"[object].kind must be one of {_OBJECT_KINDS}, got {kind!r}")
    try:
        if kind == "absent":
            return Absent()
        if kind == "knife_edge":
            return KnifeEdge(
                edge_position=_number(table, "object", "edge_um"),
                blocks_side=table.get("blocks", "left"),
            )
        if kind == "wire":
            return Wire(
                center=_number(table, "object", "center_um"),
                width=_number(table, "object", "width_um"),
            )
        if kind == "slit":
            return Slit(
                center=_number(table, "object", "center_um"),
                width=_number(table, "object", "width_um"),
                background_t=_number(table, "object", "background_t", default=0.0),
            )
        if kind == "filament":
            return Filament(
                center=_number(table, "object", "center_um"),
                width=_number(table, "object", "width_um"),
                min_t=_number(table, "object", "min_t"),
                peak_phase=_number(table, "object", "peak_phase_rad", default=0.0),
            )
        path = _require(table, "object", "path")
        profile_path = Path(path)
        if not profile_path.is_absolute():
            profile_path = base_dir / profile_path
        return load_profile(profile_path)
    except DomainError as exc:
        raise ConfigError(f"[object]: {exc}") from exc


def _parse_beam(table: dict) -> float:
    if "fwhm_um" in table:
        extra = set(table) - {"fwhm_um"}
        if extra:
            raise ConfigError(
                f"[beam] gives fwhm_um directly; optics keys {sorted(extra)} are redundant"
            )
        fwhm = _number(table, "beam", "fwhm_um")
        if not fwhm > 0:
            raise ConfigError(f"[beam].fwhm_um must be positive, got {fwhm}")
        return fwhm
    try:
        spec = BeamSpec(
            wavelength=_number(table, "beam", "wavelength_nm") * 1e-9,
            focal_length=_number(table, "beam", "focal_mm") * 1e-3,
            aperture_diameter=_number(table, "beam", "aperture_mm") * 1e-3,
            input_beam_diameter=_number(table, "beam", "beam_mm") * 1e-3,
        )
        return spot_fwhm(spec).fwhm * 1e6
    except DomainError as exc:
        raise ConfigError(f"[beam]: {exc}") from exc


def _parse_scan(table: dict) -> ScanPlan:
    mode = table.get("mode", "intensity-averaged")
    if mode not in SCAN_MODES:
        raise ConfigError(f"[scan].mode must be one of {SCAN_MODES}, got {mode!r}")
    drift = None
    if "drift_leak_per_um" in table or "lock_loss_um" in table:
        drift = DriftModel(
            leak_rate=_number(table, "scan", "drift_leak_per_um", default=0.0),
            lock_loss_position=(
                _number(table, "scan", "lock_loss_um") if "lock_loss_um" in table else None
            ),
        )
    try:
        return ScanPlan(
            start=_number(table, "scan", "start_um"),
            stop=_number(table, "scan", "stop_um"),
            step=_number(table, "scan", "step_um"),
            mode=mode,
            drift=drift,
        )
    except DomainError as exc:
        raise ConfigError(f"[scan]: {exc}") from exc


def load_run_config(path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    _check_keys(raw, str(path))

    if "interferometer" not in raw:
        raise ConfigError(f"{path}: missing required section [interferometer]")
    if "object" not in raw:
        raise ConfigError(f"{path}: missing required section [object]")
    itab = raw["interferometer"]
    try:
        config = EVConfig(
            t1=_number(itab, "interferometer", "t1"),
            t2=_number(itab, "interferometer", "t2"),
            visibility=_number(itab, "interferometer", "visibility", default=1.0),
            crosstalk_eps=_number(itab, "interferometer", "crosstalk", default=0.0),
        )
    except DomainError as exc:
        raise ConfigError(f"[interferometer]: {exc}") from exc

    profile = _parse_object(raw["object"], path.parent)
    beam_fwhm = _parse_beam(raw["beam"]) if "beam" in raw else None
    plan = _parse_scan(raw["scan"]) if "scan" in raw else None

    mc_n = mc_seed = None
    mc_x = 0.0
    if "mc" in raw:
        mtab = raw["mc"]
        n = _require(mtab, "mc", "n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"[mc].n must be a positive integer, got {n!r}")
        seed = _require(mtab, "mc", "seed")
        if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
            raise ConfigError(f"[mc].seed must be a non-negative integer, got {seed!r}")
        mc_n, mc_seed = n, seed
        mc_x = _number(mtab, "mc", "x_um", default=0.0)

    return RunConfig(
        interferometer=config,
        profile=profile,
        beam_fwhm_um=beam_fwhm,
        plan=plan,
        mc_n=mc_n,
        mc_seed=mc_seed,
        mc_x_um=mc_x,
        source=str(path),
    )
