"""Recovering physical quantities from scans.

Object widths come from half-maximum crossings of the transmission
(1 - p_norm) or dark-port channel; spot size and Rayleigh resolution from
the derivative of a knife-edge transmission scan; phase profiles from
point-by-point inversion of the dark-port formula; and efficiency/
reflectance sweep tables from the probability engine directly.

Widths use no curve fitting: the baseline is the median of the first and
last 10% of samples (the dark-port channel sits on a visibility noise
floor that must be removed first), the peak is the post-subtraction
maximum, and the two half-maximum crossings are located by linear
interpolation between bracketing samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beam import RAYLEIGH_FACTOR
from .errors import (
    AmbiguousFeatureError,
    DomainError,
    IfmsimError,
    NoFeatureError,
    NotAnEdgeError,
    WrongModeError,
)
from .interferometer import (
    EVConfig,
    ObjectSample,
    efficiency,
    invert_noise_floor,
    invert_phase,
    measure,
)
from .scan import ScanResult

__all__ = [
    "WidthEstimate",
    "ResolutionEstimate",
    "SweepRow",
    "SweepTable",
    "PhasePoint",
    "width_fwhm",
    "knife_edge_resolution",
    "phase_profile",
    "efficiency_sweep",
]

CHANNELS = ("transmission", "ifm")

# Post-subtraction peaks below this are indistinguishable from a flat scan.
FLAT_TOL = 1e-6

# Points with less transmitted power than this carry no usable phase.
PHASE_P_NORM_MIN = 0.02

# Monotonicity slack for quadrature-level wiggle on knife-edge profiles.
EDGE_MONOTONE_TOL = 1e-9


@dataclass(frozen=True)
class WidthEstimate:
    fwhm: float
    channel: str
    half_max_level: float


@dataclass(frozen=True)
class ResolutionEstimate:
    spot_fwhm: float
    rayleigh: float


@dataclass(frozen=True)
class SweepRow:
    r: float
    p_ifm: float
    eta: float


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]


@dataclass(frozen=True)
class PhasePoint:
    """Phase at one scan position; ``phi`` is None where it is undefined."""

    x: float
    phi: float | None


def _edge_baseline(signal: np.ndarray) -> float:
    """Median of the first and last 10% of samples (at least one each)."""
    k = max(1, len(signal) // 10)
    return float(np.median(np.concatenate([signal[:k], signal[-k:]])))


def _half_max_crossings(x: np.ndarray, signal: np.ndarray, level: float) -> list[float]:
    """Positions where the signal crosses ``level``, by linear interpolation."""
    s = signal - level
    crossings: list[float] = []
    for i in range(len(s) - 1):
        if s[i] == 0.0:
            crossings.append(float(x[i]))
        elif s[i] * s[i + 1] < 0.0:
            frac = -s[i] / (s[i + 1] - s[i])
            crossings.append(float(x[i] + frac * (x[i + 1] - x[i])))
    if s[-1] == 0.0:
        crossings.append(float(x[-1]))
    return crossings


def width_fwhm(scan: ScanResult, channel: str = "transmission") -> WidthEstimate:
    """FWHM of a single contiguous feature in the chosen channel.

    ``transmission`` analyses 1 - p_norm, ``ifm`` the dark-port channel.
    Raises :class:`NoFeatureError` for a flat profile and
    :class:`AmbiguousFeatureError` unless the profile crosses half-maximum
    exactly twice.
    """
    if channel not in CHANNELS:
        raise DomainError(f"channel must be one of {CHANNELS}, got {channel!r}")
    if len(scan) < 10:
        raise DomainError(f"scan too short for width analysis ({len(scan)} samples)")
    signal = (1.0 - scan.p_norm) if channel == "transmission" else scan.p_ifm
    baseline = _edge_baseline(signal)
    peak = float(signal.max()) - baseline
    if peak < FLAT_TOL:
        raise NoFeatureError(f"{channel} channel is flat: nothing to measure")
    level = baseline + 0.5 * peak
    crossings = _half_max_crossings(scan.x, signal, level)
    if len(crossings) != 2:
        raise AmbiguousFeatureError(
            f"{channel} channel crosses half-maximum {len(crossings)} times, need exactly 2"
        )
    return WidthEstimate(crossings[1] - crossings[0], channel, level)


def _median3(y: np.ndarray) -> np.ndarray:
    if len(y) < 3:
        return y.copy()
    out = y.copy()
    stack = np.stack([y[:-2], y[1:-1], y[2:]])
    out[1:-1] = np.median(stack, axis=0)
    return out


def knife_edge_resolution(scan: ScanResult) -> ResolutionEstimate:
    """Spot FWHM and Rayleigh resolution from a knife-edge transmission scan.

    The (median-of-3 smoothed) transmission must run monotonically from ~1
    to ~0 or vice versa; the spot size is the FWHM of its central-difference
    derivative, and the Rayleigh resolution 1.18 times that.
    """
    if len(scan) < 16:
        raise DomainError(f"scan too short for edge analysis ({len(scan)} samples)")
    p = _median3(scan.p_norm)
    d = np.diff(p)
    increasing = np.all(d >= -EDGE_MONOTONE_TOL)
    decreasing = np.all(d <= EDGE_MONOTONE_TOL)
    if not (increasing or decreasing):
        raise NotAnEdgeError("transmission profile is not monotone")
    if p.max() < 0.9 or p.min() > 0.1:
        raise NotAnEdgeError(
            f"transmission spans [{p.min():.3g}, {p.max():.3g}], not a full edge"
        )
    deriv = np.abs((p[2:] - p[:-2]) / (scan.x[2:] - scan.x[:-2]))
    xs = scan.x[1:-1]
    baseline = _edge_baseline(deriv)
    peak = float(deriv.max()) - baseline
    if peak < FLAT_TOL:
        raise NotAnEdgeError("derivative of the transmission profile is flat")
    level = baseline + 0.5 * peak
    crossings = _half_max_crossings(xs, deriv, level)
    if len(crossings) != 2:
        raise NotAnEdgeError(
            f"edge derivative crosses half-maximum {len(crossings)} times, need exactly 2"
        )
    spot = crossings[1] - crossings[0]
    return ResolutionEstimate(spot, RAYLEIGH_FACTOR * spot)


def phase_profile(scan: ScanResult, config: EVConfig) -> list[PhasePoint]:
    """Per-position object phase recovered from a point-sampled scan.

    The visibility noise floor is removed first (inverting the affine
    blend), then the dark-port formula is inverted at each position.
    Points with p_norm below 0.02, or whose implied cos(phi) is
    inconsistent, are marked undefined rather than failing the profile.
    Scans recorded in a convolved mode are rejected: the inversion assumes
    the point-object relation between p_ifm and p_norm.
    """
    mode = scan.metadata.get("mode")
    if mode != "point-sampled":
        raise WrongModeError(
            f"phase inversion needs a point-sampled scan, got mode {mode!r}"
        )
    points: list[PhasePoint] = []
    for i in range(len(scan)):
        pn = float(scan.p_norm[i])
        if pn < PHASE_P_NORM_MIN:
            points.append(PhasePoint(float(scan.x[i]), None))
            continue
        ideal = invert_noise_floor(float(scan.p_ifm[i]), config)
        try:
            phi = invert_phase(ideal, pn, config)
        except IfmsimError:
            points.append(PhasePoint(float(scan.x[i]), None))
            continue
        points.append(PhasePoint(float(scan.x[i]), phi))
    return points


def efficiency_sweep(
    r_values, sample: ObjectSample, eps: float = 0.0
) -> SweepTable:
    """P_ifm and efficiency versus reflectance under the constraint R1 = T2 = R.

    Each row uses the configuration (T1 = 1 - r, T2 = r) with PBS
    cross-talk ``eps``.  With eps = 0 and an opaque sample the rows satisfy
    p_ifm = r*(1 - r) and eta = (1 - r)/(2 - r) exactly.
    """
    rs = [float(r) for r in r_values]
    if not rs:
        raise DomainError("sweep needs at least one reflectance")
    for r in rs:
        if not 0.0 < r < 1.0:
            raise DomainError(f"reflectance must lie in (0, 1), got {r}")
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise DomainError("reflectances must be strictly increasing")
    rows = []
    for r in rs:
        config = EVConfig(t1=1.0 - r, t2=r, visibility=1.0, crosstalk_eps=eps)
        triple = measure(config, sample)
        rows.append(SweepRow(r, triple.p_ifm, efficiency(triple)))
    return SweepTable(tuple(rows))
