"""Scannable 1-D object profiles: amplitude transmittance t(x) and phase phi(x).

Positions are in micrometers throughout.  Hard-edged objects (knife edge,
wire, slit) are represented exactly as step functions; all edge rounding in
simulated scans comes from beam convolution in the scan engine.  Profiles
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "ObjectProfile",
    "Absent",
    "KnifeEdge",
    "Wire",
    "Slit",
    "Filament",
    "Tabulated",
    "amplitude_at",
    "phase_from_material",
    "load_profile",
    "save_profile",
]


class ObjectProfile:
    """Base class: subclasses provide vectorized t(x), phi(x) and breakpoints."""

    def values(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (t, phi) arrays evaluated at positions ``x`` (um)."""
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Positions where t(x) or phi(x) is not smooth (for exact quadrature)."""
        return ()

    def describe(self) -> dict:
        """JSON-serializable descriptor for scan metadata."""
        raise NotImplementedError


@dataclass(frozen=True)
class Absent(ObjectProfile):
    """No object: t = 1, phi = 0 everywhere."""

    def values(self, x):
        x = np.asarray(x, dtype=float)
        return np.ones_like(x), np.zeros_like(x)

    def describe(self):
        return {"kind": "absent"}


@dataclass(frozen=True)
class KnifeEdge(ObjectProfile):
    """Opaque half-plane with its edge at ``edge_position``.

    ``blocks_side`` names the side of the edge that is covered.
    """

    edge_position: float
    blocks_side: str = "left"

    def __post_init__(self):
        if self.blocks_side not in ("left", "right"):
            raise DomainError(f"blocks_side must be 'left' or 'right', got {self.blocks_side!r}")

    def values(self, x):
        x = np.asarray(x, dtype=float)
        if self.blocks_side == "left":
            t = np.where(x <= self.edge_position, 0.0, 1.0)
        else:
            t = np.where(x >= self.edge_position, 0.0, 1.0)
        return t, np.zeros_like(x)

    def breakpoints(self):
        return (self.edge_position,)

    def describe(self):
        return {
            "kind": "knife_edge",
            "edge_um": self.edge_position,
            "blocks_side": self.blocks_side,
        }


@dataclass(frozen=True)
class Wire(ObjectProfile):
    """Opaque top-hat of the given width centred at ``center``."""

    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError(f"wire width must be positive, got {self.width}")

    def values(self, x):
        x = np.asarray(x, dtype=float)
        t = np.where(np.abs(x - self.center) <= self.width / 2.0, 0.0, 1.0)
        return t, np.zeros_like(x)

    def breakpoints(self):
        half = self.width / 2.0
        return (self.center - half, self.center + half)

    def describe(self):
        return {"kind": "wire", "center_um": self.center, "width_um": self.width}


@dataclass(frozen=True)
class Slit(ObjectProfile):
    """Transparent gap of the given width in an otherwise blocking screen.

    ``background_t`` is the residual amplitude transmittance of the screen.
    """

    center: float
    width: float
    background_t: float = 0.0

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError(f"slit width must be positive, got {self.width}")
        if not 0.0 <= self.background_t <= 1.0:
            raise DomainError(f"background_t must lie in [0, 1], got {self.background_t}")

    def values(self, x):
        x = np.asarray(x, dtype=float)
        t = np.where(np.abs(x - self.center) <= self.width / 2.0, 1.0, self.background_t)
        return t, np.zeros_like(x)

    def breakpoints(self):
        half = self.width / 2.0
        return (self.center - half, self.center + half)

    def describe(self):
        return {
            "kind": "slit",
            "center_um": self.center,
            "width_um": self.width,
            "background_t": self.background_t,
        }


@dataclass(frozen=True)
class Filament(ObjectProfile):
    """Semi-transparent fiber/hair model: raised-cosine dip in t, bump in phi.

    Over [center - width/2, center + width/2] the transmittance dips
    smoothly from 1 to ``min_t`` and the phase rises from 0 to
    ``peak_phase``, both following cos^2(pi*(x - center)/width).  Smooth and
    compactly supported; asymmetric real objects are better served by a
    :class:`Tabulated` profile.
    """

    center: float
    width: float
    min_t: float
    peak_phase: float = 0.0

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError(f"filament width must be positive, got {self.width}")
        if not 0.0 <= self.min_t <= 1.0:
            raise DomainError(f"min_t must lie in [0, 1], got {self.min_t}")
        if not math.isfinite(self.peak_phase):
            raise DomainError(f"peak_phase must be finite, got {self.peak_phase}")

    def values(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.width
        inside = np.abs(u) <= 0.5
        bump = np.where(inside, np.cos(np.pi * u) ** 2, 0.0)
        t = 1.0 - (1.0 - self.min_t) * bump
        phi = self.peak_phase * bump
        return t, phi

    def breakpoints(self):
        half = self.width / 2.0
        return (self.center - half, self.center + half)

    def describe(self):
        return {
            "kind": "filament",
            "center_um": self.center,
            "width_um": self.width,
            "min_t": self.min_t,
            "peak_phase_rad": self.peak_phase,
        }


@dataclass(frozen=True)
class Tabulated(ObjectProfile):
    """Profile given by samples (x, t, phi); t and phi interpolate linearly.

    Outside the table the nearest endpoint values are used.  Sample
    positions must be strictly increasing.
    """

    x: tuple[float, ...]
    t: tuple[float, ...]
    phi: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if len(self.x) < 2:
            raise DomainError("tabulated profile needs at least two samples")
        phi = self.phi if self.phi else tuple(0.0 for _ in self.x)
        object.__setattr__(self, "phi", phi)
        if not (len(self.x) == len(self.t) == len(self.phi)):
            raise DomainError("x, t and phi must have equal lengths")
        xs = np.asarray(self.x, dtype=float)
        if not np.all(np.diff(xs) > 0):
            raise DomainError("tabulated x values must be strictly increasing")
        ts = np.asarray(self.t, dtype=float)
        if np.any(ts < 0.0) or np.any(ts > 1.0):
            raise DomainError("tabulated t values must lie in [0, 1]")
        if not np.all(np.isfinite(np.asarray(self.phi, dtype=float))):
            raise DomainError("tabulated phi values must be finite")

    def values(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.asarray(self.x)
        t = np.interp(x, xs, np.asarray(self.t))
        phi = np.interp(x, xs, np.asarray(self.phi))
        return t, phi

    def breakpoints(self):
        return tuple(self.x)

    def describe(self):
        return {"kind": "tabulated", "n_samples": len(self.x), "x_first_um": self.x[0], "x_last_um": self.x[-1]}


def amplitude_at(profile: ObjectProfile, x: float) -> tuple[float, float]:
    """Point evaluation: (t, phi) of ``profile`` at position ``x`` (um)."""
    t, phi = profile.values(np.asarray([x], dtype=float))
    return float(t[0]), float(phi[0])


def phase_from_material(n: float, depth: float, wavelength: float) -> float:
    """Phase 2*pi*(n - 1)*D/lambda for passage through depth D of index n.

    ``depth`` and ``wavelength`` in the same unit (um here by convention).
    """
    if depth < 0.0:
        raise DomainError(f"depth must be non-negative, got {depth}")
    if not wavelength > 0.0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    return 2.0 * math.pi * (n - 1.0) * depth / wavelength


def save_profile(profile: Tabulated, path) -> None:
    """Write a tabulated profile as `x_um t phi_rad` lines (repr precision)."""
    lines = ["# tabulated object profile: x_um t phi_rad"]
    for x, t, phi in zip(profile.x, profile.t, profile.phi):
        lines.append(f"{x!r} {t!r} {phi!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_profile(path) -> Tabulated:
    """Read a tabulated profile file; `#` starts a comment, blank lines skipped."""
    xs: list[float] = []
    ts: list[float] = []
    phis: list[float] = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DomainError(
                    f"{path}:{lineno}: expected three fields `x_um t phi_rad`, got {len(parts)}"
                )
            try:
                x, t, phi = (float(p) for p in parts)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from exc
            xs.append(x)
            ts.append(t)
            phis.append(phi)
    return Tabulated(tuple(xs), tuple(ts), tuple(phis))
