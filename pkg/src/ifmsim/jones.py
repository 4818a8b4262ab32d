"""Jones-calculus primitives for the polarizing interferometer.

Conventions
-----------
A polarization state is the column vector [h; v] of complex amplitudes of
the horizontal and vertical components.  Linear polarization at angle
``theta`` is measured from the *vertical* axis, so the state is
[sin(theta); cos(theta)]: theta = 0 is pure vertical, theta = pi/2 pure
horizontal.  Power is |h|^2 + |v|^2 and never exceeds the input power for
any passive element here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "JonesVector",
    "JonesMatrix",
    "PBSModel",
    "linear_polarized",
    "object_operator",
    "half_wave_plate",
    "analyzer_project",
    "pbs_split",
]


@dataclass(frozen=True)
class JonesVector:
    """Two-component complex polarization state, ordered [horizontal, vertical]."""

    h: complex
    v: complex

    @property
    def power(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2


@dataclass(frozen=True)
class JonesMatrix:
    """2x2 complex operator acting on a :class:`JonesVector`."""

    m: tuple[tuple[complex, complex], tuple[complex, complex]]

    def apply(self, state: JonesVector) -> JonesVector:
        (a, b), (c, d) = self.m
        return JonesVector(a * state.h + b * state.v, c * state.h + d * state.v)


@dataclass(frozen=True)
class PBSModel:
    """Polarizing beamsplitter with incoherent power cross-talk.

    ``crosstalk_eps`` is the fraction of the "wrong" polarization's power
    that leaks into each output port.  Zero reproduces an ideal PBS
    (horizontal fully transmitted, vertical fully reflected); any value
    redistributes power losslessly between the two ports.
    """

    crosstalk_eps: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.crosstalk_eps < 0.5:
            raise DomainError(
                f"PBS cross-talk must lie in [0, 0.5), got {self.crosstalk_eps}"
            )


def linear_polarized(theta: float) -> JonesVector:
    """State linearly polarized at ``theta`` radians from the vertical axis."""
    if not math.isfinite(theta):
        raise DomainError(f"polarization angle must be finite, got {theta}")
    return JonesVector(math.sin(theta), math.cos(theta))


def object_operator(t: float, phi: float) -> JonesMatrix:
    """Semi-transparent object in the horizontal-labelled arm slot.

    ``t`` is the real amplitude transmittance (power transmission t^2) and
    ``phi`` the phase picked up in passage, giving diag(t*e^{i*phi}, 1).
    Which physical arm maps onto the horizontal slot is owned by the
    interferometer layer.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"amplitude transmittance must lie in [0, 1], got {t}")
    return JonesMatrix(((t * cmath.exp(1j * phi), 0j), (0j, 1 + 0j)))


def half_wave_plate(axis_angle: float) -> JonesMatrix:
    """Half-wave plate with its fast axis at ``axis_angle`` from horizontal.

    Lossless (unitary); used to rotate linear polarizations.
    """
    c, s = math.cos(2 * axis_angle), math.sin(2 * axis_angle)
    return JonesMatrix(((complex(c), complex(s)), (complex(s), complex(-c))))


def analyzer_project(state: JonesVector, theta2: float) -> complex:
    """Dark-port projection amplitude for an analyzer at ``theta2``.

    Returns [sin(theta2), -cos(theta2)] . state; its modulus squared is the
    dark-port detection probability.  The projection vanishes for a state
    linearly polarized at the matched angle, which is what makes the port
    dark with no object present.
    """
    return math.sin(theta2) * state.h - math.cos(theta2) * state.v


def pbs_split(state: JonesVector, pbs: PBSModel) -> tuple[JonesVector, JonesVector]:
    """Split a state at a PBS into (transmitted, reflected) ports.

    With cross-talk eps, a power fraction eps of the horizontal component
    appears in the reflected port and eps of the vertical component in the
    transmitted port.  Leakage is incoherent power routing: no phase
    relationship between main and leaked components is modelled, which the
    orthogonal output slots make irrelevant for subsequent detection.
    Total output power equals input power exactly.
    """
    eps = pbs.crosstalk_eps
    keep = math.sqrt(1.0 - eps)
    leak = math.sqrt(eps)
    transmitted = JonesVector(keep * state.h, leak * state.v)
    reflected = JonesVector(leak * state.h, keep * state.v)
    return transmitted, reflected
