"""The polarizing Mach-Zehnder as an interaction-free-measurement probability machine.

Maps an interferometer configuration and an object sample onto the three
single-photon outcome probabilities:

* ``p_ifm``       -- detection at the dark port, the interaction-free signal;
* ``p_abs``       -- absorption by the object;
* ``p_noresult``  -- detection at the bright port, carrying no information.

Arm convention
--------------
The dark-port amplitude is sqrt(T1*T2) from the reference arm minus
t*e^{i*phi}*sqrt(R1*R2) from the object arm, so an opaque object gives
p_ifm = T1*T2 and p_abs = R1.  T1 is the coupling into the reference arm,
T2 the dark-port analyzer acceptance of reference-arm light.  With
T1 = T2 = 0.5 this reduces to p_ifm = |1 - t*e^{i*phi}|^2 / 4.

Cross-talk enters only the absorption probability, as the floor
R1' = R1 + eps*(1 - R1): the leaked fraction of reference-arm power strikes
the object.  Its effect on fringe contrast is already subsumed by the
visibility, which sets the dark-port noise floor sigma = (1 - V)/(1 + V).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DomainError,
    InconsistentDataError,
    UndefinedEfficiencyError,
    UndefinedPhaseError,
)

__all__ = [
    "EVConfig",
    "ObjectSample",
    "ProbabilityTriple",
    "dark_port_probability",
    "measure",
    "p_ifm_balanced",
    "invert_phase",
    "efficiency",
    "efficiency_ideal",
    "apply_noise_floor",
    "invert_noise_floor",
    "dark_port_condition",
]

# cos(phi) reconstructed from measured probabilities may poke past +-1 by
# float noise; values inside this tolerance are clamped, beyond it the data
# are inconsistent with the model.
COS_CLIP_TOL = 1e-9

DARK_PORT_TOL = 1e-12


@dataclass(frozen=True)
class EVConfig:
    """Interferometer parameters.

    t1, t2     -- reference-arm coupling and dark-port analyzer acceptance;
    visibility -- fringe visibility V in (0, 1];
    crosstalk_eps -- PBS cross-talk fraction in [0, 0.5).
    """

    t1: float
    t2: float
    visibility: float = 1.0
    crosstalk_eps: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.t1 <= 1.0:
            raise DomainError(f"t1 must lie in [0, 1], got {self.t1}")
        if not 0.0 <= self.t2 <= 1.0:
            raise DomainError(f"t2 must lie in [0, 1], got {self.t2}")
        if not 0.0 < self.visibility <= 1.0:
            raise DomainError(f"visibility must lie in (0, 1], got {self.visibility}")
        if not 0.0 <= self.crosstalk_eps < 0.5:
            raise DomainError(
                f"crosstalk_eps must lie in [0, 0.5), got {self.crosstalk_eps}"
            )

    @property
    def r1(self) -> float:
        return 1.0 - self.t1

    @property
    def r2(self) -> float:
        return 1.0 - self.t2

    @property
    def noise_floor(self) -> float:
        """Dark-port background sigma = (1 - V)/(1 + V)."""
        return (1.0 - self.visibility) / (1.0 + self.visibility)

    @property
    def r1_effective(self) -> float:
        """Object-arm coupling including the cross-talk leak, R1 + eps*(1 - R1)."""
        return self.r1 + self.crosstalk_eps * (1.0 - self.r1)


@dataclass(frozen=True)
class ObjectSample:
    """Point sample of an object: amplitude transmittance t and phase phi."""

    t: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise DomainError(f"amplitude transmittance must lie in [0, 1], got {self.t}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phase must be finite, got {self.phi}")

    @property
    def p_norm(self) -> float:
        """Normalized transmission probability t^2."""
        return self.t * self.t


@dataclass(frozen=True)
class ProbabilityTriple:
    p_ifm: float
    p_abs: float
    p_noresult: float


def dark_port_probability(config: EVConfig, a_obj: complex) -> float:
    """Dark-port probability |sqrt(T1*T2) - a_obj*sqrt(R1*R2)|^2.

    ``a_obj`` is the complex amplitude presented by the object arm: the
    point value t*e^{i*phi} for a point object, or a beam-weighted average
    for extended scans.
    """
    u = math.sqrt(config.t1 * config.t2)
    v = math.sqrt(config.r1 * config.r2)
    return abs(u - a_obj * v) ** 2


def measure(config: EVConfig, sample: ObjectSample) -> ProbabilityTriple:
    """Ideal single-photon outcome probabilities for a point object.

    p_ifm  = T1*T2 + R1*R2*t^2 - 2*t*cos(phi)*sqrt(T1*T2*R1*R2)
    p_abs  = R1'*(1 - t^2) with R1' the cross-talk-augmented object coupling
    p_noresult = 1 - p_ifm - p_abs

    The visibility noise floor is not applied here; it belongs to recorded
    scans (see :func:`apply_noise_floor` and the scan engine).
    """
    a_obj = sample.t * cmath.exp(1j * sample.phi)
    p_ifm = dark_port_probability(config, a_obj)
    p_abs = config.r1_effective * (1.0 - sample.p_norm)
    return ProbabilityTriple(p_ifm, p_abs, 1.0 - p_ifm - p_abs)


def p_ifm_balanced(p_norm: float, phi: float) -> float:
    """Dark-port probability for 50/50 splitting: (1 + P - 2*cos(phi)*sqrt(P))/4."""
    if not 0.0 <= p_norm <= 1.0:
        raise DomainError(f"p_norm must lie in [0, 1], got {p_norm}")
    return (1.0 + p_norm - 2.0 * math.cos(phi) * math.sqrt(p_norm)) / 4.0


def invert_phase(p_ifm: float, p_norm: float, config: EVConfig) -> float:
    """Object phase in [0, pi] implied by a measured (p_ifm, p_norm) pair.

    Only cos(phi) is observable in the dark-port probability, so the sign
    of the phase cannot be recovered and the branch is restricted to
    [0, pi].  Raises :class:`UndefinedPhaseError` for an opaque point and
    :class:`InconsistentDataError` when the implied cos(phi) falls outside
    [-1, 1] by more than the clamp tolerance.
    """
    if p_norm <= 0.0:
        raise UndefinedPhaseError("phase is undefined where no light is transmitted")
    tt = config.t1 * config.t2
    rr = config.r1 * config.r2
    denom = 2.0 * math.sqrt(tt * rr * p_norm)
    if denom == 0.0:
        raise UndefinedPhaseError(
            "phase is undefined for a fully transmitting or fully reflecting splitter"
        )
    cos_phi = (tt + rr * p_norm - p_ifm) / denom
    if cos_phi > 1.0 + COS_CLIP_TOL or cos_phi < -1.0 - COS_CLIP_TOL:
        raise InconsistentDataError(
            f"implied cos(phi) = {cos_phi:.12g} is outside [-1, 1]: "
            "measurement noise exceeds the interference model"
        )
    return math.acos(min(1.0, max(-1.0, cos_phi)))


def efficiency(triple: ProbabilityTriple) -> float:
    """Fraction of information-yielding events that are interaction-free."""
    denom = triple.p_ifm + triple.p_abs
    if denom == 0.0:
        raise UndefinedEfficiencyError(
            "efficiency is undefined when p_ifm and p_abs both vanish"
        )
    return triple.p_ifm / denom


def efficiency_ideal(r: float) -> float:
    """Ideal opaque-object efficiency (1 - R)/(2 - R) under R1 = T2 = R."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"reflectance must lie in (0, 1), got {r}")
    return (1.0 - r) / (2.0 - r)


def apply_noise_floor(p_ifm_ideal: float, config: EVConfig) -> float:
    """Blend an ideal dark-port probability toward 1 by the visibility floor.

    Returns p + sigma*(1 - p): equals sigma when the ideal value is zero,
    is monotone in both arguments and saturates at 1.
    """
    sigma = config.noise_floor
    return p_ifm_ideal + sigma * (1.0 - p_ifm_ideal)


def invert_noise_floor(p_ifm_recorded: float, config: EVConfig) -> float:
    """Undo :func:`apply_noise_floor`: recover the ideal dark-port probability."""
    sigma = config.noise_floor
    return (p_ifm_recorded - sigma) / (1.0 - sigma)


def dark_port_condition(config: EVConfig) -> bool:
    """True iff the absent-object dark-port probability is exactly zero (T2 = R1)."""
    return abs(config.t2 - config.r1) < DARK_PORT_TOL
