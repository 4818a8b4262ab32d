"""Interaction-free measurement and imaging simulator.

Models a polarizing Mach-Zehnder interferometer probing semi-transparent
phase objects: Jones-calculus primitives, the dark-port probability engine,
Gaussian-spot optics, raster-scan simulation with single-photon Monte Carlo
statistics, and scan analysis (object widths, beam resolution, phase
profiles, efficiency sweeps).
"""

__version__ = "0.1.0"

from .analysis import (
    PhasePoint,
    ResolutionEstimate,
    SweepRow,
    SweepTable,
    WidthEstimate,
    efficiency_sweep,
    knife_edge_resolution,
    phase_profile,
    width_fwhm,
)
from .beam import BeamSpec, SpotPrediction, gaussian_profile, k_factor, spot_fwhm
from .errors import (
    AmbiguousFeatureError,
    AnalysisError,
    ConfigError,
    DomainError,
    IfmsimError,
    InconsistentDataError,
    NoFeatureError,
    NotAnEdgeError,
    UndefinedEfficiencyError,
    UndefinedPhaseError,
    WrongModeError,
)
from .interferometer import (
    EVConfig,
    ObjectSample,
    ProbabilityTriple,
    apply_noise_floor,
    dark_port_condition,
    efficiency,
    efficiency_ideal,
    invert_phase,
    measure,
    p_ifm_balanced,
)
from .jones import (
    JonesMatrix,
    JonesVector,
    PBSModel,
    analyzer_project,
    linear_polarized,
    object_operator,
    pbs_split,
)
from .objects import (
    Absent,
    Filament,
    KnifeEdge,
    ObjectProfile,
    Slit,
    Tabulated,
    Wire,
    amplitude_at,
    load_profile,
    phase_from_material,
    save_profile,
)
from .scan import (
    DriftModel,
    OutcomeTally,
    ScanPlan,
    ScanResult,
    effective_sample,
    monte_carlo,
    read_scan_csv,
    run_scan,
    write_scan_csv,
)
