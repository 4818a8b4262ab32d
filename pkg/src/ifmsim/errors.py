"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration and physical-domain
problems exit 2, I/O problems exit 3, analysis-domain problems exit 4.
"""


class IfmsimError(Exception):
    """Base class for all package-specific errors."""


class DomainError(IfmsimError, ValueError):
    """An input lies outside the physical or mathematical domain of an operation."""


class ConfigError(IfmsimError, ValueError):
    """A run configuration file is malformed or inconsistent."""


class UndefinedPhaseError(DomainError):
    """Phase inversion requested for a point with no transmitted light."""


class UndefinedEfficiencyError(DomainError):
    """Efficiency requested where both the dark-port and absorption probabilities vanish."""


class InconsistentDataError(DomainError):
    """Measured probabilities imply cos(phi) outside [-1, 1]: noise exceeds the model."""


class AnalysisError(IfmsimError):
    """Base class for scan-analysis failures (maps to CLI exit code 4)."""


class NoFeatureError(AnalysisError):
    """The selected channel is flat: there is no feature to measure."""


class AmbiguousFeatureError(AnalysisError):
    """The channel does not cross half-maximum exactly twice."""


class NotAnEdgeError(AnalysisError):
    """The transmission channel is not a monotone edge profile."""


class WrongModeError(AnalysisError):
    """The requested analysis needs a scan recorded in a different mode."""
