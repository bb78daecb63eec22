"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """Antenna configuration outside the supported range."""


class InfeasibleConfigError(ValueError):
    """Operation requires a null space, i.e. fewer eavesdropper than transmit antennas."""


class RankDeficiencyError(ValueError):
    """Numerical row rank too low to extract the requested null-space basis."""


class NonHermitianError(ValueError):
    """Matrix expected to be Hermitian is not, beyond tolerance."""


class OptimizerError(RuntimeError):
    """Allocation optimizer failed to reach the stationarity target within its iteration cap."""


class QuadratureError(RuntimeError):
    """Moment quadrature failed to converge under refinement."""


class InsufficientFailuresError(RuntimeError):
    """Too few outage events at a finite-difference endpoint; rerun with more trials."""
