"""Finite-SNR secrecy diversity-multiplexing toolkit for the zero-forcing wiretap scheme."""

from .bounds import (
    Allocation,
    BoundValue,
    equal_split_allocation,
    high_snr_allocation,
    naive_upper_bound,
    optimize_lower_bound,
    optimize_upper_bound,
    outage_lower_bound,
    outage_upper_bound,
    xi,
)
from .channel import (
    ArrayGainEstimate,
    RateSchedule,
    WiretapConfig,
    equivalent_channel,
    estimate_array_gain,
    make_config,
    read_manifest,
    secrecy_rate,
    write_manifest,
)
from .diversity import (
    DiversityPoint,
    asymptotic_dmt,
    diversity_exact_m1,
    diversity_factor,
    diversity_lower_estimate,
    diversity_upper_estimate,
    high_snr_upper_dmt,
    max_diversity_estimates,
)
from .errors import (
    ConfigError,
    InfeasibleConfigError,
    InsufficientFailuresError,
    NonHermitianError,
    OptimizerError,
    QuadratureError,
    RankDeficiencyError,
)
from .gaussian_approx import (
    MomentPair,
    diversity_gaussian_estimate,
    eigen_density_marginal,
    moment_derivatives,
    mutual_info_moments,
    outage_gaussian_approx,
)
from .matrix_kernel import (
    QRPair,
    log_det_mutual_info,
    max_eigenvalue_hermitian,
    null_space_basis,
    qr_decompose,
    sample_complex_gaussian,
)
from .monte_carlo import OutageEstimate, empirical_diversity, simulate_outage

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
