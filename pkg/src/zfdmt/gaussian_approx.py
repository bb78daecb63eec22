"""Gaussian approximation of the equivalent-channel mutual information.

The mutual information log det(I + rho H H^H) of an i.i.d. complex Gaussian
m x k (or k x m) channel is approximated as a normal variable with matched
mean and variance. Both moments are linear statistics of the eigenvalues of
the Wishart matrix H H^H, a determinantal ensemble whose kernel is built from
normalized generalized Laguerre functions; with the kernel expanded over its
basis, the mean, the second moment and the two-point correction all reduce to
one-dimensional generalized Gauss-Laguerre quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .bounds import _require_feasible
from .channel import RateSchedule, WiretapConfig, secrecy_rate
from .diversity import DiversityPoint
from .errors import QuadratureError
from .rng import (
    BLOCK_TRIALS,
    TAG_MOMENTS,
    block_generator,
    block_slice,
    map_blocks,
    sample_standard_complex,
)
from .special_functions import gauss_q, laguerre

_QUAD_RTOL = 1e-6
_FD_REL_STEP = 1e-3


@dataclass(frozen=True)
class MomentPair:
    """Mean and variance of the equivalent-channel mutual information, in nats."""

    mean: float
    variance: float
    method: str
    mean_std_err: float | None = None
    var_std_err: float | None = None


def _laguerre_basis(cfg: WiretapConfig, x: np.ndarray) -> np.ndarray:
    """Rows i = 0..m-1 of sqrt(i!/(i+d)!) L_i^d(x), d = k - m: the polynomial part
    of the orthonormal kernel basis (the weight x^d e^-x stays in the quadrature)."""
    m, d = cfg.m, cfg.k - cfg.m
    rows = []
    for i in range(m):
        norm = math.sqrt(math.factorial(i) / math.factorial(i + d))
        rows.append(norm * laguerre(i, d, x))
    return np.asarray(rows)


def eigen_density_marginal(cfg: WiretapConfig, lam) -> float | np.ndarray:
    """Marginal density of one unordered eigenvalue of the m x k unit Wishart ensemble."""
    _require_feasible(cfg)
    x = np.asarray(lam, dtype=float)
    if np.any(x < 0):
        raise ValueError("eigenvalues are nonnegative")
    d = cfg.k - cfg.m
    basis = _laguerre_basis(cfg, x)
    density = np.sum(basis * basis, axis=0) * x**d * np.exp(-x) / cfg.m
    return float(density) if np.isscalar(lam) else density


def _integrate(fn) -> float:
    """Adaptive quadrature over (0, inf) with a refinement-agreement check.

    Two runs at successively tighter tolerances must agree to _QUAD_RTOL
    relative; the tighter value is returned. The adaptive rule resolves the
    logarithmic boundary layer of width 1/rho at the origin that defeats
    fixed Gauss-Laguerre rules at high SNR.
    """
    coarse, _ = quad(fn, 0.0, np.inf, epsabs=1e-12, epsrel=1e-9, limit=300)
    fine, _ = quad(fn, 0.0, np.inf, epsabs=1e-13, epsrel=1e-10, limit=600)
    if abs(coarse - fine) > _QUAD_RTOL * max(abs(fine), 1e-12):
        raise QuadratureError(
            f"moment quadrature refinements disagree: {coarse!r} vs {fine!r}"
        )
    return fine


def _kernel_moments(cfg: WiretapConfig, rho: float) -> tuple[float, float]:
    m, d = cfg.m, cfg.k - cfg.m
    norms = [math.sqrt(math.factorial(i) / math.factorial(i + d)) for i in range(m)]

    def basis(x: float) -> list[float]:
        return [norms[i] * laguerre(i, d, x) for i in range(m)]

    def weight(x: float) -> float:
        return x**d * math.exp(-x)

    def f(x: float) -> float:
        return math.log1p(rho * x)

    def kxx(x: float) -> float:
        return sum(v * v for v in basis(x)) * weight(x)

    mean = _integrate(lambda x: f(x) * kxx(x))
    second = _integrate(lambda x: f(x) ** 2 * kxx(x))
    cross_sq = 0.0
    for i in range(m):
        for j in range(i, m):
            c = _integrate(
                lambda x, i=i, j=j: f(x) * basis(x)[i] * basis(x)[j] * weight(x)
            )
            cross_sq += c * c if i == j else 2.0 * c * c
    return mean, max(second - cross_sq, 0.0)


def _quadrature_moments(cfg: WiretapConfig, eta: float) -> MomentPair:
    mean, variance = _kernel_moments(cfg, eta / cfg.n_streams)
    return MomentPair(mean=mean, variance=variance, method="quadrature")


def _monte_carlo_moments(
    cfg: WiretapConfig, eta: float, trials: int, seed: int, workers: int
) -> MomentPair:
    rho = eta / cfg.n_streams
    rows, cols = cfg.n_m, cfg.n_streams

    def one_block(b: int):
        start, stop = block_slice(trials, b)
        n = stop - start
        rng = block_generator(seed, TAG_MOMENTS, b)
        h = sample_standard_complex(rng, (BLOCK_TRIALS, rows, cols))[:n]
        gram = (
            np.einsum("bij,bkj->bik", h, h.conj())
            if rows <= cols
            else np.einsum("bji,bjk->bik", h.conj(), h)
        )
        lam = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
        psi = np.sum(np.log1p(rho * lam), axis=1)
        return tuple(float(np.sum(psi**p)) for p in (1, 2, 3, 4))

    sums = [0.0, 0.0, 0.0, 0.0]
    for part in map_blocks(one_block, trials, workers):
        for i in range(4):
            sums[i] += part[i]
    n = float(trials)
    mean = sums[0] / n
    var = max(sums[1] / n - mean**2, 0.0)
    mu4 = sums[3] / n - 4 * mean * sums[2] / n + 6 * mean**2 * sums[1] / n - 3 * mean**4
    return MomentPair(
        mean=mean,
        variance=var,
        method="monte-carlo",
        mean_std_err=math.sqrt(var / n),
        var_std_err=math.sqrt(max(mu4 - var**2, 0.0) / n),
    )


def mutual_info_moments(
    cfg: WiretapConfig,
    eta: float,
    method: str = "quadrature",
    trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> MomentPair:
    """Mean and variance of log det(I + eta/(n_t - n_e) H H^H) over the channel ensemble."""
    _require_feasible(cfg)
    if not eta > 0:
        raise ValueError(f"eta > 0 required, got {eta}")
    if method == "quadrature":
        return _quadrature_moments(cfg, eta)
    if method == "monte-carlo":
        if trials < 1_000_000:
            raise ValueError("monte-carlo moment estimation requires >= 1e6 trials")
        return _monte_carlo_moments(cfg, eta, trials, seed, workers)
    if method == "closed-form":
        raise ValueError(
            "closed-form moment path is not provided; use 'quadrature' or 'monte-carlo'"
        )
    raise ValueError(f"unknown method {method!r}")


def outage_gaussian_approx(
    cfg: WiretapConfig, sched: RateSchedule, eta: float, method: str = "quadrature"
) -> float:
    """Normal-approximation outage probability Q((mean - R_s) / std)."""
    moments = mutual_info_moments(cfg, eta, method=method)
    rate = secrecy_rate(sched, eta)
    return gauss_q((moments.mean - rate) / math.sqrt(moments.variance))


def moment_derivatives(
    cfg: WiretapConfig, eta: float, rel_step: float = _FD_REL_STEP
) -> tuple[float, float]:
    """(d mean / d eta, d variance / d eta) by Richardson central differences in log eta."""

    def pair(e: float) -> np.ndarray:
        mp = _quadrature_moments(cfg, e)
        return np.array([mp.mean, mp.variance])

    def log_slope(h: float) -> np.ndarray:
        return (pair(eta * math.exp(h)) - pair(eta * math.exp(-h))) / (2.0 * h)

    slope = (4.0 * log_slope(rel_step / 2.0) - log_slope(rel_step)) / 3.0
    return float(slope[0] / eta), float(slope[1] / eta)


def diversity_gaussian_estimate(
    cfg: WiretapConfig, sched: RateSchedule, eta: float
) -> DiversityPoint:
    """Diversity estimate from the normal approximation: -eta dlog(approx)/d eta.

    Assembled from the approximation value, the normal density at the threshold
    and the eta-derivatives of the rate and of the two moments (the rate
    derivative is r_s * g / (1 + g eta), the moment derivatives come from
    moment_derivatives).
    """
    _require_feasible(cfg)
    if not 0 < sched.r_s <= cfg.m:
        raise ValueError(f"r_s in (0, {cfg.m}] required, got {sched.r_s}")
    moments = _quadrature_moments(cfg, eta)
    mu, var = moments.mean, moments.variance
    sigma = math.sqrt(var)
    rate = secrecy_rate(sched, eta)
    rate_prime = sched.r_s * sched.g / (1.0 + sched.g * eta)
    mu_prime, var_prime = moment_derivatives(cfg, eta)
    t = (mu - rate) / sigma
    h_val = (rate - mu) * var_prime / (2.0 * var * sigma) - (rate_prime - mu_prime) / sigma
    value = eta / gauss_q(t) * math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi) * h_val
    return DiversityPoint(r_s=sched.r_s, eta=eta, value=value, estimator="gaussian")
