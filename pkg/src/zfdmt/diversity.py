"""Diversity-gain estimators derived from the outage bounds, and their limits.

The finite-SNR diversity gain is the negative slope of log outage probability
versus log SNR. Differentiating the bound products term by term (allocations
held fixed) reduces everything to one scalar factor per stream; the small-rate
limit of that factor is taken analytically so the estimators are continuous at
zero rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import Allocation, _check_alloc, _require_feasible, xi
from .channel import RateSchedule, WiretapConfig
from .special_functions import (
    log_reg_lower_inc_gamma,
    reg_lower_inc_gamma_ratio,
)


@dataclass(frozen=True)
class DiversityPoint:
    r_s: float
    eta: float
    value: float
    estimator: str
    std_err: float | None = None


def diversity_factor(
    j: int, x: float, eta: float, sched: RateSchedule, cfg: WiretapConfig
) -> float:
    """Per-stream diversity contribution of one incomplete-gamma outage factor.

    Equals -(eta^2 / (n_t - n_e)) * d/d eta log Gamma_inc(xi(x), k - j + 1);
    the index j may be nonpositive (the lower-bound estimator uses j = 2l - m).
    At x = 0 the 0/0 expression is replaced by its continuous limit
    (eta / (n_t - n_e)) * (k - j + 1) * (1 - g eta / ((1 + g eta) ln(1 + g eta))).
    """
    a = cfg.k - j + 1
    if a < 1:
        raise ValueError(f"index j={j} exceeds k={cfg.k}")
    if x < 0:
        raise ValueError(f"x >= 0 required, got {x}")
    g_eta = sched.g * eta
    ell = math.log1p(g_eta)
    q = g_eta / (1.0 + g_eta)
    if x == 0.0:
        return eta / cfg.n_streams * a * (1.0 - q / ell)
    # (1+g eta)^x - x g eta (1+g eta)^(x-1) - 1, written to survive tiny x
    growth = math.expm1(x * ell) - x * q * math.exp(x * ell)
    return growth * reg_lower_inc_gamma_ratio(xi(x, eta, sched, cfg), a)


def _split_weights(cfg, sched, eta, alloc) -> list[float]:
    """Weights eps_l * prod_{j != l}(1 - eps_j) / (1 - prod_j (1 - eps_j))."""
    dofs = [cfg.k - l + 1 for l in range(1, cfg.m + 1)]
    x_full = xi(sched.r_s, eta, sched, cfg)
    log_alpha = [log_reg_lower_inc_gamma(x_full, a) for a in dofs]
    eps = []
    for b, a, la in zip(alloc.values, dofs, log_alpha):
        lr = log_reg_lower_inc_gamma(xi(b, eta, sched, cfg), a) - la
        eps.append(math.exp(min(lr, 0.0)))
    log1m = [math.log1p(-e) if e < 1.0 else -math.inf for e in eps]
    total = sum(log1m)
    denom = 1.0 if math.isinf(total) else -math.expm1(total)
    weights = []
    for l in range(cfg.m):
        others = sum(v for i, v in enumerate(log1m) if i != l)
        weights.append(eps[l] * math.exp(others) / denom)
    return weights


def diversity_upper_estimate(
    cfg: WiretapConfig, sched: RateSchedule, eta: float, alloc: Allocation
) -> DiversityPoint:
    """Negative log-SNR slope of the upper outage bound at a fixed allocation."""
    _require_feasible(cfg)
    r_s = sched.r_s
    if not 0 < r_s <= cfg.m:
        raise ValueError(f"r_s in (0, {cfg.m}] required, got {r_s}")
    _check_alloc(alloc, r_s, cfg.m, "upper")
    weights = _split_weights(cfg, sched, eta, alloc)
    acc = 0.0
    for l in range(1, cfg.m + 1):
        f_full = diversity_factor(l, r_s, eta, sched, cfg)
        f_split = diversity_factor(l, alloc.values[l - 1], eta, sched, cfg)
        acc += f_full + weights[l - 1] * (f_split - f_full)
    value = cfg.n_streams / eta * acc
    return DiversityPoint(r_s=r_s, eta=eta, value=value, estimator="upper")


def diversity_lower_estimate(
    cfg: WiretapConfig, sched: RateSchedule, eta: float, alloc: Allocation
) -> DiversityPoint:
    """Negative log-SNR slope of the lower outage bound at a fixed allocation."""
    _require_feasible(cfg)
    r_s = sched.r_s
    if not 0 < r_s <= cfg.m:
        raise ValueError(f"r_s in (0, {cfg.m}] required, got {r_s}")
    _check_alloc(alloc, r_s, cfg.m, "lower")
    acc = sum(
        diversity_factor(2 * l - cfg.m, alloc.values[l - 1], eta, sched, cfg)
        for l in range(1, cfg.m + 1)
    )
    value = cfg.n_streams / eta * acc
    return DiversityPoint(r_s=r_s, eta=eta, value=value, estimator="lower")


def diversity_exact_m1(cfg: WiretapConfig, sched: RateSchedule, eta: float) -> DiversityPoint:
    """Exact diversity gain when the equivalent channel has a single stream (m = 1)."""
    _require_feasible(cfg)
    if cfg.m != 1:
        raise ValueError(f"exact diversity requires m == 1, got m = {cfg.m}")
    value = cfg.n_streams / eta * diversity_factor(1, sched.r_s, eta, sched, cfg)
    return DiversityPoint(r_s=sched.r_s, eta=eta, value=value, estimator="exact-m1")


def asymptotic_dmt(cfg: WiretapConfig, r_s: float) -> float:
    """Infinite-SNR diversity-multiplexing tradeoff of the equivalent channel.

    Piecewise linear through ((l, (n_t - n_e - l)(n_m - l)) for integer l up to
    m; identically zero when the eavesdropper blocks the null space.
    """
    if not cfg.zf_feasible:
        return 0.0
    if not 0 <= r_s <= cfg.m:
        raise ValueError(f"r_s in [0, {cfg.m}] required, got {r_s}")
    anchors = np.arange(cfg.m + 1)
    values = (cfg.n_streams - anchors) * (cfg.n_m - anchors)
    return float(np.interp(r_s, anchors, values))


def max_diversity_estimates(
    cfg: WiretapConfig, sched: RateSchedule, eta: float
) -> tuple[float, float]:
    """Zero-rate limits of the upper- and lower-bound diversity estimates."""
    _require_feasible(cfg)
    m, k = cfg.m, cfg.k
    g_eta = sched.g * eta
    snr_factor = 1.0 - g_eta / ((1.0 + g_eta) * math.log1p(g_eta))
    upper_max = m * k * (1.0 - (m - 1) / (2.0 * k)) * snr_factor
    lower_max = m * k * snr_factor
    return upper_max, lower_max


def high_snr_upper_dmt(cfg: WiretapConfig, r_s: float) -> float:
    """Infinite-SNR limit of the upper-bound diversity estimate (two linear branches)."""
    _require_feasible(cfg)
    m, k = cfg.m, cfg.k
    if not 0 <= r_s <= m:
        raise ValueError(f"r_s in [0, {m}] required, got {r_s}")
    harmonic = sum(1.0 / (k - l + 1) for l in range(1, m + 1))
    if r_s < 1.0:
        dof_sum = sum(k - l + 1 for l in range(1, m + 1))
        return (1.0 - r_s) * dof_sum + r_s * (m - 1) / harmonic
    return (m - r_s) / harmonic
