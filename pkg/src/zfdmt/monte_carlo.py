"""Ground-truth engine: seeded Monte Carlo secrecy-outage estimation.

Each trial draws a fresh channel pair, projects the main channel onto the
eavesdropper null space and counts an outage when the equivalent mutual
information falls below the scheduled secrecy rate. Trials run in fixed
counter-based blocks (see rng), so estimates are bit-identical for a given
(seed, trials) pair no matter how many workers execute the blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import _require_feasible
from .channel import RateSchedule, WiretapConfig, secrecy_rate
from .diversity import DiversityPoint
from .errors import InsufficientFailuresError
from .rng import (
    BLOCK_TRIALS,
    TAG_OUTAGE,
    block_generator,
    block_slice,
    map_blocks,
    sample_standard_complex,
)

_MIN_TRIALS = 1_000
_MIN_FAILURES = 100


@dataclass(frozen=True)
class OutageEstimate:
    probability: float
    trials: int
    failures: int
    std_err: float
    seed: int
    eta: float
    r_s: float


def _mutual_info_batch(cfg: WiretapConfig, h_m: np.ndarray, h_e: np.ndarray | None, rho: float):
    """Vectorized log det(I + rho H_eq H_eq^H) over a batch of channel pairs.

    Matches the single-matrix composition equivalent_channel + log_det_mutual_info.
    """
    if h_e is not None:
        q = np.linalg.qr(h_e.conj().transpose(0, 2, 1), mode="complete")[0]
        h_eq = h_m @ q[:, :, cfg.n_e :]
    else:
        h_eq = h_m
    rows, cols = h_eq.shape[-2:]
    gram = (
        h_eq @ h_eq.conj().transpose(0, 2, 1)
        if rows <= cols
        else h_eq.conj().transpose(0, 2, 1) @ h_eq
    )
    lam = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return np.sum(np.log1p(rho * lam), axis=1)


def simulate_outage(
    cfg: WiretapConfig,
    sched: RateSchedule,
    eta: float,
    trials: int,
    seed: int,
    workers: int = 1,
) -> OutageEstimate:
    """Fraction of channel draws whose equivalent mutual information misses R_s."""
    _require_feasible(cfg)
    if trials < _MIN_TRIALS:
        raise ValueError(f"trials >= {_MIN_TRIALS} required, got {trials}")
    rate = secrecy_rate(sched, eta)
    rho = eta / cfg.n_streams

    def one_block(b: int) -> int:
        start, stop = block_slice(trials, b)
        n = stop - start
        rng = block_generator(seed, TAG_OUTAGE, b)
        h_m = sample_standard_complex(rng, (BLOCK_TRIALS, cfg.n_m, cfg.n_t))[:n]
        h_e = None
        if cfg.n_e > 0:
            h_e = sample_standard_complex(rng, (BLOCK_TRIALS, cfg.n_e, cfg.n_t))[:n]
        psi = _mutual_info_batch(cfg, h_m, h_e, rho)
        return int(np.count_nonzero(psi < rate))

    failures = sum(map_blocks(one_block, trials, workers))
    p = failures / trials
    return OutageEstimate(
        probability=p,
        trials=int(trials),
        failures=failures,
        std_err=math.sqrt(p * (1.0 - p) / trials),
        seed=int(seed),
        eta=float(eta),
        r_s=sched.r_s,
    )


def empirical_diversity(
    cfg: WiretapConfig,
    sched: RateSchedule,
    eta: float,
    trials: int,
    seed: int,
    rel_step: float = 0.12,
    workers: int = 1,
) -> DiversityPoint:
    """Two-point log-log outage slope around eta, with propagated standard error.

    The endpoints at eta*(1 -/+ rel_step) use independent streams (seed and
    seed + 1) so the binomial errors add in quadrature. Requires at least 100
    failures at each endpoint; otherwise raises with the trial count to rerun at.
    """
    if not 0.01 <= rel_step <= 0.5:
        raise ValueError(f"rel_step in [0.01, 0.5] required, got {rel_step}")
    eta_lo = eta * (1.0 - rel_step)
    eta_hi = eta * (1.0 + rel_step)
    est_lo = simulate_outage(cfg, sched, eta_lo, trials, seed, workers)
    est_hi = simulate_outage(cfg, sched, eta_hi, trials, seed + 1, workers)
    worst = min(est_lo.failures, est_hi.failures)
    if worst < _MIN_FAILURES:
        needed = math.inf if worst == 0 else int(trials * _MIN_FAILURES / worst * 1.2)
        raise InsufficientFailuresError(
            f"only {worst} failures at an endpoint; rerun with trials >= {needed}"
        )
    dlog_eta = math.log(eta_hi) - math.log(eta_lo)
    slope = -(math.log(est_hi.probability) - math.log(est_lo.probability)) / dlog_eta
    rel_errs = (
        est_lo.std_err / est_lo.probability,
        est_hi.std_err / est_hi.probability,
    )
    std_err = math.hypot(*rel_errs) / dlog_eta
    return DiversityPoint(
        r_s=sched.r_s, eta=eta, value=slope, estimator="empirical", std_err=std_err
    )
