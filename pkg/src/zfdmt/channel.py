"""Problem-instance construction: antenna configuration, array gain, rate schedule.

The array gain g normalizes the rate axis so outage curves of different antenna
configurations are comparable: g is the mean positive part of the largest
eigenvalue of (H_m^H H_m - H_e^H H_e) over the channel ensemble, estimated once
per configuration by Monte Carlo and shared by every downstream consumer
through the run manifest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .matrix_kernel import null_space_basis
from .rng import (
    BLOCK_TRIALS,
    TAG_GAIN,
    block_generator,
    block_slice,
    map_blocks,
    sample_standard_complex,
)

_MAX_ANTENNAS = 16


@dataclass(frozen=True)
class WiretapConfig:
    """Antenna triple (n_t transmit, n_m legitimate receive, n_e eavesdropper)."""

    n_t: int
    n_m: int
    n_e: int

    @property
    def n_streams(self) -> int:
        """Dimension of the eavesdropper null space, n_t - n_e."""
        return self.n_t - self.n_e

    @property
    def m(self) -> int:
        return min(self.n_streams, self.n_m)

    @property
    def k(self) -> int:
        return max(self.n_streams, self.n_m)

    @property
    def zf_feasible(self) -> bool:
        """Null-space transmission needs fewer eavesdropper than transmit antennas."""
        return self.n_e < self.n_t


@dataclass(frozen=True)
class RateSchedule:
    """Secrecy multiplexing gain r_s and array gain g defining R_s = r_s log(1 + g eta)."""

    r_s: float
    g: float

    def __post_init__(self):
        if self.r_s < 0:
            raise ValueError(f"r_s >= 0 required, got {self.r_s}")
        if not self.g > 0:
            raise ValueError(f"g > 0 required, got {self.g}")


@dataclass(frozen=True)
class ArrayGainEstimate:
    value: float
    std_err: float
    trials: int
    seed: int


def make_config(n_t: int, n_m: int, n_e: int) -> WiretapConfig:
    for name, value in (("n_t", n_t), ("n_m", n_m), ("n_e", n_e)):
        if value != int(value) or not 0 <= value <= _MAX_ANTENNAS:
            raise ConfigError(f"{name} must be an integer in [0, {_MAX_ANTENNAS}], got {value}")
    if n_t < 1 or n_m < 1:
        raise ConfigError("n_t and n_m must be >= 1")
    return WiretapConfig(n_t=int(n_t), n_m=int(n_m), n_e=int(n_e))


def estimate_array_gain(
    cfg: WiretapConfig, trials: int, seed: int, workers: int = 1
) -> ArrayGainEstimate:
    """Monte-Carlo estimate of g = E[lambda_max(H_m^H H_m - H_e^H H_e)]^+.

    The positive-part clamp is applied per draw before averaging. Trials run in
    fixed counter-based blocks, so the estimate is bit-identical for a given
    (seed, trials) pair regardless of worker count.
    """
    if trials < 1:
        raise ValueError("trials >= 1 required")

    def one_block(b: int) -> tuple[float, float]:
        start, stop = block_slice(trials, b)
        n = stop - start
        rng = block_generator(seed, TAG_GAIN, b)
        h_m = sample_standard_complex(rng, (BLOCK_TRIALS, cfg.n_m, cfg.n_t))[:n]
        diff = np.einsum("bij,bik->bjk", h_m.conj(), h_m)
        if cfg.n_e > 0:
            h_e = sample_standard_complex(rng, (BLOCK_TRIALS, cfg.n_e, cfg.n_t))[:n]
            diff = diff - np.einsum("bij,bik->bjk", h_e.conj(), h_e)
        lam = np.linalg.eigvalsh(diff)[:, -1]
        lam = np.clip(lam, 0.0, None)
        return float(np.sum(lam)), float(np.sum(lam * lam))

    total = 0.0
    total_sq = 0.0
    for s, s2 in map_blocks(one_block, trials, workers):
        total += s
        total_sq += s2
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    return ArrayGainEstimate(
        value=mean, std_err=math.sqrt(var / trials), trials=int(trials), seed=int(seed)
    )


def secrecy_rate(sched: RateSchedule, eta: float) -> float:
    """Target secrecy rate R_s = r_s * log(1 + g * eta) in nats per channel use."""
    if not eta > 0:
        raise ValueError(f"eta > 0 required, got {eta}")
    return sched.r_s * math.log1p(sched.g * eta)


def equivalent_channel(h_m: np.ndarray, h_e: np.ndarray | None) -> np.ndarray:
    """Channel seen through the eavesdropper null space, H_m @ A.

    With h_e absent (or zero eavesdropper rows) the basis degenerates to the
    identity and the equivalent channel is h_m itself.
    """
    h_m = np.asarray(h_m, dtype=complex)
    if h_e is None or np.asarray(h_e).shape[0] == 0:
        return h_m.copy()
    h_e = np.asarray(h_e, dtype=complex)
    if h_e.shape[1] != h_m.shape[1]:
        raise ValueError(f"column mismatch: h_m {h_m.shape} vs h_e {h_e.shape}")
    return h_m @ null_space_basis(h_e)


def write_manifest(path, cfg: WiretapConfig, gain: ArrayGainEstimate) -> None:
    lines = [
        f"n_t = {cfg.n_t}",
        f"n_m = {cfg.n_m}",
        f"n_e = {cfg.n_e}",
        f"g = {gain.value:.17g}",
        f"g_std_err = {gain.std_err:.17g}",
        f"g_trials = {gain.trials}",
        f"seed = {gain.seed}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_manifest(path) -> tuple[WiretapConfig, ArrayGainEstimate]:
    entries = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    cfg = make_config(int(entries["n_t"]), int(entries["n_m"]), int(entries["n_e"]))
    gain = ArrayGainEstimate(
        value=float(entries["g"]),
        std_err=float(entries["g_std_err"]),
        trials=int(entries["g_trials"]),
        seed=int(entries["seed"]),
    )
    return cfg, gain
