"""Analytic secrecy-outage bounds for the null-space transmit scheme.

Both bounds are products of regularized lower incomplete gamma factors
evaluated at a rate split across the m diagonal degrees of freedom of the
equivalent channel. The split (the allocation) is a free parameter: the upper
bound is minimized and the lower bound maximized over the ordered simplex
{v_1 >= ... >= v_m >= 0, sum v = r_s} by projected gradient with analytic
gradients, evaluated in log space so high-SNR runs do not underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import RateSchedule, WiretapConfig
from .errors import InfeasibleConfigError, OptimizerError
from .special_functions import (
    log_reg_lower_inc_gamma,
    reg_lower_inc_gamma_ratio,
)

_SUM_TOL = 1e-12
_ORDER_TOL = 1e-12
_STATIONARITY_TOL = 1e-8
_MAX_ITER = 10_000


@dataclass(frozen=True)
class Allocation:
    """Ordered nonnegative rate split; kind tags which bound it parametrizes."""

    values: tuple[float, ...]
    kind: str = "upper"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("allocation must have at least one entry")
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"kind must be 'upper' or 'lower', got {self.kind!r}")
        cleaned = []
        for v in vals:
            if v < -1e-15:
                raise ValueError(f"allocation entries must be nonnegative, got {v}")
            cleaned.append(max(v, 0.0))
        for a, b in zip(cleaned, cleaned[1:]):
            if b > a + _ORDER_TOL:
                raise ValueError(f"allocation must be nonincreasing, got {cleaned}")
        object.__setattr__(self, "values", tuple(cleaned))

    @property
    def total(self) -> float:
        return float(sum(self.values))


@dataclass(frozen=True)
class BoundValue:
    probability: float
    allocation: Allocation
    eta: float
    r_s: float


def equal_split_allocation(cfg: WiretapConfig, r_s: float, kind: str = "upper") -> Allocation:
    return Allocation(tuple([r_s / cfg.m] * cfg.m), kind=kind)


def high_snr_allocation(cfg: WiretapConfig, r_s: float) -> Allocation:
    """Closed-form allocation solving the high-SNR split problem by Lagrangian balance.

    For r_s below one the split is r_s - delta/(k-l+1) with
    delta = (m-1) r_s / sum_l 1/(k-l+1); from one upward it is
    1 - gamma/(k-l+1) with gamma = (m - r_s) / sum_l 1/(k-l+1).
    """
    _require_feasible(cfg)
    m, k = cfg.m, cfg.k
    if not 0 < r_s <= m:
        raise ValueError(f"r_s in (0, {m}] required, got {r_s}")
    harmonic = sum(1.0 / (k - l + 1) for l in range(1, m + 1))
    if r_s < 1.0:
        delta = (m - 1) * r_s / harmonic
        values = [r_s - delta / (k - l + 1) for l in range(1, m + 1)]
    else:
        gamma = (m - r_s) / harmonic
        values = [1.0 - gamma / (k - l + 1) for l in range(1, m + 1)]
    return Allocation(tuple(values), kind="upper")


def xi(x: float, eta: float, sched: RateSchedule, cfg: WiretapConfig) -> float:
    """Normalized chi-square threshold (n_t - n_e)/eta * ((1 + g eta)^x - 1)."""
    if x < 0:
        raise ValueError(f"x >= 0 required, got {x}")
    if not eta > 0:
        raise ValueError(f"eta > 0 required, got {eta}")
    return cfg.n_streams / eta * math.expm1(x * math.log1p(sched.g * eta))


def _require_feasible(cfg: WiretapConfig) -> None:
    if not cfg.zf_feasible:
        raise InfeasibleConfigError(
            f"null-space transmission infeasible: n_e={cfg.n_e} >= n_t={cfg.n_t}"
        )


def _check_alloc(alloc: Allocation, r_s: float, m: int, kind: str) -> None:
    if alloc.kind != kind:
        raise ValueError(f"allocation kind {alloc.kind!r}, expected {kind!r}")
    if len(alloc.values) != m:
        raise ValueError(f"allocation length {len(alloc.values)}, expected {m}")
    if abs(alloc.total - r_s) > _SUM_TOL * max(1.0, abs(r_s)):
        raise ValueError(f"allocation sums to {alloc.total}, expected {r_s}")


def _upper_dofs(cfg: WiretapConfig) -> list[int]:
    return [cfg.k - l + 1 for l in range(1, cfg.m + 1)]


def _lower_dofs(cfg: WiretapConfig) -> list[int]:
    return [cfg.k + cfg.m - 2 * l + 1 for l in range(1, cfg.m + 1)]


def outage_upper_bound(
    cfg: WiretapConfig, sched: RateSchedule, eta: float, alloc: Allocation
) -> BoundValue:
    """Upper bound on the secrecy outage probability at the given rate split.

    Product of the per-stream chi-square outage masses at the full rate, times
    one minus the product of the complementary split-rate mass ratios. Zero
    rate can never be in outage, so the bound is defined as 0 at r_s = 0.
    """
    _require_feasible(cfg)
    r_s = sched.r_s
    _check_alloc(alloc, r_s, cfg.m, "upper")
    if r_s == 0.0:
        return BoundValue(0.0, alloc, eta, r_s)
    dofs = _upper_dofs(cfg)
    x_full = xi(r_s, eta, sched, cfg)
    log_alpha = [log_reg_lower_inc_gamma(x_full, a) for a in dofs]
    log_beta = [
        log_reg_lower_inc_gamma(xi(b, eta, sched, cfg), a) for b, a in zip(alloc.values, dofs)
    ]
    log_ratio = [min(lb - la, 0.0) for lb, la in zip(log_beta, log_alpha)]
    eps = [math.exp(lr) for lr in log_ratio]
    if any(e >= 1.0 for e in eps):
        factor = 1.0
    else:
        factor = -math.expm1(sum(math.log1p(-e) for e in eps))
    prob = math.exp(sum(log_alpha)) * factor
    return BoundValue(min(max(prob, 0.0), 1.0), alloc, eta, r_s)


def outage_lower_bound(
    cfg: WiretapConfig, sched: RateSchedule, eta: float, alloc: Allocation
) -> BoundValue:
    """Lower bound on the secrecy outage probability at the given rate split."""
    _require_feasible(cfg)
    r_s = sched.r_s
    _check_alloc(alloc, r_s, cfg.m, "lower")
    if r_s == 0.0:
        return BoundValue(0.0, alloc, eta, r_s)
    log_terms = []
    for a_val, dof in zip(alloc.values, _lower_dofs(cfg)):
        if a_val == 0.0:
            return BoundValue(0.0, alloc, eta, r_s)
        log_terms.append(log_reg_lower_inc_gamma(xi(a_val, eta, sched, cfg), dof))
    prob = math.exp(sum(log_terms))
    return BoundValue(min(max(prob, 0.0), 1.0), alloc, eta, r_s)


def naive_upper_bound(cfg: WiretapConfig, sched: RateSchedule, eta: float) -> float:
    """Loose allocation-free upper bound: the product of full-rate gamma masses."""
    _require_feasible(cfg)
    if sched.r_s == 0.0:
        return 0.0
    x_full = xi(sched.r_s, eta, sched, cfg)
    return math.exp(sum(log_reg_lower_inc_gamma(x_full, a) for a in _upper_dofs(cfg)))


# ---------------------------------------------------------------------------
# allocation optimization over the ordered simplex
# ---------------------------------------------------------------------------
#
# Change of variables: with u_l = b_l - b_{l+1} >= 0 (u_m = b_m) the ordered
# simplex becomes the weighted simplex {u >= 0, sum_l l*u_l = r_s}, whose
# Euclidean projection has a closed form. b = U u with U upper triangular of
# ones; gradients map by cumulative sums.


def _to_b(u: np.ndarray) -> np.ndarray:
    return np.cumsum(u[::-1])[::-1]


def _to_u(b: np.ndarray) -> np.ndarray:
    u = np.empty_like(b)
    u[:-1] = b[:-1] - b[1:]
    u[-1] = b[-1]
    return u


def _project_weighted_simplex(y: np.ndarray, w: np.ndarray, total: float) -> np.ndarray:
    ratios = y / w
    order = np.argsort(ratios)[::-1]
    wy = (w * y)[order]
    ww = (w * w)[order]
    cum_wy = np.cumsum(wy)
    cum_ww = np.cumsum(ww)
    lam = (cum_wy - total) / cum_ww
    n = len(y)
    pick = lam[-1]
    for p in range(1, n + 1):
        hi = ratios[order[p - 1]]
        lo = ratios[order[p]] if p < n else -math.inf
        if lo - 1e-14 <= lam[p - 1] <= hi + 1e-14:
            pick = lam[p - 1]
            break
    u = np.maximum(0.0, y - pick * w)
    s = float(np.dot(w, u))
    if s > 0.0:
        u *= total / s
    return u


def _xi_prime_factor(b: float, eta: float, sched: RateSchedule, cfg: WiretapConfig) -> float:
    # d xi / d b = L * (xi(b) + c/eta) with L = log(1 + g eta)
    ell = math.log1p(sched.g * eta)
    return ell * (xi(b, eta, sched, cfg) + cfg.n_streams / eta)


class _UpperObjective:
    """J(b) = -sum log(1 - beta_l/alpha_l); minimizing J minimizes the upper bound."""

    def __init__(self, cfg, sched, eta):
        self.cfg, self.sched, self.eta = cfg, sched, eta
        self.dofs = _upper_dofs(cfg)
        x_full = xi(sched.r_s, eta, sched, cfg)
        self.log_alpha = [log_reg_lower_inc_gamma(x_full, a) for a in self.dofs]

    def value(self, b: np.ndarray) -> float:
        total = 0.0
        for bl, dof, la in zip(b, self.dofs, self.log_alpha):
            lr = log_reg_lower_inc_gamma(xi(bl, self.eta, self.sched, self.cfg), dof) - la
            if lr >= 0.0:
                return math.inf
            total -= math.log1p(-math.exp(lr))
        return total

    def gradient(self, b: np.ndarray) -> np.ndarray:
        g = np.zeros_like(b)
        for i, (bl, dof, la) in enumerate(zip(b, self.dofs, self.log_alpha)):
            x = xi(bl, self.eta, self.sched, self.cfg)
            if x == 0.0:
                log_pdf = 0.0 if dof == 1 else -math.inf
                eps = 0.0
            else:
                log_pdf = (dof - 1) * math.log(x) - x - math.lgamma(dof)
                eps = math.exp(min(log_reg_lower_inc_gamma(x, dof) - la, 0.0))
            d_eps = math.exp(log_pdf - la) * _xi_prime_factor(bl, self.eta, self.sched, self.cfg)
            g[i] = d_eps / max(1.0 - eps, 1e-300)
        return g


class _LowerObjective:
    """J(a) = -sum log Gamma_inc(xi(a_l), dof_l); minimizing J maximizes the lower bound."""

    def __init__(self, cfg, sched, eta):
        self.cfg, self.sched, self.eta = cfg, sched, eta
        self.dofs = _lower_dofs(cfg)

    def value(self, a: np.ndarray) -> float:
        total = 0.0
        for al, dof in zip(a, self.dofs):
            if al <= 0.0:
                return math.inf
            total -= log_reg_lower_inc_gamma(xi(al, self.eta, self.sched, self.cfg), dof)
        return total

    def gradient(self, a: np.ndarray) -> np.ndarray:
        g = np.zeros_like(a)
        for i, (al, dof) in enumerate(zip(a, self.dofs)):
            x = xi(al, self.eta, self.sched, self.cfg)
            g[i] = -reg_lower_inc_gamma_ratio(x, dof) * _xi_prime_factor(
                al, self.eta, self.sched, self.cfg
            )
        return g


def _kkt_residual(u: np.ndarray, g: np.ndarray, weights: np.ndarray, total: float) -> float:
    """Projected-gradient stationarity residual, normalized by the gradient scale."""
    probe = _project_weighted_simplex(u - g, weights, total)
    return float(np.linalg.norm(probe - u)) / max(1.0, float(np.linalg.norm(g)))


def _projected_gradient(objective, u0: np.ndarray, weights: np.ndarray, total: float):
    """Spectral projected gradient descent; returns (u, J(u), KKT residual).

    Barzilai-Borwein steps with a nonmonotone Armijo safeguard (Birgin-Martinez
    style); the nonmonotone reference absorbs the float-level noise of the
    objective near the optimum so the analytic gradients can keep driving the
    residual down.
    """

    def val(u):
        return objective.value(_to_b(u))

    def grad(u):
        return np.cumsum(objective.gradient(_to_b(u)))

    u = _project_weighted_simplex(u0, weights, total)
    j = val(u)
    g = grad(u)
    step = 1.0
    history = [j]
    for _ in range(_MAX_ITER):
        resid = _kkt_residual(u, g, weights, total)
        if resid <= _STATIONARITY_TOL:
            return u, j, resid
        t = min(max(step, 1e-12), 1e10)
        moved = False
        j_ref = max(history)
        while t > 1e-18:
            cand = _project_weighted_simplex(u - t * g, weights, total)
            d = cand - u
            jc = val(cand)
            if jc <= j_ref + 1e-4 * float(np.dot(g, d)) + 1e-14 * max(1.0, abs(j_ref)):
                moved = True
                break
            t *= 0.5
        if not moved:
            break
        g_new = grad(cand)
        du = cand - u
        dg = g_new - g
        curv = float(np.dot(du, dg))
        step = float(np.dot(du, du)) / curv if curv > 1e-300 else step * 2.0
        u, j, g = cand, jc, g_new
        history.append(j)
        history = history[-10:]
    return u, j, _kkt_residual(u, g, weights, total)


def _optimize(cfg, sched, eta, objective, kind: str) -> Allocation:
    m = cfg.m
    r_s = sched.r_s
    if not 0 < r_s <= m:
        raise ValueError(f"r_s in (0, {m}] required, got {r_s}")
    if m == 1:
        return Allocation((r_s,), kind=kind)
    weights = np.arange(1, m + 1, dtype=float)
    starts = [np.asarray(equal_split_allocation(cfg, r_s).values)]
    try:
        starts.append(np.asarray(high_snr_allocation(cfg, r_s).values))
    except ValueError:
        pass  # closed form can leave the nonnegative orthant for m = k >= 3
    dofs = np.asarray(_lower_dofs(cfg) if kind == "lower" else _upper_dofs(cfg), dtype=float)
    starts.append(np.sort(dofs / dofs.sum() * r_s)[::-1])
    best = None
    for b0 in starts:
        u, j, resid = _projected_gradient(objective, _to_u(b0), weights, r_s)
        if best is None or j < best[1]:
            best = (u, j, resid)
    u, j, resid = best
    if resid > _STATIONARITY_TOL:
        raise OptimizerError(
            f"allocation optimizer stalled: residual {resid:.3e} > {_STATIONARITY_TOL}"
        )
    return Allocation(tuple(_to_b(u)), kind=kind)


def optimize_upper_bound(cfg: WiretapConfig, sched: RateSchedule, eta: float) -> BoundValue:
    """Minimize the upper bound over ordered rate splits."""
    _require_feasible(cfg)
    alloc = _optimize(cfg, sched, eta, _UpperObjective(cfg, sched, eta), "upper")
    return outage_upper_bound(cfg, sched, eta, alloc)


def optimize_lower_bound(cfg: WiretapConfig, sched: RateSchedule, eta: float) -> BoundValue:
    """Maximize the lower bound over ordered rate splits."""
    _require_feasible(cfg)
    alloc = _optimize(cfg, sched, eta, _LowerObjective(cfg, sched, eta), "lower")
    return outage_lower_bound(cfg, sched, eta, alloc)
