"""Acceptance battery: the pinned exit criteria of this toolkit, one check each.

Each criterion function returns a CriterionResult; run_all prints one pass/fail
line per criterion. The battery runs at full pinned scale (million-trial Monte
Carlo where stated), so a complete run takes a few minutes. The same functions
back the `zfdmt check` subcommand and the pytest acceptance module.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .bounds import (
    Allocation,
    equal_split_allocation,
    high_snr_allocation,
    naive_upper_bound,
    optimize_lower_bound,
    optimize_upper_bound,
    outage_lower_bound,
    outage_upper_bound,
)
from .channel import ArrayGainEstimate, RateSchedule, estimate_array_gain, make_config
from .diversity import (
    asymptotic_dmt,
    diversity_lower_estimate,
    diversity_upper_estimate,
    high_snr_upper_dmt,
    max_diversity_estimates,
)
from .gaussian_approx import (
    diversity_gaussian_estimate,
    mutual_info_moments,
    outage_gaussian_approx,
)
from .monte_carlo import empirical_diversity, simulate_outage
from .special_functions import (
    exp_integral_en,
    gauss_q,
    laguerre,
    reg_lower_inc_gamma,
    upper_inc_gamma_int,
)

GAIN_TRIALS = 1_000_000
GAIN_SEED = 1879
MC_TRIALS = 1_000_000

_SANDWICH_CFGS = ((3, 2, 1), (4, 2, 1))
_SANDWICH_RS = (0.5, 1.0)
_SANDWICH_DB = (0, 5, 10, 15, 20, 25, 30)


@dataclass
class CriterionResult:
    index: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.index} [{self.title}]: {verdict} - {self.detail}"


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _point_seed(triple, r_s: float, eta_db: float) -> int:
    n_t, n_m, n_e = triple
    mix = (
        7919 * n_t
        + 104729 * n_m
        + 1299709 * n_e
        + round(1e4 * r_s) * 15485863
        + round(10.0 * (eta_db + 100.0)) * 32452843
    )
    return mix % (1 << 62)


class AcceptanceContext:
    """Caches gain estimates and Monte Carlo outage runs shared across criteria."""

    def __init__(self, workers: int = 1):
        self.workers = workers
        self._gain: dict[tuple, ArrayGainEstimate] = {}
        self._outage: dict[tuple, object] = {}

    def gain(self, triple) -> ArrayGainEstimate:
        if triple not in self._gain:
            cfg = make_config(*triple)
            seed = GAIN_SEED + 7 * triple[0] + 13 * triple[1] + 17 * triple[2]
            self._gain[triple] = estimate_array_gain(cfg, GAIN_TRIALS, seed, self.workers)
        return self._gain[triple]

    def sched(self, triple, r_s: float) -> RateSchedule:
        return RateSchedule(r_s=r_s, g=self.gain(triple).value)

    def outage(self, triple, r_s: float, eta_db: float):
        key = (triple, r_s, eta_db)
        if key not in self._outage:
            cfg = make_config(*triple)
            self._outage[key] = simulate_outage(
                cfg,
                self.sched(triple, r_s),
                _db_to_linear(eta_db),
                MC_TRIALS,
                _point_seed(triple, r_s, eta_db),
                self.workers,
            )
        return self._outage[key]


def _richardson_log_slope(fn, eta: float, h: float) -> float:
    def diff(hh: float) -> float:
        return (fn(eta * math.exp(hh)) - fn(eta * math.exp(-hh))) / (2.0 * hh)

    return (4.0 * diff(h / 2.0) - diff(h)) / 3.0


def criterion_1(ctx: AcceptanceContext) -> CriterionResult:
    """Monte Carlo sits between the optimized bounds on the full outage grid."""
    failures = []
    total = 0
    for triple in _SANDWICH_CFGS:
        cfg = make_config(*triple)
        for r_s in _SANDWICH_RS:
            sched = ctx.sched(triple, r_s)
            for eta_db in _SANDWICH_DB:
                total += 1
                eta = _db_to_linear(eta_db)
                est = ctx.outage(triple, r_s, eta_db)
                lo = optimize_lower_bound(cfg, sched, eta).probability
                hi = optimize_upper_bound(cfg, sched, eta).probability
                band = (lo - 3 * est.std_err, hi + 3 * est.std_err)
                if not band[0] <= est.probability <= band[1]:
                    failures.append((triple, r_s, eta_db, est, lo, hi))
    detail = f"{total - len(failures)}/{total} grid points inside [lower-3se, upper+3se]"
    for triple, r_s, eta_db, est, lo, hi in failures:
        detail += (
            f"; {triple} r_s={r_s:g} {eta_db:g} dB: p_hat={est.probability:g}"
            f" ({est.failures} failures) vs band [{lo:.3g}, {hi:.3g}]"
        )
        if est.failures == 0 and lo * est.trials < 1.0:
            detail += (
                " - zero observed failures where the lower bound itself predicts"
                f" {lo * est.trials:.2g} expected failures: the plug-in standard"
                " error degenerates at p_hat=0, so the pinned band cannot contain"
                " any possible outcome at this trial count"
            )
    return CriterionResult(1, "monte-carlo sandwiched by optimized bounds", not failures, detail)


def criterion_2(ctx: AcceptanceContext) -> CriterionResult:
    """Upper and lower bounds coincide when the equivalent channel is single-stream."""
    cfg = make_config(2, 1, 1)
    g = ctx.gain((2, 1, 1)).value
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(20):
        r_s = float(rng.uniform(0.02, 1.0))
        eta = float(10.0 ** rng.uniform(-0.5, 3.5))
        sched = RateSchedule(r_s=r_s, g=g)
        hi = outage_upper_bound(cfg, sched, eta, Allocation((r_s,), "upper")).probability
        lo = outage_lower_bound(cfg, sched, eta, Allocation((r_s,), "lower")).probability
        worst = max(worst, abs(hi - lo) / max(lo, 1e-300))
    return CriterionResult(
        2, "single-stream bound coincidence", worst <= 1e-12, f"worst relative gap {worst:.2e}"
    )


def criterion_3(ctx: AcceptanceContext) -> CriterionResult:
    """Analytic diversity estimates equal the numeric log-SNR slopes of their bounds."""
    worst = {"upper": 0.0, "lower": 0.0, "gauss": 0.0}
    for triple in _SANDWICH_CFGS:
        cfg = make_config(*triple)
        g = ctx.gain(triple).value
        for r_s in (0.3, 0.7, 1.0, 1.5):
            sched = RateSchedule(r_s=r_s, g=g)
            for eta in (2.0, 10.0, 100.0):
                alloc_u = optimize_upper_bound(cfg, sched, eta).allocation
                alloc_l = optimize_lower_bound(cfg, sched, eta).allocation
                du = diversity_upper_estimate(cfg, sched, eta, alloc_u).value
                dl = diversity_lower_estimate(cfg, sched, eta, alloc_l).value
                fd_u = -_richardson_log_slope(
                    lambda e: math.log(outage_upper_bound(cfg, sched, e, alloc_u).probability),
                    eta,
                    1e-4,
                )
                fd_l = -_richardson_log_slope(
                    lambda e: math.log(outage_lower_bound(cfg, sched, e, alloc_l).probability),
                    eta,
                    1e-4,
                )
                worst["upper"] = max(worst["upper"], abs(du - fd_u) / abs(fd_u))
                worst["lower"] = max(worst["lower"], abs(dl - fd_l) / abs(fd_l))
                dg = diversity_gaussian_estimate(cfg, sched, eta).value
                fd_g = -_richardson_log_slope(
                    lambda e: math.log(outage_gaussian_approx(cfg, sched, e)), eta, 1e-4
                )
                worst["gauss"] = max(worst["gauss"], abs(dg - fd_g) / abs(fd_g))
    passed = worst["upper"] <= 1e-5 and worst["lower"] <= 1e-5 and worst["gauss"] <= 1e-4
    detail = (
        f"worst relative error: upper {worst['upper']:.2e} (tol 1e-5), "
        f"lower {worst['lower']:.2e} (tol 1e-5), gauss {worst['gauss']:.2e} (tol 1e-4)"
    )
    return CriterionResult(3, "estimators match finite-difference slopes", passed, detail)


def criterion_4(ctx: AcceptanceContext) -> CriterionResult:
    """At 60 dB the optimized-allocation estimates track their infinite-SNR curves."""
    triple = (4, 2, 1)
    cfg = make_config(*triple)
    g = ctx.gain(triple).value
    eta = _db_to_linear(60.0)
    worst_u = worst_l = 0.0
    for r_s in (0.25, 0.5, 0.75, 1.25, 1.5):
        sched = RateSchedule(r_s=r_s, g=g)
        alloc_u = optimize_upper_bound(cfg, sched, eta).allocation
        alloc_l = optimize_lower_bound(cfg, sched, eta).allocation
        du = diversity_upper_estimate(cfg, sched, eta, alloc_u).value
        dl = diversity_lower_estimate(cfg, sched, eta, alloc_l).value
        worst_u = max(worst_u, abs(du - high_snr_upper_dmt(cfg, r_s)))
        worst_l = max(worst_l, abs(dl - asymptotic_dmt(cfg, r_s)))
    passed = worst_u <= 0.15 and worst_l <= 0.15
    detail = f"max |dU - limit| = {worst_u:.3f}, max |dL - dmt| = {worst_l:.3f} (tol 0.15)"
    return CriterionResult(4, "high-SNR limits of the diversity estimates", passed, detail)


def criterion_5(ctx: AcceptanceContext) -> CriterionResult:
    """Small-rate maxima at 10 dB (1%), plus the 80 dB approach to the (5, 6) anchors (2%)."""
    eta = _db_to_linear(10.0)
    worst_rel = 0.0
    for triple in _SANDWICH_CFGS:
        cfg = make_config(*triple)
        sched = RateSchedule(r_s=1e-3, g=ctx.gain(triple).value)
        alloc_u = optimize_upper_bound(cfg, sched, eta).allocation
        alloc_l = optimize_lower_bound(cfg, sched, eta).allocation
        du = diversity_upper_estimate(cfg, sched, eta, alloc_u).value
        dl = diversity_lower_estimate(cfg, sched, eta, alloc_l).value
        umax, lmax = max_diversity_estimates(cfg, sched, eta)
        worst_rel = max(worst_rel, abs(du - umax) / umax, abs(dl - lmax) / lmax)
    part_a = worst_rel <= 0.01

    triple = (4, 2, 1)
    sched = RateSchedule(r_s=0.5, g=ctx.gain(triple).value)
    umax, lmax = max_diversity_estimates(make_config(*triple), sched, _db_to_linear(80.0))
    anchor_dev = max(abs(umax - 5.0) / 5.0, abs(lmax - 6.0) / 6.0)
    part_b = anchor_dev <= 0.02

    detail = (
        f"small-rate deviation {worst_rel:.4%} (tol 1%); "
        f"80 dB anchor deviation {anchor_dev:.2%} (tol 2%)"
    )
    if not part_b:
        detail += (
            "; the anchor approach is O(1/ln eta): at 80 dB the SNR factor is"
            f" 1 - 1/ln(1+g*eta) = {1.0 - anchor_dev:.4f}, so a 2% approach needs ~220 dB"
        )
    return CriterionResult(5, "small-rate diversity maxima and anchors", part_a and part_b, detail)


def criterion_6(ctx: AcceptanceContext) -> CriterionResult:
    """Normal approximation tracks Monte Carlo at low SNR; moment cross-check."""
    triple = (4, 2, 1)
    cfg = make_config(*triple)
    sched = ctx.sched(triple, 0.5)
    worst_gap = 0.0
    for eta_db in (0.0, 5.0, 10.0):
        approx = outage_gaussian_approx(cfg, sched, _db_to_linear(eta_db))
        est = ctx.outage(triple, 0.5, eta_db)
        worst_gap = max(worst_gap, abs(math.log10(approx) - math.log10(est.probability)))
    part_a = worst_gap <= 0.5

    worst_excess = 0.0
    for triple_m in _SANDWICH_CFGS:
        cfg_m = make_config(*triple_m)
        for eta in (1.0, 10.0, 100.0):
            quad_m = mutual_info_moments(cfg_m, eta, method="quadrature")
            mc_m = mutual_info_moments(
                cfg_m, eta, method="monte-carlo", trials=MC_TRIALS,
                seed=_point_seed(triple_m, 0.0, 10 * math.log10(eta)), workers=ctx.workers,
            )
            for a, b, se in (
                (quad_m.mean, mc_m.mean, mc_m.mean_std_err),
                (quad_m.variance, mc_m.variance, mc_m.var_std_err),
            ):
                tol = max(0.01 * abs(b), 3.0 * se)
                worst_excess = max(worst_excess, abs(a - b) / tol)
    part_b = worst_excess <= 1.0
    detail = (
        f"max |log10 approx - log10 MC| = {worst_gap:.3f} (tol 0.5); "
        f"moment deviation {worst_excess:.2f}x of max(1%, 3se) (tol 1x)"
    )
    return CriterionResult(6, "normal approximation at low SNR", part_a and part_b, detail)


def criterion_7(ctx: AcceptanceContext) -> CriterionResult:
    """Optimizer dominates equal split and naive bound; grid oracle; closed-form recovery."""
    dominance_bad = []
    for triple in _SANDWICH_CFGS:
        cfg = make_config(*triple)
        for r_s in _SANDWICH_RS:
            sched = ctx.sched(triple, r_s)
            for eta_db in _SANDWICH_DB:
                eta = _db_to_linear(eta_db)
                opt = optimize_upper_bound(cfg, sched, eta).probability
                eq = outage_upper_bound(
                    cfg, sched, eta, equal_split_allocation(cfg, r_s)
                ).probability
                naive = naive_upper_bound(cfg, sched, eta)
                if opt > eq * (1 + 1e-12) + 1e-15 or opt > naive * (1 + 1e-12) + 1e-15:
                    dominance_bad.append((triple, r_s, eta_db))
    part_a = not dominance_bad

    # spot points chosen so the oracle's own discretization bias at step 1e-3
    # stays well below the pinned 1e-6 comparison tolerance
    worst_gap = 0.0
    for triple, r_s, eta_db in (
        ((3, 2, 1), 0.5, 5.0),
        ((3, 2, 1), 1.0, 5.0),
        ((3, 2, 1), 1.5, 0.0),
        ((4, 2, 1), 0.5, 10.0),
        ((4, 2, 1), 1.0, 10.0),
        ((4, 2, 1), 1.5, 5.0),
    ):
        cfg = make_config(*triple)
        sched = ctx.sched(triple, r_s)
        eta = _db_to_linear(eta_db)
        grid_u = min(
            outage_upper_bound(cfg, sched, eta, Allocation((b1, r_s - b1), "upper")).probability
            for b1 in np.arange(r_s / 2.0, r_s + 1e-12, 1e-3)
        )
        grid_l = max(
            outage_lower_bound(cfg, sched, eta, Allocation((a1, r_s - a1), "lower")).probability
            for a1 in np.arange(r_s / 2.0, r_s + 1e-12, 1e-3)
        )
        worst_gap = max(
            worst_gap,
            abs(optimize_upper_bound(cfg, sched, eta).probability - grid_u),
            abs(optimize_lower_bound(cfg, sched, eta).probability - grid_l),
        )
    part_b = worst_gap <= 1e-6

    triple = (4, 2, 1)
    cfg = make_config(*triple)
    sched = ctx.sched(triple, 0.5)
    opt_alloc = optimize_upper_bound(cfg, sched, _db_to_linear(60.0)).allocation.values
    closed = high_snr_allocation(cfg, 0.5).values
    coord_dev = max(abs(a - b) / b for a, b in zip(opt_alloc, closed))
    part_c = coord_dev <= 0.05

    detail = (
        f"dominance violations {len(dominance_bad)}; grid-oracle gap {worst_gap:.2e} (tol 1e-6); "
        f"closed-form allocation deviation {coord_dev:.2%} (tol 5%)"
    )
    return CriterionResult(7, "allocation optimizer soundness", part_a and part_b and part_c, detail)


def criterion_8(ctx: AcceptanceContext) -> CriterionResult:
    """Array-gain oracle at (1,1,1) and bit-identical results across worker counts."""
    gain = ctx.gain((1, 1, 1))
    part_a = abs(gain.value - 0.5) <= 0.01

    cfg = make_config(4, 2, 1)
    sched = ctx.sched((4, 2, 1), 0.5)
    runs_outage = [
        simulate_outage(cfg, sched, 10.0, 200_000, seed=31, workers=w) for w in (1, 2, 3)
    ]
    runs_gain = [estimate_array_gain(cfg, 200_000, seed=32, workers=w) for w in (1, 2, 3)]
    runs_mom = [
        mutual_info_moments(cfg, 10.0, method="monte-carlo", trials=1_000_000, seed=33, workers=w)
        for w in (1, 3)
    ]
    runs_div = [
        empirical_diversity(cfg, sched, 10.0, 200_000, seed=34, workers=w) for w in (1, 3)
    ]
    part_b = (
        len({(r.probability, r.failures) for r in runs_outage}) == 1
        and len({(r.value, r.std_err) for r in runs_gain}) == 1
        and len({(r.mean, r.variance) for r in runs_mom}) == 1
        and len({(r.value, r.std_err) for r in runs_div}) == 1
    )
    detail = (
        f"gain(1,1,1) = {gain.value:.4f} +/- {gain.std_err:.4f} (target 0.5 +/- 0.01); "
        f"worker-count invariance {'bit-identical' if part_b else 'BROKEN'}"
    )
    return CriterionResult(8, "array-gain oracle and determinism", part_a and part_b, detail)


def criterion_9(ctx: AcceptanceContext) -> CriterionResult:
    """Special functions agree with adaptive quadrature of their defining integrals."""
    checks = []

    val, _ = quad(lambda t: t**2 * math.exp(-t) / 2.0, 0.0, 2.0, epsabs=1e-14, epsrel=1e-14)
    checks.append(("reg_lower_inc_gamma(2,3)", abs(reg_lower_inc_gamma(2.0, 3) - val), 1e-12))

    val, _ = quad(
        lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi), 1.6448536, 40.0,
        epsabs=1e-14, epsrel=1e-13,
    )
    checks.append(("gauss_q(1.6448536)", abs(gauss_q(1.6448536) - val), 1e-7))
    checks.append(("gauss_q vs 0.05", abs(gauss_q(1.6448536) - 0.05), 1e-7))

    val, _ = quad(lambda t: math.exp(-t) / t, 1.0, np.inf, epsabs=1e-14, epsrel=1e-13)
    checks.append(("exp_integral_en(1,1)", abs(exp_integral_en(1, 1.0) - val), 1e-10))

    val, _ = quad(lambda t: math.exp(-t) / t**2, 1.0, np.inf, epsabs=1e-14, epsrel=1e-13)
    checks.append(("upper_inc_gamma_int(-1,1)", abs(upper_inc_gamma_int(-1, 1.0) - val), 1e-10))

    series = sum(
        (-1.0) ** i * math.comb(3 + 1, 3 - i) * 2.5**i / math.factorial(i) for i in range(4)
    )
    checks.append(("laguerre(3,1,2.5)", abs(laguerre(3, 1, 2.5) - series), 1e-12))

    bad = [(name, err, tol) for name, err, tol in checks if err > tol]
    detail = "; ".join(f"{name}: err {err:.2e} (tol {tol:g})" for name, err, tol in checks)
    return CriterionResult(9, "special-function quadrature oracles", not bad, detail)


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def run_all(workers: int = 1, stream=None) -> list[CriterionResult]:
    stream = stream or sys.stdout
    ctx = AcceptanceContext(workers=workers)
    results = []
    for fn in ALL_CRITERIA:
        result = fn(ctx)
        results.append(result)
        print(result.line(), file=stream, flush=True)
    return results
