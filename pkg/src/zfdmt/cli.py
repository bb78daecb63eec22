"""Command-line front end: curve generation over (r_s, SNR) grids.

Subcommands map to curve families: `gain` estimates the array gain,
`outage-curve` compares Monte Carlo against the analytic bounds and the normal
approximation, `dmt-curve` does the same for the diversity estimates,
`asymptote` prints the infinite-SNR reference curves, and `check` runs the
acceptance battery. Every data-emitting run writes a manifest, a CSV, a
gnuplot script and a rendered PNG into the output directory; CSV bytes are
reproducible for identical run specifications.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import acceptance
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
from .channel import RateSchedule, estimate_array_gain, make_config, write_manifest
from .diversity import (
    asymptotic_dmt,
    diversity_lower_estimate,
    diversity_upper_estimate,
    high_snr_upper_dmt,
    max_diversity_estimates,
)
from .errors import (
    InfeasibleConfigError,
    InsufficientFailuresError,
    OptimizerError,
    QuadratureError,
)
from .gaussian_approx import diversity_gaussian_estimate, outage_gaussian_approx
from .monte_carlo import empirical_diversity, simulate_outage
from .report import CurvePoint, render_figure, write_csv, write_plot_script

#: Reference trial count for the per-run array-gain estimate.
GAIN_TRIALS = 1_000_000

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4


def _parse_config(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("config must be three comma-separated counts: Nt,Nm,Ne")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_grid(text: str) -> list[float]:
    """A float list: either 'a,b,c' or an inclusive range 'start:step:stop'."""
    try:
        if ":" in text:
            start, step, stop = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            values = []
            x = start
            while x <= stop + 1e-9 * max(1.0, abs(stop)):
                values.append(round(x, 12))
                x += step
            return values
        return [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _allocations(cfg, sched, eta: float, mode: str):
    """(upper, lower) allocations for the requested mode."""
    r_s = sched.r_s
    if mode == "optimized":
        return (
            optimize_upper_bound(cfg, sched, eta).allocation,
            optimize_lower_bound(cfg, sched, eta).allocation,
        )
    if mode == "equal":
        return (
            equal_split_allocation(cfg, r_s, "upper"),
            equal_split_allocation(cfg, r_s, "lower"),
        )
    if mode == "asymptotic":
        values = high_snr_allocation(cfg, r_s).values
        return Allocation(values, "upper"), Allocation(values, "lower")
    raise ValueError(f"unknown allocation mode {mode!r}")


def _prepare_run(args):
    """Shared setup: config, gain estimate, manifest header, output directory."""
    cfg = make_config(*args.config)
    if not cfg.zf_feasible:
        raise InfeasibleConfigError(
            f"n_e={cfg.n_e} >= n_t={cfg.n_t}: no null space to transmit in"
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    gain = estimate_array_gain(cfg, args.gain_trials, args.seed, args.workers)
    write_manifest(out / "manifest.txt", cfg, gain)
    header = {
        "n_t": cfg.n_t,
        "n_m": cfg.n_m,
        "n_e": cfg.n_e,
        "g": format(gain.value, ".17g"),
        "g_std_err": format(gain.std_err, ".17g"),
        "g_trials": gain.trials,
        "seed": args.seed,
    }
    return cfg, gain, header, out


def _emit(out: Path, stem: str, points, header, kind: str, no_figure: bool) -> None:
    csv_path = out / f"{stem}.csv"
    write_csv(csv_path, points, header)
    write_plot_script(out / f"{stem}.gp", csv_path.name, kind)
    if not no_figure:
        render_figure(out / f"{stem}.png", points, kind)
    print(f"wrote {csv_path}", file=sys.stderr)


def cmd_gain(args) -> int:
    cfg = make_config(*args.config)
    gain = estimate_array_gain(cfg, args.trials, args.seed, args.workers)
    print(f"g = {gain.value:.17g}")
    print(f"std_err = {gain.std_err:.17g}")
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_manifest(out / "manifest.txt", cfg, gain)
        print(f"wrote {out / 'manifest.txt'}", file=sys.stderr)
    return EXIT_OK


def cmd_outage_curve(args) -> int:
    cfg, gain, header, out = _prepare_run(args)
    header.update(alloc=args.alloc, trials=args.trials, moments=args.moments)
    method = "quadrature" if args.moments == "quadrature" else "monte-carlo"
    points = []
    for eta_db in args.snr_db:
        eta = _db_to_linear(eta_db)
        for r_s in args.rs:
            sched = RateSchedule(r_s=r_s, g=gain.value)
            est = simulate_outage(cfg, sched, eta, args.trials, args.seed, args.workers)
            points.append(CurvePoint(eta_db, r_s, "mc", est.probability, est.std_err))
            if r_s == 0.0:
                zero = equal_split_allocation(cfg, 0.0, "upper")
                points.append(
                    CurvePoint(eta_db, r_s, "upper",
                               outage_upper_bound(cfg, sched, eta, zero).probability)
                )
                points.append(CurvePoint(eta_db, r_s, "lower", 0.0))
                points.append(CurvePoint(eta_db, r_s, "naive", 0.0))
                continue
            alloc_u, alloc_l = _allocations(cfg, sched, eta, args.alloc)
            points.append(
                CurvePoint(eta_db, r_s, "upper",
                           outage_upper_bound(cfg, sched, eta, alloc_u).probability)
            )
            points.append(
                CurvePoint(eta_db, r_s, "lower",
                           outage_lower_bound(cfg, sched, eta, alloc_l).probability)
            )
            points.append(CurvePoint(eta_db, r_s, "naive", naive_upper_bound(cfg, sched, eta)))
            points.append(
                CurvePoint(eta_db, r_s, "gauss",
                           outage_gaussian_approx(cfg, sched, eta, method=method))
            )
    _emit(out, "outage_curve", points, header, "outage", args.no_figure)
    return EXIT_OK


def cmd_dmt_curve(args) -> int:
    cfg, gain, header, out = _prepare_run(args)
    header.update(alloc=args.alloc, trials=args.trials)
    points = []
    for eta_db in args.snr_db:
        eta = _db_to_linear(eta_db)
        for r_s in args.rs:
            points.append(CurvePoint(eta_db, r_s, "d_asymptotic", asymptotic_dmt(cfg, r_s)))
            points.append(
                CurvePoint(eta_db, r_s, "d_highsnr_upper", high_snr_upper_dmt(cfg, r_s))
            )
            if r_s == 0.0:
                continue
            sched = RateSchedule(r_s=r_s, g=gain.value)
            alloc_u, alloc_l = _allocations(cfg, sched, eta, args.alloc)
            points.append(
                CurvePoint(eta_db, r_s, "d_upper",
                           diversity_upper_estimate(cfg, sched, eta, alloc_u).value)
            )
            points.append(
                CurvePoint(eta_db, r_s, "d_lower",
                           diversity_lower_estimate(cfg, sched, eta, alloc_l).value)
            )
            points.append(
                CurvePoint(eta_db, r_s, "d_gauss",
                           diversity_gaussian_estimate(cfg, sched, eta).value)
            )
            if args.trials > 0:
                try:
                    emp = empirical_diversity(
                        cfg, sched, eta, args.trials, args.seed, workers=args.workers
                    )
                    points.append(
                        CurvePoint(eta_db, r_s, "d_empirical", emp.value, emp.std_err)
                    )
                except InsufficientFailuresError as exc:
                    print(
                        f"d_empirical skipped at r_s={r_s:g}, {eta_db:g} dB: {exc}",
                        file=sys.stderr,
                    )
    _emit(out, "dmt_curve", points, header, "dmt", args.no_figure)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    cfg = make_config(*args.config)
    if not cfg.zf_feasible:
        raise InfeasibleConfigError(
            f"n_e={cfg.n_e} >= n_t={cfg.n_t}: no null space to transmit in"
        )
    points = []
    print("r_s,d_asymptotic,d_highsnr_upper")
    for r_s in args.rs:
        dmt = asymptotic_dmt(cfg, r_s)
        hs = high_snr_upper_dmt(cfg, r_s)
        print(f"{r_s:g},{dmt:.12g},{hs:.12g}")
        points.append(CurvePoint(math.inf, r_s, "d_asymptotic", dmt))
        points.append(CurvePoint(math.inf, r_s, "d_highsnr_upper", hs))
    if args.snr_db:
        gain = estimate_array_gain(cfg, args.trials, args.seed, args.workers)
        print(f"# g = {gain.value:.17g} (std_err {gain.std_err:.3g}, {gain.trials} trials)")
        print("eta_db,max_d_upper,max_d_lower")
        for eta_db in args.snr_db:
            sched = RateSchedule(r_s=min(1.0, cfg.m), g=gain.value)
            umax, lmax = max_diversity_estimates(cfg, sched, _db_to_linear(eta_db))
            print(f"{eta_db:g},{umax:.12g},{lmax:.12g}")
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        header = {"n_t": cfg.n_t, "n_m": cfg.n_m, "n_e": cfg.n_e}
        _emit(out, "asymptote", points, header, "dmt", args.no_figure)
    return EXIT_OK


def cmd_check(args) -> int:
    results = acceptance.run_all(workers=args.workers)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "acceptance_report.txt").write_text(
            "\n".join(r.line() for r in results) + "\n"
        )
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED_CHECK


def _add_common(p, trials_default: int):
    p.add_argument("--config", type=_parse_config, required=True, metavar="Nt,Nm,Ne")
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zfdmt",
        description="Finite-SNR secrecy diversity-multiplexing curves of the "
        "zero-forcing wiretap transmit scheme",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gain", help="estimate the array gain g for a configuration")
    _add_common(p, 1_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_gain)

    p = sub.add_parser("outage-curve", help="outage probability vs SNR: MC, bounds, approximation")
    _add_common(p, 1_000_000)
    p.add_argument("--rs", type=_parse_grid, required=True)
    p.add_argument("--snr-db", type=_parse_grid, required=True)
    p.add_argument("--alloc", choices=("optimized", "equal", "asymptotic"), default="optimized")
    p.add_argument("--moments", choices=("quadrature", "mc"), default="quadrature")
    p.add_argument("--out", default=".")
    p.add_argument("--gain-trials", type=int, default=GAIN_TRIALS)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=cmd_outage_curve)

    p = sub.add_parser("dmt-curve", help="diversity estimates vs multiplexing gain")
    _add_common(p, 100_000)
    p.add_argument("--rs", type=_parse_grid, required=True)
    p.add_argument("--snr-db", type=_parse_grid, required=True)
    p.add_argument("--alloc", choices=("optimized", "equal", "asymptotic"), default="optimized")
    p.add_argument("--out", default=".")
    p.add_argument("--gain-trials", type=int, default=GAIN_TRIALS)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=cmd_dmt_curve)

    p = sub.add_parser("asymptote", help="infinite-SNR reference tables")
    _add_common(p, 1_000_000)
    p.add_argument("--rs", type=_parse_grid, default=None)
    p.add_argument("--snr-db", type=_parse_grid, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=cmd_asymptote)

    p = sub.add_parser("check", help="run the acceptance battery (full pinned scale)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rs", None) is None and args.command == "asymptote":
        m = max(args.config[0] - args.config[2], 0)
        args.rs = [round(0.05 * i, 10) for i in range(20 * min(m, args.config[1]) + 1)]
    try:
        return args.fn(args)
    except InfeasibleConfigError as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OptimizerError as exc:
        print(f"bounds: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except QuadratureError as exc:
        print(f"gaussian-approx: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
