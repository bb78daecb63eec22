"""Report emission: delimited curve data, companion plot scripts, rendered figures.

Every curve family goes to one CSV (schema: eta_db, r_s, series, value,
std_err) whose header comments carry the run manifest, plus a gnuplot script
for re-rendering and a matplotlib PNG rendered alongside. CSV bytes are fully
determined by the run specification: fixed float formatting, no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

#: Legal series tags, one per curve family member.
SERIES_TAGS = (
    "mc",
    "upper",
    "lower",
    "naive",
    "gauss",
    "d_upper",
    "d_lower",
    "d_gauss",
    "d_empirical",
    "d_asymptotic",
    "d_highsnr_upper",
)

_STYLES = {
    "mc": dict(color="k", marker="o", linestyle="-"),
    "upper": dict(color="tab:red", linestyle="--"),
    "lower": dict(color="tab:blue", linestyle="-."),
    "naive": dict(color="tab:gray", linestyle=":"),
    "gauss": dict(color="tab:green", linestyle="-"),
    "d_upper": dict(color="tab:red", linestyle="--"),
    "d_lower": dict(color="tab:blue", linestyle="-."),
    "d_gauss": dict(color="tab:green", linestyle="-"),
    "d_empirical": dict(color="k", marker="o", linestyle="none"),
    "d_asymptotic": dict(color="tab:purple", linestyle="-"),
    "d_highsnr_upper": dict(color="tab:orange", linestyle=":"),
}


@dataclass(frozen=True)
class CurvePoint:
    eta_db: float
    r_s: float
    series: str
    value: float
    std_err: float | None = None

    def __post_init__(self):
        if self.series not in SERIES_TAGS:
            raise ValueError(f"unknown series tag {self.series!r}")


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(path, points: list[CurvePoint], header: dict) -> None:
    lines = [f"# {key} = {value}" for key, value in header.items()]
    lines.append("eta_db,r_s,series,value,std_err")
    for p in points:
        err = "" if p.std_err is None else _fmt(p.std_err)
        lines.append(f"{_fmt(p.eta_db)},{_fmt(p.r_s)},{p.series},{_fmt(p.value)},{err}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> list[CurvePoint]:
    points = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#") or line.startswith("eta_db"):
            continue
        eta_db, r_s, series, value, err = line.split(",")
        points.append(
            CurvePoint(
                eta_db=float(eta_db),
                r_s=float(r_s),
                series=series,
                value=float(value),
                std_err=float(err) if err else None,
            )
        )
    return points


def write_plot_script(path, csv_name: str, kind: str) -> None:
    """Companion gnuplot script selecting each series out of the long-format CSV."""
    logscale = "set logscale y" if kind == "outage" else "unset logscale y"
    xcol, xlabel = ("1", "SNR (dB)") if kind == "outage" else ("2", "multiplexing gain r_s")
    ylabel = "secrecy outage probability" if kind == "outage" else "diversity gain"
    series = [t for t in SERIES_TAGS if (t.startswith("d_") ^ (kind == "outage"))]
    plots = ",\\\n  ".join(
        f"'{csv_name}' using (strcol(3) eq '{tag}' ? ${xcol} : NaN):4 "
        f"with linespoints title '{tag}'"
        for tag in series
    )
    text = "\n".join(
        [
            "set datafile separator comma",
            "set datafile commentschars '#'",
            logscale,
            f"set xlabel '{xlabel}'",
            f"set ylabel '{ylabel}'",
            "set key outside",
            f"plot {plots}",
            "",
        ]
    )
    Path(path).write_text(text)


def render_figure(path, points: list[CurvePoint], kind: str, title: str = "") -> None:
    """Render the curve family with matplotlib; one line per (series, group key)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    if kind == "outage":
        group_of = lambda p: p.r_s
        x_of = lambda p: p.eta_db
        ax.set_xlabel("SNR (dB)")
        ax.set_ylabel("secrecy outage probability")
        ax.set_yscale("log")
    else:
        group_of = lambda p: p.eta_db
        x_of = lambda p: p.r_s
        ax.set_xlabel("multiplexing gain $r_s$")
        ax.set_ylabel("diversity gain")
    keys = sorted({(p.series, group_of(p)) for p in points}, key=lambda k: (k[0], k[1]))
    markers = ["o", "s", "^", "v", "D", "x"]
    groups = sorted({group_of(p) for p in points})
    for series, group in keys:
        sel = [p for p in points if p.series == series and group_of(p) == group]
        if kind == "outage":
            sel = [p for p in sel if p.value > 0.0]
        sel.sort(key=x_of)
        if not sel:
            continue
        xs = [x_of(p) for p in sel]
        ys = [p.value for p in sel]
        style = dict(_STYLES.get(series, {}))
        if len(groups) > 1 and style.get("linestyle") != "none":
            style["marker"] = markers[groups.index(group) % len(markers)]
            style["markersize"] = 4
        label = series if len(groups) == 1 else f"{series} ({group:g})"
        errs = [p.std_err for p in sel]
        if series in ("mc", "d_empirical") and any(e is not None for e in errs):
            ax.errorbar(xs, ys, yerr=[e or 0.0 for e in errs], capsize=2, label=label, **style)
        else:
            ax.plot(xs, ys, label=label, **style)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
