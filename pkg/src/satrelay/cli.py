"""Experiment runner: reproduces the reference figure sweeps and custom
grids, emitting CSV tables and SVG log-scale charts.

Subcommands:
  run        compute outage tables for a preset or a custom config
  linkbudget print the feasible received-SNR range for the reference uplink
  validate   run the built-in oracle cross-check suite
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import linkbudget, mcsim, outage
from .channel import AVERAGE_SHADOWING, HEAVY_SHADOWING, LinkSNR, SRParams
from .mcsim import MCConfig, OutageEstimate
from .outage import HopPair, StaircaseConfig, Threshold

__all__ = ["ExperimentSpec", "RunRow", "run", "emit_csv", "emit_svg", "main"]

SCHEMES = ("SS", "SC", "MRC")

# Condition code -> (node->satellite params, satellite->GS params); the
# first letter names the uplink hop's shadowing.
CONDITIONS: dict[str, tuple[SRParams, SRParams]] = {
    "HH": (HEAVY_SHADOWING, HEAVY_SHADOWING),
    "HA": (HEAVY_SHADOWING, AVERAGE_SHADOWING),
    "AH": (AVERAGE_SHADOWING, HEAVY_SHADOWING),
    "AA": (AVERAGE_SHADOWING, AVERAGE_SHADOWING),
}

CSV_HEADER = (
    "scheme,condition,K,snr_db,op_analytic,op_asymptotic,"
    "op_mc,mc_ci_low,mc_ci_high,mc_trials,low_confidence"
)

DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 20240915


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: grids, schemes, approximation knobs, outputs."""

    preset: str
    schemes: tuple[str, ...]
    conditions: tuple[str, ...]
    k_values: tuple[int, ...]
    snr_grid_db: tuple[float, ...]
    staircase: StaircaseConfig
    threshold: Threshold
    mc: MCConfig | None
    csv_path: str
    svg_path: str | None = None
    # Per-condition SNR grids (the K-sweep preset pins one eta per condition);
    # conditions absent from this map fall back to snr_grid_db.
    condition_snr_db: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.schemes:
            raise ValueError("schemes must be nonempty")
        if not self.conditions:
            raise ValueError("conditions must be nonempty")
        if not self.k_values or any(k < 1 for k in self.k_values):
            raise ValueError("k_values must be nonempty positive integers")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ValueError(f"unknown scheme {s!r} (expected SS, SC, MRC)")
        for c in self.conditions:
            if c not in CONDITIONS:
                raise ValueError(f"unknown condition {c!r} (expected HH, HA, AH, AA)")
        for c in self.conditions:
            if not self.grid_for(c):
                raise ValueError(f"no SNR grid for condition {c}")

    def grid_for(self, condition: str) -> tuple[float, ...]:
        return self.condition_snr_db.get(condition, self.snr_grid_db)


@dataclass(frozen=True)
class RunRow:
    scheme: str
    condition: str
    k: int
    snr_db: float
    op_analytic: float
    op_asymptotic: float | None
    mc: OutageEstimate | None


def _preset_spec(name: str) -> ExperimentSpec:
    thr = Threshold.from_rate(0.5)
    stair = StaircaseConfig.for_threshold(thr)
    mc = MCConfig(trials=DEFAULT_TRIALS, seed=DEFAULT_SEED)
    common = dict(
        staircase=stair,
        threshold=thr,
        mc=mc,
        csv_path=f"{name}.csv",
    )
    if name == "fig1":
        return ExperimentSpec(
            preset=name,
            schemes=("SS", "SC", "MRC"),
            conditions=("HH", "HA"),
            k_values=(5,),
            snr_grid_db=tuple(np.arange(0.0, 20.1, 2.0)),
            **common,
        )
    if name == "fig2":
        return ExperimentSpec(
            preset=name,
            schemes=("SS", "SC", "MRC"),
            conditions=("AH", "AA"),
            k_values=(5,),
            snr_grid_db=tuple(np.arange(-6.0, 9.1, 1.5)),
            **common,
        )
    if name == "fig3":
        return ExperimentSpec(
            preset=name,
            schemes=("SC", "MRC"),
            conditions=("HH", "HA", "AH", "AA"),
            k_values=(2, 3, 4, 5, 6),
            snr_grid_db=(),
            condition_snr_db={
                "HH": (13.5,),
                "HA": (13.5,),
                "AH": (7.5,),
                "AA": (7.5,),
            },
            **common,
        )
    raise ValueError(f"unknown preset {name!r} (expected fig1, fig2, fig3)")


def _row_seed(base_seed: int, row_index: int) -> int:
    seq = np.random.SeedSequence(
        entropy=base_seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(row_index,)
    )
    return int(seq.generate_state(1, np.uint64)[0])


def _row_points(spec: ExperimentSpec):
    for scheme in spec.schemes:
        for cond in spec.conditions:
            for k in spec.k_values:
                for db in spec.grid_for(cond):
                    yield scheme, cond, k, float(db)


def _compute_row(spec: ExperimentSpec, point, row_index: int, sim_workers: int) -> RunRow:
    scheme, cond, k, db = point
    ns_params, sg_params = CONDITIONS[cond]
    link = LinkSNR.from_db(db)
    hop = HopPair(ns=(ns_params, link), sg=(sg_params, link))
    hops = [hop] * k
    thr, stair = spec.threshold, spec.staircase

    if scheme == "SS":
        analytic = outage.op_ss(hop, thr, stair)
        asymptotic = None
    elif scheme == "SC":
        analytic = outage.op_sc(hops, thr, stair)
        asymptotic = outage.asymp_op_sc(hops, thr)
    else:
        analytic = outage.op_mrc(hops, thr, stair)
        asymptotic = outage.asymp_op_mrc(hops, thr)

    est = None
    if spec.mc is not None:
        cfg = replace(spec.mc, seed=_row_seed(spec.mc.seed, row_index))
        if scheme == "SS":
            est = mcsim.simulate_ss(hop, thr, cfg, workers=sim_workers)
        elif scheme == "SC":
            est = mcsim.simulate_sc(hops, thr, cfg, workers=sim_workers)
        else:
            est = mcsim.simulate_mrc(hops, thr, cfg, workers=sim_workers)
    return RunRow(scheme, cond, k, db, analytic, asymptotic, est)


def run(spec: ExperimentSpec, workers: int = 1) -> list[RunRow]:
    """Compute all grid rows in deterministic order.

    Rows are keyed (scheme, condition, K, snr_db) in spec order; per-row
    Monte Carlo seeds derive from (spec.mc.seed, row index), so results
    do not depend on the worker count.
    """
    points = list(_row_points(spec))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(
                pool.map(lambda ip: _compute_row(spec, ip[1], ip[0], 1), enumerate(points))
            )
    return [_compute_row(spec, pt, i, 1) for i, pt in enumerate(points)]


def _fmt(value: float | None) -> str:
    return "" if value is None else format(value, ".17e")


def emit_csv(rows: list[RunRow], path: str) -> None:
    """Write the run table; full-precision scientific floats, LF endings."""
    lines = [CSV_HEADER]
    for r in rows:
        if r.mc is None:
            mc_cols = ["", "", "", "", ""]
        else:
            mc_cols = [
                _fmt(r.mc.p_hat),
                _fmt(r.mc.ci_low),
                _fmt(r.mc.ci_high),
                str(r.mc.trials),
                "1" if r.mc.low_confidence else "0",
            ]
        lines.append(
            ",".join(
                [
                    r.scheme,
                    r.condition,
                    str(r.k),
                    _fmt(r.snr_db),
                    _fmt(r.op_analytic),
                    _fmt(r.op_asymptotic),
                    *mc_cols,
                ]
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# SVG chart
# ---------------------------------------------------------------------------

_SVG_W, _SVG_H = 880, 540
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 230, 40, 60
_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
)
_KIND_DASH = {"analytic": "", "asymptotic": "7,4", "mc": "2,3"}


def _series_from_rows(rows: list[RunRow], x_axis: str):
    """Group rows into ((scheme, condition, kind) -> [(x, op)]) series."""
    series: dict[tuple[str, str, str], list[tuple[float, float]]] = {}

    def push(key, x, op):
        if op is not None and op > 0.0 and math.isfinite(op):
            series.setdefault(key, []).append((x, op))

    for r in rows:
        x = float(r.k) if x_axis == "K" else r.snr_db
        push((r.scheme, r.condition, "analytic"), x, r.op_analytic)
        push((r.scheme, r.condition, "asymptotic"), x, r.op_asymptotic)
        if r.mc is not None:
            push((r.scheme, r.condition, "mc"), x, r.mc.p_hat)
    return {k: sorted(v) for k, v in series.items()}


def emit_svg(rows: list[RunRow], path: str) -> None:
    """Standalone log-y chart: one polyline per (scheme, condition, kind).

    The x axis is the satellite count when the table sweeps K more than
    SNR, otherwise transmit SNR in dB.  Points with zero probability are
    skipped (off the log scale).
    """
    if not rows:
        raise ValueError("cannot plot an empty table")
    n_k = len({r.k for r in rows})
    n_db = len({r.snr_db for r in rows})
    x_axis = "K" if n_k > n_db else "snr_db"
    series = _series_from_rows(rows, x_axis)
    if not series:
        raise ValueError("no positive outage values to plot")

    xs = [x for pts in series.values() for x, _ in pts]
    ops = [op for pts in series.values() for _, op in pts]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo = math.floor(math.log10(min(ops)))
    y_hi = math.ceil(math.log10(max(ops)))
    if y_hi == y_lo:
        y_hi += 1
    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def sx(x: float) -> float:
        return round(_MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w, 2)

    def sy(op: float) -> float:
        # Log scale: smaller outage sits lower on the chart.
        frac = (y_hi - math.log10(op)) / (y_hi - y_lo)
        return round(_MARGIN_T + frac * plot_h, 2)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
    ]
    # Axes and decade gridlines.
    x0, y0 = _MARGIN_L, _MARGIN_T + plot_h
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{_MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for dec in range(y_lo, y_hi + 1):
        y = sy(10.0**dec)
        out.append(
            f'<line x1="{x0}" y1="{y}" x2="{x0 + plot_w}" y2="{y}" '
            f'stroke="#dddddd" stroke-width="0.7"/>'
        )
        out.append(
            f'<text x="{x0 - 8}" y="{y + 4}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">1e{dec}</text>'
        )
    x_ticks = sorted({x for x in xs}) if len(set(xs)) <= 13 else list(
        np.linspace(x_lo, x_hi, 6)
    )
    for xt in x_ticks:
        px = sx(xt)
        out.append(f'<line x1="{px}" y1="{y0}" x2="{px}" y2="{y0 + 5}" stroke="black"/>')
        label = f"{xt:g}"
        out.append(
            f'<text x="{px}" y="{y0 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    x_label = "satellites in LoS (K)" if x_axis == "K" else "transmit SNR (dB)"
    out.append(
        f'<text x="{x0 + plot_w / 2}" y="{_SVG_H - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    out.append(
        f'<text x="20" y="{_MARGIN_T + plot_h / 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20,{_MARGIN_T + plot_h / 2})">outage probability</text>'
    )

    group_color: dict[tuple[str, str], str] = {}
    legend_y = _MARGIN_T + 10
    for key, pts in series.items():
        scheme, cond, kind = key
        color = group_color.setdefault(
            (scheme, cond), _PALETTE[len(group_color) % len(_PALETTE)]
        )
        coords = " ".join(f"{sx(x)},{sy(op)}" for x, op in pts)
        dash = _KIND_DASH[kind]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.6"{dash_attr}/>'
        )
        for x, op in pts:
            px, py = sx(x), sy(op)
            if kind == "analytic":
                out.append(f'<circle cx="{px}" cy="{py}" r="3" fill="{color}"/>')
            elif kind == "mc":
                out.append(
                    f'<rect x="{round(px - 3, 2)}" y="{round(py - 3, 2)}" width="6" '
                    f'height="6" fill="none" stroke="{color}"/>'
                )
            else:
                out.append(
                    f'<path d="M {px} {round(py - 3.5, 2)} L {round(px - 3, 2)} '
                    f'{round(py + 2.5, 2)} L {round(px + 3, 2)} {round(py + 2.5, 2)} Z" '
                    f'fill="none" stroke="{color}"/>'
                )
        sx0 = _SVG_W - _MARGIN_R + 12
        out.append(
            f'<line x1="{sx0}" y1="{legend_y}" x2="{sx0 + 26}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="1.6"{dash_attr}/>'
        )
        out.append(
            f'<text x="{sx0 + 32}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="11">{scheme} {cond} {kind}</text>'
        )
        legend_y += 17
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# Config files: flat "key = value" lines, lists comma-separated.
# ---------------------------------------------------------------------------


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {ln}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().lower()] = value.strip()
    return out


def _split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _spec_from_args(args) -> tuple[ExperimentSpec, int]:
    cfg: dict[str, str] = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config_text(fh.read())

    preset = args.preset or cfg.get("preset", "custom")
    if preset != "custom":
        spec = _preset_spec(preset)
    else:
        needed = [k for k in ("schemes", "conditions", "k_values") if k not in cfg]
        if needed:
            raise ValueError(
                f"custom run needs a --config defining {', '.join(needed)}"
            )
        thr = (
            Threshold(gamma_th=float(cfg["gamma_th"]))
            if "gamma_th" in cfg
            else Threshold.from_rate(float(cfg.get("rate_r", 0.5)))
        )
        per_cond = {
            cond: tuple(float(v) for v in _split_list(cfg[f"snr_db_{cond.lower()}"]))
            for cond in CONDITIONS
            if f"snr_db_{cond.lower()}" in cfg
        }
        spec = ExperimentSpec(
            preset="custom",
            schemes=tuple(s.upper() for s in _split_list(cfg["schemes"])),
            conditions=tuple(c.upper() for c in _split_list(cfg["conditions"])),
            k_values=tuple(int(k) for k in _split_list(cfg["k_values"])),
            snr_grid_db=tuple(float(v) for v in _split_list(cfg.get("snr_db", ""))),
            condition_snr_db=per_cond,
            staircase=StaircaseConfig(
                steps_m=int(cfg.get("steps_m", 50)),
                depth_l=float(cfg["depth_l"])
                if "depth_l" in cfg
                else 15.0 * thr.gamma_th,
            ),
            threshold=thr,
            mc=MCConfig(
                trials=int(cfg.get("trials", DEFAULT_TRIALS)),
                seed=int(cfg.get("seed", DEFAULT_SEED)),
                ci_level=float(cfg.get("ci_level", 0.99)),
            ),
            csv_path=cfg.get("csv", "custom.csv"),
            svg_path=cfg.get("svg"),
        )

    # Config overrides for presets, then CLI flags on top of both.
    if preset != "custom" and cfg:
        updates = {}
        if "steps_m" in cfg or "depth_l" in cfg:
            updates["staircase"] = StaircaseConfig(
                steps_m=int(cfg.get("steps_m", spec.staircase.steps_m)),
                depth_l=float(cfg.get("depth_l", spec.staircase.depth_l)),
            )
        if "trials" in cfg or "seed" in cfg or "ci_level" in cfg:
            base = spec.mc or MCConfig(trials=DEFAULT_TRIALS, seed=DEFAULT_SEED)
            updates["mc"] = MCConfig(
                trials=int(cfg.get("trials", base.trials)),
                seed=int(cfg.get("seed", base.seed)),
                ci_level=float(cfg.get("ci_level", base.ci_level)),
            )
        if cfg.get("mc", "").lower() in ("false", "0", "no"):
            updates["mc"] = None
        if "csv" in cfg:
            updates["csv_path"] = cfg["csv"]
        if "svg" in cfg:
            updates["svg_path"] = cfg["svg"]
        if updates:
            spec = replace(spec, **updates)

    if args.no_mc:
        spec = replace(spec, mc=None)
    elif args.trials is not None or args.seed is not None:
        base = spec.mc or MCConfig(trials=DEFAULT_TRIALS, seed=DEFAULT_SEED)
        spec = replace(
            spec,
            mc=MCConfig(
                trials=args.trials if args.trials is not None else base.trials,
                seed=args.seed if args.seed is not None else base.seed,
                ci_level=base.ci_level,
            ),
        )
    if args.csv:
        spec = replace(spec, csv_path=args.csv)
    if args.svg:
        spec = replace(spec, svg_path=args.svg)

    workers = args.workers if args.workers else int(cfg.get("workers", 1))
    return spec, workers


def _cmd_run(args) -> int:
    spec, workers = _spec_from_args(args)
    rows = run(spec, workers=workers)
    emit_csv(rows, spec.csv_path)
    print(f"wrote {spec.csv_path} ({len(rows)} rows)")
    if spec.svg_path:
        emit_svg(rows, spec.svg_path)
        print(f"wrote {spec.svg_path}")
    return 0


def _cmd_linkbudget(args) -> int:
    grid = linkbudget.reference_grid(
        altitude_km=args.altitude_km,
        frequency_hz=args.frequency_hz,
        elevation_deg=args.elevation_deg,
        eirp_dbm=args.eirp_dbm,
        extra_losses_db=args.extra_losses_db,
    )
    lo, hi = linkbudget.feasible_range(grid)
    rng_km = linkbudget.slant_range_km(args.altitude_km, args.elevation_deg)
    print(f"slant_range_km={rng_km:.2f}")
    print(f"snr_db_min={lo:.2f}")
    print(f"snr_db_max={hi:.2f}")
    print(
        f"feasible SNR range: {lo:.1f} dB to {hi:.1f} dB "
        f"(G/T -25..-6 dB/K, bandwidth 3.75..180 kHz)"
    )
    return 0


def _cmd_validate(args) -> int:
    from .validate import run_checks

    failures = run_checks(verbose=True)
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satrelay",
        description="Outage analysis of LEO-satellite direct-access IoT uplinks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid")
    p_run.add_argument("--preset", choices=("fig1", "fig2", "fig3", "custom"))
    p_run.add_argument("--config", help="flat key=value config file")
    p_run.add_argument("--seed", type=int, help="Monte Carlo base seed")
    p_run.add_argument("--trials", type=int, help="Monte Carlo trials per row")
    p_run.add_argument("--csv", help="output CSV path")
    p_run.add_argument("--svg", help="output SVG chart path")
    p_run.add_argument("--no-mc", action="store_true", help="skip Monte Carlo columns")
    p_run.add_argument("--workers", type=int, default=0, help="row worker pool size")
    p_run.set_defaults(func=_cmd_run)

    p_lb = sub.add_parser("linkbudget", help="feasible SNR range for the reference uplink")
    p_lb.add_argument("--altitude-km", type=float, default=800.0)
    p_lb.add_argument("--frequency-hz", type=float, default=950e6)
    p_lb.add_argument("--elevation-deg", type=float, default=30.0)
    p_lb.add_argument("--eirp-dbm", type=float, default=23.0)
    p_lb.add_argument("--extra-losses-db", type=float, default=3.0)
    p_lb.set_defaults(func=_cmd_linkbudget)

    p_val = sub.add_parser("validate", help="run the oracle cross-check suite")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse errors exit(2) on their own
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
