"""Outage probabilities for the single-satellite, selection-combining, and
maximal-ratio-combining schemes.

The central quantity is Pr[(X - a)(Y - b) <= c] for independent
nonnegative X, Y: the exact event for variable-gain AF relaying (per-hop
SNRs) and for fixed-gain MRC (sums of per-hop SNRs).  The hyperbolic
region is covered exactly near the origin and by an M-step staircase of
rectangles along both wings, truncated at depth L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channel
from .channel import LinkSNR, SRParams, SumSRContext
from .specfun import DEFAULT_SERIES, SeriesControl

__all__ = [
    "StaircaseConfig",
    "Threshold",
    "HopPair",
    "staircase_probability",
    "staircase_truncation_bound",
    "op_ss",
    "op_sc",
    "c_mrc",
    "op_mrc",
    "asymp_op_sc",
    "asymp_op_mrc",
    "coding_gains",
]


@dataclass(frozen=True)
class StaircaseConfig:
    """Staircase approximation knobs: M steps, truncation depth L.

    depth_l is an absolute depth in linear-SNR units; the reference
    default is 15 * gamma_th with M = 50.
    """

    steps_m: int = 50
    depth_l: float = 15.0

    def __post_init__(self) -> None:
        if self.steps_m < 1:
            raise ValueError("steps_m must be >= 1")
        if not self.depth_l > 0.0:
            raise ValueError("depth_l must be > 0")

    @classmethod
    def for_threshold(cls, thr: "Threshold", steps_m: int = 50, depth_factor: float = 15.0) -> "StaircaseConfig":
        return cls(steps_m=steps_m, depth_l=depth_factor * thr.gamma_th)


@dataclass(frozen=True)
class Threshold:
    """Outage threshold gamma_th on linear SNR; from rate R, gamma_th = 2^(2R) - 1."""

    gamma_th: float

    def __post_init__(self) -> None:
        if not self.gamma_th > 0.0:
            raise ValueError("gamma_th must be > 0")

    @classmethod
    def from_rate(cls, rate_r: float) -> "Threshold":
        return cls(gamma_th=2.0 ** (2.0 * rate_r) - 1.0)

    @property
    def upsilon(self) -> float:
        """gamma_th^2 + gamma_th, the RHS of the variable-gain outage event."""
        return self.gamma_th**2 + self.gamma_th


@dataclass(frozen=True)
class HopPair:
    """Fading parameters and transmit SNR for one satellite's two hops."""

    ns: tuple[SRParams, LinkSNR]
    sg: tuple[SRParams, LinkSNR]


def _staircase_grids(x_offset: float, y_offset: float, rhs: float, cfg: StaircaseConfig):
    """Abscissae needed by the staircase on each axis."""
    root = math.sqrt(rhs)
    step = cfg.depth_l / cfg.steps_m
    edges = root + np.arange(cfg.steps_m + 1) * step
    # Hyperbola evaluated at each block's lower edge, where the rectangle
    # touches the true boundary.
    hyp = rhs / edges[:-1]
    return root, x_offset + edges, x_offset + hyp, y_offset + edges, y_offset + hyp


def staircase_probability(
    cdf_x,
    cdf_y,
    x_offset: float,
    y_offset: float,
    rhs: float,
    cfg: StaircaseConfig,
) -> float:
    """Approximate Pr[(X - x_offset)(Y - y_offset) <= rhs] for independent X, Y >= 0.

    cdf_x and cdf_y must be vectorized CDF evaluators (ndarray in, ndarray
    out); each is called once per axis on the O(M) distinct abscissae.
    Exact pieces: the strip X <= x_offset, the strip Y <= y_offset, and
    the corner square of side sqrt(rhs); the two hyperbola wings are
    covered by M rectangles each out to depth_l beyond the corner.
    Degenerate strips (zero offset) contribute their exact zero limits.

    The decomposition counts the whole rectangle below both offsets, so it
    approximates the stated event when x_offset * y_offset <= rhs (true
    for both relaying reformulations, where the offsets' product never
    exceeds the right-hand side).
    """
    if not rhs > 0.0:
        raise ValueError("rhs must be > 0")
    if x_offset < 0.0 or y_offset < 0.0:
        raise ValueError("offsets must be >= 0")
    _, x_edges, x_hyp, y_edges, y_hyp = _staircase_grids(x_offset, y_offset, rhs, cfg)

    fx = np.asarray(cdf_x(np.concatenate(([x_offset], x_edges, x_hyp))))
    fy = np.asarray(cdf_y(np.concatenate(([y_offset], y_edges, y_hyp))))
    m = cfg.steps_m
    fx_off, fx_edges, fx_hyp = fx[0], fx[1 : m + 2], fx[m + 2 :]
    fy_off, fy_edges, fy_hyp = fy[0], fy[1 : m + 2], fy[m + 2 :]

    r1 = fx_off
    r2 = fy_off * (1.0 - fx_off)
    r3 = (fx_edges[0] - fx_off) * (fy_edges[0] - fy_off)
    r4 = np.sum((fx_hyp - fx_off) * np.diff(fy_edges))
    r5 = np.sum((fy_hyp - fy_off) * np.diff(fx_edges))
    return float(np.clip(r1 + r2 + r3 + r4 + r5, 0.0, 1.0))


def staircase_truncation_bound(
    cdf_x,
    cdf_y,
    x_offset: float,
    y_offset: float,
    rhs: float,
    cfg: StaircaseConfig,
) -> float:
    """Upper bound on the event mass dropped beyond depth_l on both wings."""
    root = math.sqrt(rhs)
    far = root + cfg.depth_l
    x_tail = (1.0 - float(cdf_x(np.asarray([x_offset + far]))[0])) * (
        float(cdf_y(np.asarray([y_offset + rhs / far]))[0])
        - float(cdf_y(np.asarray([y_offset]))[0])
    )
    y_tail = (1.0 - float(cdf_y(np.asarray([y_offset + far]))[0])) * (
        float(cdf_x(np.asarray([x_offset + rhs / far]))[0])
        - float(cdf_x(np.asarray([x_offset]))[0])
    )
    return x_tail + y_tail


def _sr_cdf(pair: tuple[SRParams, LinkSNR]):
    params, link = pair
    return lambda x: channel.cdf(params, link, x)


def _sum_cdf(pair: tuple[SRParams, LinkSNR], K: int, ctrl: SeriesControl):
    params, link = pair
    ctx = SumSRContext.for_fading(params, K)
    return lambda x: channel.sum_cdf(params, link, ctx, x, ctrl)


def _series_for_max_z(z_max: float) -> SeriesControl:
    """Series budget sized to the largest Whittaker argument a staircase
    will produce; the ascending 1F1 needs roughly z + O(sqrt(z)) terms."""
    terms = max(DEFAULT_SERIES.max_terms, int(z_max + 10.0 * math.sqrt(z_max) + 60.0))
    return SeriesControl(rel_tolerance=DEFAULT_SERIES.rel_tolerance, max_terms=terms)


def op_ss(hops: HopPair, thr: Threshold, cfg: StaircaseConfig) -> float:
    """Single-satellite outage under variable-gain relaying:
    Pr[(Lambda_sg - gamma)(Lambda_ns - gamma) <= gamma^2 + gamma]."""
    g = thr.gamma_th
    return staircase_probability(
        _sr_cdf(hops.sg), _sr_cdf(hops.ns), g, g, thr.upsilon, cfg
    )


def op_sc(hops_per_sat: list[HopPair], thr: Threshold, cfg: StaircaseConfig) -> float:
    """Selection combining: product of the per-satellite outage probabilities."""
    if not hops_per_sat:
        raise ValueError("need at least one satellite")
    out = 1.0
    for hop in hops_per_sat:
        out *= op_ss(hop, thr, cfg)
    return out


def c_mrc(ns_links: list[tuple[SRParams, LinkSNR]]) -> float:
    """Fixed-gain constant C_m = [sum_k 1/(1 + E[Lambda_ns_k])]^{-1}."""
    if not ns_links:
        raise ValueError("need at least one node->satellite link")
    return 1.0 / sum(1.0 / (1.0 + channel.mean_snr(p, lk)) for p, lk in ns_links)


def _require_iid(hops_per_sat: list[HopPair]) -> HopPair:
    first = hops_per_sat[0]
    for hop in hops_per_sat[1:]:
        if hop != first:
            raise ValueError(
                "MRC closed form requires i.i.d. satellites: all hop pairs "
                "must share fading parameters and transmit SNR"
            )
    return first


def op_mrc(
    hops_per_sat: list[HopPair],
    thr: Threshold,
    cfg: StaircaseConfig,
    series: SeriesControl | None = None,
) -> float:
    """Fixed-gain MRC outage: Pr[(Delta_sg)(Delta_ns - gamma) <= C_m gamma],
    with Delta_* the K-fold sums of per-hop SNRs (i.i.d. satellites only).

    When series is None the truncation budget is sized from the largest
    abscissa the staircase needs (low transmit SNR pushes the Whittaker
    argument well past what the stock 500-term budget converges for).
    """
    if not hops_per_sat:
        raise ValueError("need at least one satellite")
    hop = _require_iid(hops_per_sat)
    k = len(hops_per_sat)
    cm = c_mrc([h.ns for h in hops_per_sat])
    if series is None:
        reach = math.sqrt(cm * thr.gamma_th) + thr.gamma_th + cfg.depth_l
        z_max = 0.0
        for params, link in (hop.sg, hop.ns):
            drv = channel.derive(params)
            z_max = max(z_max, (drv.beta - drv.delta) * reach / link.eta)
        series = _series_for_max_z(z_max)
    return staircase_probability(
        _sum_cdf(hop.sg, k, series),
        _sum_cdf(hop.ns, k, series),
        0.0,
        thr.gamma_th,
        cm * thr.gamma_th,
        cfg,
    )


def _equal_power_eta(hops_per_sat: list[HopPair]) -> float:
    etas = {h.ns[1].eta for h in hops_per_sat} | {h.sg[1].eta for h in hops_per_sat}
    if len(etas) != 1:
        raise ValueError("asymptotic forms assume equal power allocation on every hop")
    return etas.pop()


def asymp_op_sc(hops_per_sat: list[HopPair], thr: Threshold) -> float:
    """Leading-order SC outage ((gamma/eta) prod_k (alpha_sg + alpha_ns)^(1/K))^K."""
    if not hops_per_sat:
        raise ValueError("need at least one satellite")
    eta = _equal_power_eta(hops_per_sat)
    k = len(hops_per_sat)
    prod = 1.0
    for hop in hops_per_sat:
        prod *= channel.derive(hop.sg[0]).alpha + channel.derive(hop.ns[0]).alpha
    return (thr.gamma_th / eta) ** k * prod


def asymp_op_mrc(hops_per_sat: list[HopPair], thr: Threshold) -> float:
    """Leading-order MRC outage (gamma alpha_ns / (Gamma(K+1)^(1/K) eta))^K."""
    if not hops_per_sat:
        raise ValueError("need at least one satellite")
    eta = _equal_power_eta(hops_per_sat)
    ns_params = {h.ns[0] for h in hops_per_sat}
    if len(ns_params) != 1:
        raise ValueError("MRC asymptote assumes identical node->satellite fading")
    k = len(hops_per_sat)
    alpha_ns = channel.derive(ns_params.pop()).alpha
    return (thr.gamma_th * alpha_ns) ** k / (eta**k * math.gamma(k + 1.0))


def coding_gains(hops_per_sat: list[HopPair], thr: Threshold) -> tuple[float, float, int]:
    """(G_c^SC, G_c^MRC, diversity order K) of the high-SNR law (G_c eta)^(-K)."""
    if not hops_per_sat:
        raise ValueError("need at least one satellite")
    k = len(hops_per_sat)
    prod = 1.0
    for hop in hops_per_sat:
        prod *= (
            channel.derive(hop.sg[0]).alpha + channel.derive(hop.ns[0]).alpha
        ) ** (1.0 / k)
    gc_sc = 1.0 / (thr.gamma_th * prod)
    ns_params = {h.ns[0] for h in hops_per_sat}
    if len(ns_params) != 1:
        raise ValueError("MRC coding gain assumes identical node->satellite fading")
    alpha_ns = channel.derive(ns_params.pop()).alpha
    gc_mrc = math.gamma(k + 1.0) ** (1.0 / k) / (thr.gamma_th * alpha_ns)
    return gc_sc, gc_mrc, k
