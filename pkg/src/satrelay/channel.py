"""Shadowed-Rician instantaneous-SNR distribution.

The model: a Rician link whose line-of-sight amplitude is itself
Nakagami-m distributed.  All computations happen on the instantaneous
SNR Lambda = eta * |h|^2; the severity integer m, half multipath power b,
and LoS power omega fully describe |h|^2.

Provides the PDF / CDF / mean in closed form, a constructive sampler,
the CDF of a K-fold i.i.d. sum (via log-scaled Whittaker functions), and
the linearized high-SNR approximations of both CDFs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    DEFAULT_SERIES,
    SeriesControl,
    _kummer_1f1_ln_grid,
    ln_gamma,
    pochhammer,
)

__all__ = [
    "SRParams",
    "SRDerived",
    "LinkSNR",
    "SumSRContext",
    "HEAVY_SHADOWING",
    "AVERAGE_SHADOWING",
    "derive",
    "pdf",
    "cdf",
    "mean_snr",
    "sample",
    "sum_cdf",
    "asymptotic_cdf",
    "asymptotic_sum_cdf",
]


@dataclass(frozen=True)
class SRParams:
    """Shadowed-Rician fading parameters (m, b, omega).

    m is the Nakagami shadowing severity (integer, so the kappa-sums of
    the closed forms are finite), 2b the average multipath power, omega
    the average LoS power.
    """

    m: int
    b: float
    omega: float

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if not self.b > 0.0:
            raise ValueError(f"b must be > 0, got {self.b}")
        if self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")


# Land-mobile-satellite reference conditions (Abdi et al. parameterization).
HEAVY_SHADOWING = SRParams(m=2, b=0.063, omega=0.0005)
AVERAGE_SHADOWING = SRParams(m=5, b=0.251, omega=0.279)


@dataclass(frozen=True)
class SRDerived:
    """Constants derived from SRParams: alpha, beta, delta."""

    alpha: float
    beta: float
    delta: float

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise ValueError("alpha must be > 0")
        if not self.beta > self.delta >= 0.0:
            raise ValueError("need beta > delta >= 0 for an integrable tail")


@dataclass(frozen=True)
class LinkSNR:
    """Per-hop transmit SNR eta = P / sigma^2 (linear scale)."""

    eta: float

    def __post_init__(self) -> None:
        if not self.eta > 0.0:
            raise ValueError(f"eta must be > 0, got {self.eta}")

    @classmethod
    def from_db(cls, eta_db: float) -> "LinkSNR":
        return cls(eta=10.0 ** (eta_db / 10.0))


def derive(p: SRParams) -> SRDerived:
    """alpha = ((2bm)/(2bm+omega))^m / 2b, beta = 1/2b, delta = omega/(2b(2bm+omega))."""
    two_b = 2.0 * p.b
    denom = two_b * p.m + p.omega
    return SRDerived(
        alpha=(two_b * p.m / denom) ** p.m / two_b,
        beta=1.0 / two_b,
        delta=p.omega / (two_b * denom),
    )


def _zeta_weights(p: SRParams, drv: SRDerived) -> np.ndarray:
    """zeta(kappa) = (-1)^kappa (1-m)_kappa delta^kappa / (kappa!)^2, kappa = 0..m-1.

    All weights are nonnegative for integer m.
    """
    out = np.empty(p.m)
    for k in range(p.m):
        out[k] = (
            (-1.0) ** k
            * pochhammer(1.0 - p.m, k)
            * drv.delta**k
            / math.factorial(k) ** 2
        )
    return out


def _as_nonneg_array(x, name: str = "x") -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError(f"{name} must be >= 0")
    return arr, arr.ndim == 0


def pdf(p: SRParams, link: LinkSNR, x):
    """Density of Lambda at x >= 0 (accepts scalars or arrays)."""
    arr, scalar = _as_nonneg_array(x)
    drv = derive(p)
    zeta = _zeta_weights(p, drv)
    lam = (drv.beta - drv.delta) / link.eta
    u = arr / link.eta
    poly = np.zeros_like(arr)
    for k in range(p.m - 1, -1, -1):
        poly = poly * u + zeta[k]
    out = (drv.alpha / link.eta) * poly * np.exp(-lam * arr)
    return float(out) if scalar else out


def cdf(p: SRParams, link: LinkSNR, x):
    """CDF of Lambda at x >= 0, clamped to [0, 1] against roundoff drift.

    Identical term-by-term to the closed form
    1 - alpha * sum_kappa zeta(kappa) kappa!/(beta-delta)^(kappa+1)
          * e^(-lam x) * sum_{p<=kappa} (lam x)^p / p!,
    i.e. the kappa-wise incomplete-Gamma expansion of the density.
    """
    arr, scalar = _as_nonneg_array(x)
    drv = derive(p)
    zeta = _zeta_weights(p, drv)
    lam = (drv.beta - drv.delta) / link.eta
    t = lam * arr
    # pois accumulates e^{-t} * sum_{p<=kappa} t^p/p! across kappa.
    pois_term = np.ones_like(arr)
    pois_sum = np.ones_like(arr)
    tail = np.zeros_like(arr)
    bd = drv.beta - drv.delta
    for k in range(p.m):
        if k > 0:
            pois_term = pois_term * t / k
            pois_sum = pois_sum + pois_term
        w = zeta[k] * math.factorial(k) / bd ** (k + 1)
        tail = tail + w * pois_sum
    out = 1.0 - drv.alpha * np.exp(-t) * tail
    out = np.clip(out, 0.0, 1.0)
    return float(out) if scalar else out


def mean_snr(p: SRParams, link: LinkSNR) -> float:
    """Closed-form E[Lambda] = alpha * sum_kappa zeta(kappa) eta Gamma(kappa+2)/(beta-delta)^(kappa+2)."""
    drv = derive(p)
    zeta = _zeta_weights(p, drv)
    bd = drv.beta - drv.delta
    acc = 0.0
    for k in range(p.m):
        acc += zeta[k] * math.factorial(k + 1) / bd ** (k + 2)
    return drv.alpha * link.eta * acc


def sample(p: SRParams, link: LinkSNR, rng: np.random.Generator, size=None):
    """Draw Lambda = eta * |A e^{j phi} + Z|^2 from a caller-owned generator.

    A^2 ~ Gamma(shape m, scale omega/m) gives the Nakagami-m LoS amplitude,
    phi is uniform on [0, 2pi), and Z is circularly-symmetric complex
    Gaussian with total variance 2b.  Draw order is fixed (A^2, phi, Re Z,
    Im Z) so a seeded generator reproduces the same sequence exactly.
    """
    a2 = rng.gamma(shape=p.m, scale=p.omega / p.m, size=size)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=size)
    zre = rng.normal(0.0, math.sqrt(p.b), size=size)
    zim = rng.normal(0.0, math.sqrt(p.b), size=size)
    a = np.sqrt(a2)
    lam = link.eta * ((a * np.cos(phi) + zre) ** 2 + (a * np.sin(phi) + zim) ** 2)
    return float(lam) if size is None else lam


@dataclass(frozen=True)
class SumSRContext:
    """Combinatorial constants for the CDF of a K-fold i.i.d. SR sum.

    d = max{K, floor(mK)}, c = (d-K)^+, epsilon = mK - d.  For integer m
    these reduce to d = mK, c = (m-1)K, epsilon = 0.
    """

    K: int
    d: int
    c: int
    epsilon: float

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.c != max(self.d - self.K, 0):
            raise ValueError("c must equal (d - K)^+")

    @classmethod
    def for_fading(cls, p: SRParams, K: int) -> "SumSRContext":
        if K < 1:
            raise ValueError(f"K must be >= 1, got {K}")
        d = max(K, math.floor(p.m * K))
        return cls(K=K, d=d, c=max(d - K, 0), epsilon=float(p.m * K - d))


def _ln_binomial(c: int, l: int) -> float:
    if c == 0:
        return 0.0
    return ln_gamma(c + 1.0) - ln_gamma(l + 1.0) - ln_gamma(c - l + 1.0)


def _sum_cdf_terms(
    drv: SRDerived,
    eta: float,
    ctx: SumSRContext,
    x: np.ndarray,
    ctrl: SeriesControl,
) -> np.ndarray:
    """Signed log-space assembly of the sum CDF over an array of x > 0."""
    bd = drv.beta - drv.delta
    z = bd * x / eta
    with np.errstate(divide="ignore"):
        ln_x_over_eta = np.log(x / eta)

    ln_signs: list[np.ndarray] = []
    ln_mags: list[np.ndarray] = []

    def add_term(l: int, dd: int, ln_extra: float) -> None:
        # ln G(x, l, dd, eta) = (dd-l) ln(x/eta) - z - lnGamma(dd-l+1) + ln 1F1,
        # the (beta-delta) powers cancel between the prefactor and M's z^(nu+1/2).
        sign_f, ln_f = _kummer_1f1_ln_grid(1.0 - l, 1.0 + dd - l, z, ctrl)
        ln_g = (dd - l) * ln_x_over_eta - z - ln_gamma(dd - l + 1.0) + ln_f
        ln_mags.append(ln_extra + ln_g)
        ln_signs.append(sign_f)

    ln_alpha_k = ctx.K * math.log(drv.alpha)
    for l in range(ctx.c + 1):
        ln_base = ln_alpha_k + _ln_binomial(ctx.c, l) + (ctx.c - l) * math.log(drv.beta)
        add_term(l, ctx.d, ln_base)
        if ctx.epsilon > 0.0:
            add_term(l, ctx.d + 1, ln_base + math.log(ctx.epsilon * drv.delta))

    mags = np.stack(ln_mags)
    signs = np.stack(ln_signs)
    peak = np.max(mags, axis=0)
    peak_safe = np.where(np.isfinite(peak), peak, 0.0)
    total = np.sum(signs * np.exp(mags - peak_safe), axis=0)
    return np.where(np.isfinite(peak), total * np.exp(peak_safe), 0.0)


def sum_cdf(
    p: SRParams,
    link: LinkSNR,
    ctx: SumSRContext,
    x,
    ctrl: SeriesControl = DEFAULT_SERIES,
):
    """CDF of the sum of ctx.K i.i.d. SR SNRs with parameters p, at x >= 0.

    Assembled in log space from Whittaker-function terms; the epsilon
    correction term vanishes identically for integer m.  Accepts scalars
    or arrays; x = 0 returns exactly 0.
    """
    arr, scalar = _as_nonneg_array(x)
    drv = derive(p)
    out = np.clip(_sum_cdf_terms(drv, link.eta, ctx, np.atleast_1d(arr), ctrl), 0.0, 1.0)
    out = out.reshape(arr.shape)
    return float(out) if scalar else out


def asymptotic_cdf(p: SRParams, link: LinkSNR, x):
    """High-SNR linearization F(x) ~ alpha x / eta (unclamped)."""
    arr, scalar = _as_nonneg_array(x)
    out = derive(p).alpha * arr / link.eta
    return float(out) if scalar else out


def asymptotic_sum_cdf(p: SRParams, link: LinkSNR, K: int, x):
    """High-SNR K-fold-sum CDF F(x) ~ (alpha x / eta)^K / Gamma(K+1) (unclamped)."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    arr, scalar = _as_nonneg_array(x)
    out = (derive(p).alpha * arr / link.eta) ** K / math.gamma(K + 1)
    return float(out) if scalar else out
