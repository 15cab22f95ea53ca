"""Built-in oracle cross-checks, runnable as `satrelay validate`.

Each check compares an implementation path against an independent route:
trapezoid quadrature for the closed-form density, sampled draws against
the analytic CDF, the degenerate K = 1 sum against the plain CDF, Monte
Carlo against the staircase at a configuration where the staircase error
is far below the sampling noise, and so on.
"""

from __future__ import annotations

import math

import numpy as np

from . import channel, linkbudget, mcsim, outage
from .channel import AVERAGE_SHADOWING, HEAVY_SHADOWING, LinkSNR, SumSRContext
from .mcsim import MCConfig
from .outage import HopPair, StaircaseConfig, Threshold
from .specfun import kummer_1f1, whittaker_m_ln

PARAM_SETS = {
    "heavy": HEAVY_SHADOWING,
    "average": AVERAGE_SHADOWING,
}


def _pdf_grid(p, link):
    drv = channel.derive(p)
    upper = 50.0 * max(link.eta, link.eta / (drv.beta - drv.delta))
    xs = np.linspace(0.0, upper, 400_001)
    return xs, channel.pdf(p, link, xs)


def _simpson(ys: np.ndarray, xs: np.ndarray) -> float:
    # Uniform-grid composite Simpson; the trapezoid rule is not accurate
    # enough for the 1e-8 moment comparison.
    h = xs[1] - xs[0]
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


def _checks():
    yield "derived constants (heavy hand values)", _check_derived
    yield "pdf normalization (trapezoid)", _check_normalization
    yield "cdf matches integrated pdf", _check_cdf_quadrature
    yield "mean identity (closed form vs quadrature)", _check_mean
    yield "kummer 1F1(1;2;z) identity", _check_kummer
    yield "whittaker reductions", _check_whittaker
    yield "sum CDF K=1 degeneracy", _check_sum_k1
    yield "sampler vs CDF (KS)", _check_sampler_ks
    yield "staircase collapses to quadrant formula as rhs->0", _check_staircase_limit
    yield "SC factorizes into SS product", _check_sc_product
    yield "scheme ordering MRC < SC < SS", _check_ordering
    yield "staircase brackets Monte Carlo", _check_staircase_mc
    yield "link budget monotonicity", _check_linkbudget
    yield "Monte Carlo determinism", _check_mc_determinism


def _check_derived():
    d = channel.derive(HEAVY_SHADOWING)
    assert abs(d.alpha - 7.9051) < 5e-4, d.alpha
    assert abs(d.beta - 7.9365) < 5e-4, d.beta
    assert abs(d.delta - 0.015716) < 5e-6, d.delta


def _check_normalization():
    for p in PARAM_SETS.values():
        for eta in (1.0, 10.0):
            link = LinkSNR(eta)
            xs, ys = _pdf_grid(p, link)
            total = float(np.trapezoid(ys, xs))
            assert abs(total - 1.0) < 1e-6, (p.m, eta, total)


def _check_cdf_quadrature():
    p = HEAVY_SHADOWING
    link = LinkSNR(1.0)
    xs, ys = _pdf_grid(p, link)
    cum = np.concatenate(([0.0], np.cumsum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0)))
    idx = np.searchsorted(xs, [0.5, 1.0, 2.0, 5.0])
    for i in idx:
        err = abs(channel.cdf(p, link, float(xs[i])) - float(cum[i]))
        assert err < 1e-6, err


def _check_mean():
    for p in PARAM_SETS.values():
        link = LinkSNR(3.0)
        xs, ys = _pdf_grid(p, link)
        m_quad = _simpson(xs * ys, xs)
        m_closed = channel.mean_snr(p, link)
        assert abs(m_closed - m_quad) / m_quad < 1e-8, (m_closed, m_quad)


def _check_kummer():
    for z in (0.1, 1.0, 10.0, 50.0):
        val = kummer_1f1(1.0, 2.0, z)
        assert abs(val * z + 1.0 - math.exp(z)) / math.exp(z) < 1e-10, z


def _check_whittaker():
    for z in (0.5, 2.0, 10.0, 40.0):
        sign, ln_mag = whittaker_m_ln(0.0, 0.5, z)
        want = 2.0 * math.sinh(z / 2.0)
        assert sign > 0 and abs(math.exp(ln_mag) - want) / want < 1e-10
        nu = 1.25
        sign, ln_mag = whittaker_m_ln(nu + 0.5, nu, z)
        want = z ** (nu + 0.5) * math.exp(-z / 2.0)
        assert sign > 0 and abs(math.exp(ln_mag) - want) / want < 1e-10


def _check_sum_k1():
    for p in PARAM_SETS.values():
        link = LinkSNR(10.0)
        ctx = SumSRContext.for_fading(p, 1)
        xs = np.linspace(0.25, 30.0, 20)
        a = channel.sum_cdf(p, link, ctx, xs)
        b = channel.cdf(p, link, xs)
        assert np.max(np.abs(a - b) / b) < 1e-6


def _check_sampler_ks():
    rng = np.random.default_rng(314159)
    n = 200_000
    for p in PARAM_SETS.values():
        link = LinkSNR(1.0)
        draws = np.sort(channel.sample(p, link, rng, size=n))
        grid = channel.cdf(p, link, draws)
        i = np.arange(1, n + 1)
        ks = max(float(np.max(i / n - grid)), float(np.max(grid - (i - 1) / n)))
        assert ks < 0.01, (p.m, ks)


def _check_staircase_limit():
    link = LinkSNR(10.0)
    fx = lambda x: channel.cdf(HEAVY_SHADOWING, link, x)
    fy = lambda y: channel.cdf(AVERAGE_SHADOWING, link, y)
    g = 1.0
    got = outage.staircase_probability(fx, fy, g, g, 1e-12, StaircaseConfig(50, 15.0))
    a, b = fx(np.asarray([g]))[0], fy(np.asarray([g]))[0]
    want = a + b - a * b
    assert abs(got - want) < 1e-6, (got, want)


def _check_sc_product():
    thr = Threshold(gamma_th=1.0)
    cfg = StaircaseConfig(50, 15.0)
    link = LinkSNR(8.0)
    hop = HopPair(ns=(HEAVY_SHADOWING, link), sg=(AVERAGE_SHADOWING, link))
    single = outage.op_ss(hop, thr, cfg)
    combined = outage.op_sc([hop] * 5, thr, cfg)
    assert abs(combined - single**5) / combined < 1e-12


def _check_ordering():
    thr = Threshold(gamma_th=1.0)
    cfg = StaircaseConfig(50, 15.0)
    link = LinkSNR.from_db(8.0)
    hop = HopPair(ns=(HEAVY_SHADOWING, link), sg=(HEAVY_SHADOWING, link))
    hops = [hop] * 5
    ss = outage.op_ss(hop, thr, cfg)
    sc = outage.op_sc(hops, thr, cfg)
    mrc = outage.op_mrc(hops, thr, cfg)
    assert mrc < sc < ss, (mrc, sc, ss)


def _check_staircase_mc():
    # Config chosen where the staircase approximation error is well below
    # the Monte Carlo noise at 1e6 trials (verified against quadrature).
    thr = Threshold(gamma_th=1.0)
    cfg = StaircaseConfig(50, 15.0)
    link = LinkSNR.from_db(4.0)
    hop = HopPair(ns=(HEAVY_SHADOWING, link), sg=(HEAVY_SHADOWING, link))
    analytic = outage.op_ss(hop, thr, cfg)
    est = mcsim.simulate_ss(hop, thr, MCConfig(trials=1_000_000, seed=99))
    assert est.ci_low <= analytic <= est.ci_high, (analytic, est)


def _check_linkbudget():
    base = linkbudget.LinkBudget(
        altitude_km=800.0,
        frequency_hz=950e6,
        elevation_deg=30.0,
        eirp_dbm=23.0,
        g_over_t_dbk=-10.0,
        bandwidth_hz=15e3,
    )
    from dataclasses import replace

    ref = linkbudget.snr_db(base)
    assert linkbudget.snr_db(replace(base, g_over_t_dbk=-9.0)) > ref
    assert linkbudget.snr_db(replace(base, bandwidth_hz=30e3)) < ref
    assert linkbudget.snr_db(replace(base, frequency_hz=2e9)) < ref
    assert linkbudget.slant_range_km(800.0, 90.0) == 800.0
    lo, hi = linkbudget.feasible_range(linkbudget.reference_grid())
    assert lo < hi


def _check_mc_determinism():
    thr = Threshold(gamma_th=1.0)
    link = LinkSNR(5.0)
    hop = HopPair(ns=(HEAVY_SHADOWING, link), sg=(HEAVY_SHADOWING, link))
    cfg = MCConfig(trials=300_000, seed=77)
    a = mcsim.simulate_sc([hop] * 3, thr, cfg, workers=1)
    b = mcsim.simulate_sc([hop] * 3, thr, cfg, workers=4)
    assert a == b, (a, b)


def run_checks(verbose: bool = False) -> list[str]:
    """Run every cross-check; returns the names of failing checks."""
    failures = []
    for name, fn in _checks():
        try:
            fn()
        except Exception as exc:
            failures.append(name)
            if verbose:
                print(f"FAIL {name}: {exc}")
        else:
            if verbose:
                print(f"PASS {name}")
    if verbose:
        total = len(list(_checks()))
        print(f"{total - len(failures)}/{total} checks passed")
    return failures
