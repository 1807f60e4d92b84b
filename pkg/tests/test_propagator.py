import numpy as np
import pytest
from hypothesis import given, strategies as st

from impactlab.orderflow import estimate_sign_corr, gen_signs
from impactlab.propagator import (
    ModelParams,
    build_price,
    critical_beta,
    make_kernel,
    predicted_response,
    response,
    signature_plot,
)
from impactlab.series import LagCurve, MarkSeries, PriceSeries, SignSeries, unit_marks


def one_trade_signs(n, at=0):
    # A single "effective" trade: all other trades carry negligible marks.
    signs = np.full(n, -1, dtype=np.int8)
    signs[at] = 1
    volumes = np.full(n, 1e-300)
    volumes[at] = 1.0
    spreads = np.ones(n)
    return SignSeries(signs), MarkSeries(spreads, volumes, psi=1.0)


# ---------------------------------------------------------------------------
# make_kernel
# ---------------------------------------------------------------------------


def test_permanent_kernel_is_constant():
    k = make_kernel("permanent", 5, g0=1.0)
    assert np.array_equal(k.g, np.ones(5))


def test_power_law_kernel_values():
    k = make_kernel("power_law", 4, beta=0.25, gamma0=1.0, ell0=0.0)
    expected = np.array([1.0, 2**-0.25, 3**-0.25, 4**-0.25])
    np.testing.assert_allclose(k.g, expected, rtol=1e-14)
    assert np.all(np.diff(k.g) <= 0)


def test_critical_beta_value():
    assert critical_beta(0.5) == pytest.approx(0.25)


def test_kernel_rejects_bad_params():
    with pytest.raises(ValueError):
        make_kernel("power_law", 10, beta=0.0)
    with pytest.raises(ValueError):
        make_kernel("power_law", 10, beta=-0.2)
    with pytest.raises(ValueError):
        make_kernel("exponential", 10, g0=1.0, tau=0.0)
    with pytest.raises(ValueError):
        make_kernel("permanent", 0, g0=1.0)
    with pytest.raises(ValueError):
        make_kernel("nope", 10)


def test_kernel_extension_per_family():
    k = make_kernel("power_law", 5, beta=0.5, gamma0=2.0, ell0=0.0)
    ext = k.extended(8)
    np.testing.assert_allclose(ext[:5], k.g)
    np.testing.assert_allclose(ext[5:], 2.0 * np.array([6.0, 7.0, 8.0]) ** -0.5)
    kt = make_kernel("tabulated", 3, values=[1.0, 0.5, 0.2])
    assert np.array_equal(kt.extended(5), [1.0, 0.5, 0.2, 0.0, 0.0])
    kp = make_kernel("permanent", 3, g0=0.7)
    assert np.array_equal(kp.extended(5), np.full(5, 0.7))


# ---------------------------------------------------------------------------
# build_price
# ---------------------------------------------------------------------------


def test_single_trade_price_follows_kernel():
    L, n = 6, 12
    k = make_kernel("power_law", L, beta=0.4, gamma0=1.0, ell0=0.0)
    signs, marks = one_trade_signs(n, at=0)
    p = build_price(signs, marks, k, p0=0.0)
    for t in range(1, L + 1):
        assert p.mid[t] == k.g[t - 1]
    for t in range(L + 1, n):
        assert p.mid[t] == pytest.approx(0.0, abs=1e-290)
    shifted = build_price(signs, marks, k, p0=10.0)
    np.testing.assert_allclose(shifted.mid, p.mid + 10.0, rtol=1e-12)


def test_two_trades_superpose():
    n, L = 16, 5
    k = make_kernel("exponential", L, g0=1.0, tau=2.0)
    s1, m1 = one_trade_signs(n, at=2)
    s2, m2 = one_trade_signs(n, at=7)
    signs = np.full(n, -1, dtype=np.int8)
    signs[2] = 1
    signs[7] = 1
    volumes = np.full(n, 1e-300)
    volumes[[2, 7]] = 1.0
    both = build_price(SignSeries(signs), MarkSeries(np.ones(n), volumes, psi=1.0), k)
    single = build_price(s1, m1, k).mid + build_price(s2, m2, k).mid
    np.testing.assert_allclose(both.mid, single, atol=1e-280)


def test_build_price_is_causal():
    n = 60
    rng = np.random.default_rng(2)
    signs = np.where(rng.random(n) < 0.5, -1, 1).astype(np.int8)
    k = make_kernel("power_law", 10, beta=0.3)
    full = build_price(SignSeries(signs), unit_marks(n), k)
    for m in (11, 25, 40):
        part = build_price(SignSeries(signs[:m]), unit_marks(m), k)
        np.testing.assert_array_equal(part.mid, full.mid[:m])


def test_permanent_kernel_random_walk_variance():
    # Monte-Carlo oracle: i.i.d. signs with a permanent kernel spanning the
    # whole series (no trade ever leaves the window) give
    # Var(p[n+l] - p[n]) = g0^2 * l.
    n = 200_000
    rng = np.random.default_rng(8)
    signs = SignSeries(np.where(rng.random(n) < 0.5, -1, 1).astype(np.int8))
    k = make_kernel("permanent", n, g0=1.5)
    p = build_price(signs, unit_marks(n), k)
    for lag in (1, 7, 30):
        d = p.mid[lag:] - p.mid[:-lag]
        assert d.var() == pytest.approx(1.5**2 * lag, rel=0.05)


def test_build_price_rejects_mismatch():
    k = make_kernel("permanent", 3, g0=1.0)
    with pytest.raises(ValueError):
        build_price(SignSeries(np.ones(5, dtype=np.int8)), unit_marks(4), k)
    with pytest.raises(ValueError):
        build_price(SignSeries(np.ones(2, dtype=np.int8)), unit_marks(2), k)


# ---------------------------------------------------------------------------
# response
# ---------------------------------------------------------------------------


def test_response_constant_buy_flow_permanent_kernel():
    n = 300
    k = make_kernel("permanent", n, g0=0.5)
    signs = SignSeries(np.ones(n, dtype=np.int8))
    p = build_price(signs, unit_marks(n), k)
    r = response(p, signs, 10)
    np.testing.assert_allclose(r.values[1:], 0.5 * np.arange(1, 11), rtol=1e-12)


def test_response_iid_signs_recovers_kernel():
    n, L = 400_000, 50
    rng = np.random.default_rng(13)
    signs = SignSeries(np.where(rng.random(n) < 0.5, -1, 1).astype(np.int8))
    k = make_kernel("power_law", L, beta=0.4)
    p = build_price(signs, unit_marks(n), k)
    r = response(p, signs, 20)
    resid = np.abs(r.values[1:] - k.g[:20])
    assert np.all(resid < 4 * r.stderr[1:])


def test_response_rejects_empty_overlap():
    p = PriceSeries(np.zeros(10))
    s = SignSeries(np.ones(10, dtype=np.int8))
    with pytest.raises(ValueError):
        response(p, s, 10)


# ---------------------------------------------------------------------------
# predicted_response
# ---------------------------------------------------------------------------


def test_predicted_response_reduces_to_kernel_without_correlation():
    L = 30
    k = make_kernel("power_law", L, beta=0.3)
    corr = LagCurve.model_curve(np.concatenate([[1.0], np.zeros(L)]))
    pred = predicted_response(k, corr, ModelParams(K=2.0, psi=0.0), 10)
    np.testing.assert_allclose(pred.values[1:], 2.0 * k.g[:10], rtol=1e-12)


def test_predicted_response_hand_computed_example():
    # Hand summation with g = [1.0, 0.7, 0.5], C(1) = 0.4, C(2) = 0.2:
    # value at lag 1 is 1.0 + (0.7-1.0)*0.4 + (0.5-0.7)*0.2 = 0.84.
    k = make_kernel("tabulated", 3, values=[1.0, 0.7, 0.5])
    corr = LagCurve.model_curve(np.array([1.0, 0.4, 0.2, 0.0]))
    pred = predicted_response(k, corr, ModelParams(K=1.0, psi=0.0), 3)
    assert pred.values[1] == pytest.approx(0.84, abs=1e-12)
    # lag 2: G(2) + G(1)C(1) + (G(3)-G(1))C(1) + (G(4)-G(2))C(2), G(4)=0
    expected2 = 0.7 + 1.0 * 0.4 + (0.5 - 1.0) * 0.4 + (0.0 - 0.7) * 0.2
    assert pred.values[2] == pytest.approx(expected2, abs=1e-12)


def test_predicted_response_needs_long_enough_corr():
    k = make_kernel("permanent", 10, g0=1.0)
    corr = LagCurve.model_curve(np.ones(5))
    with pytest.raises(ValueError):
        predicted_response(k, corr, ModelParams(K=1.0, psi=0.0), 5)
    corr_ok = LagCurve.model_curve(np.ones(11))
    with pytest.raises(ValueError):
        predicted_response(k, corr_ok, ModelParams(K=1.0, psi=0.0), 11)


def test_predicted_matches_empirical_on_simulation():
    # Simulation as oracle for the response decomposition, on a short run.
    n, L = 300_000, 400
    signs = gen_signs(n + L, gamma=0.5, c0=0.3, seed=17)
    vals = make_kernel("power_law", L, beta=0.25).g
    k = make_kernel("tabulated", L, values=vals)
    p = build_price(signs, unit_marks(n + L), k)
    s2 = SignSeries(signs.signs[L:])
    p2 = PriceSeries(p.mid[L:], p.mid[L])
    emp = response(p2, s2, 50)
    corr = estimate_sign_corr(s2, L)
    pred = predicted_response(k, corr, ModelParams(K=1.0, psi=0.0), 50)
    z = (emp.values[1:] - pred.values[1:]) / emp.stderr[1:]
    assert np.max(np.abs(z)) < 3.0


# ---------------------------------------------------------------------------
# signature_plot
# ---------------------------------------------------------------------------


def test_signature_flat_for_random_walk():
    rng = np.random.default_rng(4)
    steps = np.where(rng.random(300_000) < 0.5, -1.0, 1.0)
    p = PriceSeries(np.concatenate([[0.0], np.cumsum(steps)]))
    sig = signature_plot(p, 100)
    assert np.all(np.abs(sig.values[1:] - 1.0) < 0.05)
    assert np.isnan(sig.values[0])


def test_signature_superdiffusive_with_unscreened_memory():
    # gamma = 0.5 signs with permanent impact: variance ratio grows as l**0.5.
    from impactlab.calibration import fit_powerlaw

    n = 10**6
    signs = gen_signs(n, gamma=0.5, c0=0.3, seed=19)
    k = make_kernel("permanent", n, g0=1.0)
    p = build_price(signs, unit_marks(n), k)
    sig = signature_plot(p, 1000)
    fit = fit_powerlaw(sig, (10, 1000), n_bins=17)
    assert fit.exponent == pytest.approx(0.5, abs=0.1)


def test_signature_rejects_short_series():
    p = PriceSeries(np.arange(5, dtype=float))
    with pytest.raises(ValueError):
        signature_plot(p, 4)


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_truncating_input_never_changes_past_prices(seed):
    rng = np.random.default_rng(seed)
    n = 40
    signs = np.where(rng.random(n) < 0.5, -1, 1).astype(np.int8)
    k = make_kernel("power_law", 8, beta=0.35)
    full = build_price(SignSeries(signs), unit_marks(n), k)
    m = int(rng.integers(9, n))
    part = build_price(SignSeries(signs[:m]), unit_marks(m), k)
    np.testing.assert_array_equal(part.mid, full.mid[:m])
