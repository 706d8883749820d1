import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest

import constelsim.channel as channel
from constelsim.channel import (
    CosinePattern,
    FlatTopPattern,
    GaussianPattern,
    LinkParams,
    SeriesConvergenceError,
    SincPattern,
    SrFadingParams,
    effective_beam_range,
    received_power,
    rx_gain,
    sr_cdf,
    sr_pdf,
    sr_sample,
)
from constelsim.constellation import derive_rng

BASE = SrFadingParams(m=19.4, b0=0.158, omega=1.29)


class TestSrCdf:
    def test_zero(self):
        assert sr_cdf(BASE, 0.0) == 0.0

    def test_saturates_to_one(self):
        assert sr_cdf(BASE, 1000.0 * BASE.mean_power) == pytest.approx(1.0, abs=1e-9)

    def test_matches_density_quadrature(self):
        want, _ = quad(lambda w: sr_pdf(BASE, w), 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
        got = sr_cdf(BASE, 1.0)
        assert 0.0 < got < 1.0
        assert got == pytest.approx(want, abs=1e-8)

    def test_non_decreasing(self):
        grid = np.linspace(0.0, 8.0, 300)
        values = sr_cdf(BASE, grid)
        assert np.all(np.diff(values) >= -1e-14)

    def test_truncation_control(self):
        for w in (0.3, 1.0, 2.7):
            assert sr_cdf(BASE, w, tol=1e-12) == pytest.approx(sr_cdf(BASE, w, tol=1e-9), abs=1e-9)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            sr_cdf(BASE, -0.1)

    def test_convergence_guard(self, monkeypatch):
        monkeypatch.setattr(channel, "_MAX_SERIES_TERMS", 4)
        with pytest.raises(SeriesConvergenceError):
            sr_cdf(BASE, 1.0)


class TestSrPdf:
    def test_normalization(self):
        total, _ = quad(lambda w: sr_pdf(BASE, w), 0.0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=200)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_finite_difference_of_cdf(self):
        h = 1e-6
        for w in (0.1, 0.5, 1.0, 2.0):
            fd = (sr_cdf(BASE, w + h) - sr_cdf(BASE, w - h)) / (2 * h)
            assert sr_pdf(BASE, w) == pytest.approx(fd, rel=1e-6)

    def test_no_line_of_sight_is_exponential(self):
        p = SrFadingParams(m=19.4, b0=0.158, omega=0.0)
        for w in (0.05, 0.4, 1.3):
            assert sr_pdf(p, w) == pytest.approx(math.exp(-w / 0.316) / 0.316, rel=1e-12)
            assert sr_cdf(p, w) == pytest.approx(1 - math.exp(-w / 0.316), rel=1e-12)

    def test_non_negative_and_vectorized(self):
        grid = np.linspace(0.0, 20.0, 500)
        values = sr_pdf(BASE, grid)
        assert values.shape == grid.shape
        assert np.all(values >= 0.0)

    def test_huge_argument_underflows_to_zero(self):
        assert sr_pdf(BASE, 1e9) == 0.0


class TestSrSample:
    def test_matches_cdf(self):
        draws = sr_sample(BASE, derive_rng(123), size=200_000)
        stat = kstest(draws, lambda w: sr_cdf(BASE, w)).statistic
        assert stat < 0.004

    def test_mean(self):
        draws = sr_sample(BASE, derive_rng(5), size=400_000)
        se = draws.std() / math.sqrt(draws.size)
        assert abs(draws.mean() - BASE.mean_power) < 3 * se

    def test_vanishing_scatter_leaves_line_of_sight(self):
        # b0 -> 0 collapses W onto the squared Nakagami amplitude,
        # a Gamma(m, omega/m) with variance omega^2/m
        p = SrFadingParams(m=19.4, b0=1e-12, omega=1.29)
        draws = sr_sample(p, derive_rng(6), size=100_000)
        assert draws.mean() == pytest.approx(1.29, rel=0.01)
        assert draws.var() == pytest.approx(1.29**2 / 19.4, rel=0.05)

    def test_scalar_draw(self):
        w = sr_sample(BASE, derive_rng(7))
        assert isinstance(w, float) and w >= 0


PATTERNS = [
    GaussianPattern(phi_3db=0.13962634015954636),
    FlatTopPattern(phi_3db=0.13962634015954636),
    SincPattern(n_elements=35),
    CosinePattern(n_elements=35),
]


class TestPatterns:
    def test_boresight(self):
        for pat in PATTERNS:
            assert rx_gain(pat, 1513.56, 0.0) == pytest.approx(1513.56, rel=1e-12)

    def test_gaussian_half_power(self):
        pat = PATTERNS[0]
        assert rx_gain(pat, 2.0, pat.phi_3db) == pytest.approx(1.0, rel=1e-12)

    def test_gaussian_effective_edge_gain(self):
        pat = PATTERNS[0]
        assert rx_gain(pat, 1.0, 3 * pat.phi_3db) == pytest.approx(2.0**-9, rel=1e-12)

    def test_sinc_null(self):
        assert rx_gain(PATTERNS[2], 7.0, 1.0 / 35) == pytest.approx(0.0, abs=1e-25)

    def test_even_and_bounded(self):
        phis = np.linspace(-1.5, 1.5, 301)
        for pat in PATTERNS:
            g = rx_gain(pat, 3.3, phis)
            assert np.all(g <= 3.3 + 1e-12)
            assert np.allclose(g, g[::-1], atol=1e-15)

    def test_effective_ranges(self):
        assert effective_beam_range(PATTERNS[0]) == pytest.approx(0.41887902047863905)
        assert effective_beam_range(PATTERNS[1]) == pytest.approx(0.13962634015954636)
        assert effective_beam_range(PATTERNS[2]) == pytest.approx(3.0 / 35)
        assert effective_beam_range(PATTERNS[3]) == pytest.approx(1.0 / 35)

    def test_validation(self):
        with pytest.raises(ValueError):
            GaussianPattern(0.0)
        with pytest.raises(ValueError):
            SincPattern(0)


LINK = LinkParams(
    tx_power_w=10 ** 1.5,
    tx_gain=10 ** 3.38,
    max_rx_gain=10 ** 3.18,
    wavelength_m=0.015,
    system_loss=10 ** -0.6,
    noise_power_w=10 ** -9.02 * 1e-3,
    sinr_threshold=10.0,
)


class TestReceivedPower:
    def test_zero_fading(self):
        assert received_power(LINK, LINK.max_rx_gain, 1e6, 0.0) == 0.0

    def test_inverse_square(self):
        near = received_power(LINK, LINK.max_rx_gain, 1e6, 1.0)
        far = received_power(LINK, LINK.max_rx_gain, 2e6, 1.0)
        assert near == pytest.approx(4 * far, rel=1e-12)

    def test_decibel_arithmetic(self):
        # budget at 1000 km, boresight, unit fading, assembled in dB
        got = received_power(LINK, LINK.max_rx_gain, 1e6, 1.0)
        db = (
            15.0 + 33.8 + 31.8 - 6.0
            + 20 * math.log10(0.015 / (4 * math.pi))
            - 20 * math.log10(1e6)
        )
        assert 10 * math.log10(got) == pytest.approx(db, abs=1e-9)

    def test_rejects_zero_distance(self):
        with pytest.raises(ValueError):
            received_power(LINK, 1.0, 0.0, 1.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            LinkParams(0.0, 1.0, 1.0, 0.015, 1.0, 1e-12, 1.0)


class TestFadingParamValidation:
    def test_rejects_bad(self):
        with pytest.raises(ValueError):
            SrFadingParams(m=0.0, b0=0.1, omega=1.0)
        with pytest.raises(ValueError):
            SrFadingParams(m=1.0, b0=0.0, omega=1.0)
        with pytest.raises(ValueError):
            SrFadingParams(m=1.0, b0=0.1, omega=-1.0)
        with pytest.raises(ValueError):
            SrFadingParams(m=math.nan, b0=0.1, omega=1.0)
