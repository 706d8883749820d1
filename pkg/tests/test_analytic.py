import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import binom, chisquare, kstest

import constelsim.analytic as an
from constelsim.analytic import QuadratureSpec, SystemConfig
from constelsim.channel import GaussianPattern, sr_cdf, sr_pdf
from constelsim.config import build_system_config, default_config, load_settings
from constelsim.constellation import (
    LeoShellConfig,
    MeoShellConfig,
    central_angle_to_target,
    derive_rng,
    sample_bpp,
    sample_dsbpp,
)

CFG = default_config()


def config_with(**settings_overrides) -> SystemConfig:
    return build_system_config(load_settings(overrides=settings_overrides))


def with_leo_threshold(cfg, gamma):
    return replace(cfg, leo_link=replace(cfg.leo_link, sinr_threshold=gamma))


def with_meo_threshold(cfg, gamma):
    return replace(cfg, meo_link=replace(cfg.meo_link, sinr_threshold=gamma))


class TestLeoAvailability:
    def test_zero_level(self):
        assert an.leo_availability(CFG, 0) == 1.0

    def test_single_satellite(self):
        cfg = config_with(**{"leo.n_sats": "1"})
        p = 0.5 * (1 - math.cos(cfg.leo_theta_max))
        assert an.leo_availability(cfg, 1) == pytest.approx(p, rel=1e-12)

    def test_beyond_population(self):
        assert an.leo_availability(CFG, CFG.leo.n_sats + 1) == 0.0

    def test_baseline_matches_simulation(self):
        # counting oracle over full constellation draws
        rng = derive_rng(31)
        theta_max = CFG.leo_theta_max
        n_draws = 20_000
        hits = 0
        for _ in range(n_draws):
            angles = central_angle_to_target(sample_bpp(CFG.leo, rng))
            hits += int((angles <= theta_max).sum() >= 3)
        want = an.leo_availability(CFG, 3)
        assert want == pytest.approx(0.3706, abs=5e-4)
        se = math.sqrt(want * (1 - want) / n_draws)
        assert abs(hits / n_draws - want) < 3 * se

    def test_monotone_in_k_and_population(self):
        values = [an.leo_availability(CFG, k) for k in range(8)]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
        sizes = [100, 500, 1000, 2000, 4000]
        grown = [an.leo_availability(config_with(**{"leo.n_sats": str(n)}), 4) for n in sizes]
        assert all(b >= a - 1e-15 for a, b in zip(grown, grown[1:]))


def meo_exact_count_tail(cfg, k_min):
    """Independent oracle: exact count law of the orbit-based layer.

    Conditions on each orbit's attitude (per-orbit count is binomial in the
    visible arc fraction), integrates the attitude out, and convolves the
    orbits.
    """
    theta_max = cfg.meo_theta_max
    c0 = math.cos(theta_max)
    n_m = cfg.meo.sats_per_orbit

    def arc_fraction(u):
        s = math.sqrt(1 - u * u)
        return 0.0 if s <= c0 else math.acos(c0 / s) / math.pi

    edge = math.sqrt(1 - c0 * c0)
    pmf = np.array([
        quad(lambda u: binom.pmf(j, n_m, arc_fraction(u)) * 0.5, -1, 1,
             points=[-edge, edge], limit=400)[0]
        for j in range(n_m + 1)
    ])
    total = np.array([1.0])
    for _ in range(cfg.meo.n_orbits):
        total = np.convolve(total, pmf)
    return float(total[k_min:].sum())


class TestMeoAvailability:
    def test_single_satellite_value(self):
        p1 = an.meo_single_availability(CFG)
        assert p1 == pytest.approx(0.5 * (1 - math.cos(CFG.meo_theta_max)), abs=1e-9)
        assert p1 == pytest.approx(0.37920442910773194, abs=1e-9)

    def test_single_satellite_simulation(self):
        cfg = config_with(**{"meo.n_orbits": "1", "meo.sats_per_orbit": "1"})
        rng = derive_rng(17)
        n_draws = 150_000
        hits = 0
        for _ in range(n_draws):
            angle = central_angle_to_target(sample_dsbpp(cfg.meo, rng))[0]
            hits += angle <= cfg.meo_theta_max
        p1 = an.meo_single_availability(cfg)
        se = math.sqrt(p1 * (1 - p1) / n_draws)
        assert abs(hits / n_draws - p1) < 3 * se

    def test_never_exceeds_cap_mass(self):
        p1 = an.meo_single_availability(CFG)
        assert p1 <= 0.5 * (1 - math.cos(CFG.meo_theta_max)) + 1e-6

    def test_tiny_beam_empty_interval(self):
        cfg = config_with(**{"meo.beam_angle": "1e-5 rad"})
        assert an.meo_single_availability(cfg) == pytest.approx(0.0, abs=1e-9)

    def test_degenerate_counts(self):
        assert an.meo_availability(CFG, 0) == 1.0
        cfg = config_with(**{"meo.n_orbits": "1", "meo.sats_per_orbit": "1"})
        assert an.meo_availability(cfg, 1) == pytest.approx(an.meo_single_availability(cfg), rel=1e-10)

    def test_is_binomial_tail(self):
        p1 = an.meo_single_availability(CFG)
        for k in range(1, 7):
            assert an.meo_availability(CFG, k) == pytest.approx(float(binom.sf(k - 1, 12, p1)), rel=1e-12)

    def test_orbit_correlation_gap_is_as_documented(self):
        # the closed form ignores that same-orbit satellites share their
        # orbit's visibility arc; against the exact count law the error at
        # the baseline configuration peaks at K = 3
        gap_k3 = an.meo_availability(CFG, 3) - meo_exact_count_tail(CFG, 3)
        gap_k4 = an.meo_availability(CFG, 4) - meo_exact_count_tail(CFG, 4)
        assert gap_k3 == pytest.approx(0.0202, abs=0.002)
        assert gap_k4 == pytest.approx(0.0134, abs=0.002)

    def test_exact_for_one_satellite_per_orbit(self):
        # with one satellite per orbit there is nothing to correlate
        cfg = config_with(**{"meo.n_orbits": "12", "meo.sats_per_orbit": "1"})
        for k in (1, 3, 6):
            assert an.meo_availability(cfg, k) == pytest.approx(meo_exact_count_tail(cfg, k), abs=1e-7)


class TestNMeoMax:
    def test_baseline(self):
        # direct tail oracle: smallest count with exceedance below 1%
        p1 = an.meo_single_availability(CFG)
        k = 0
        while float(binom.sf(k, 12, p1)) > 0.01:
            k += 1
        assert k == 9
        assert an.n_meo_max(CFG) == 9

    def test_no_availability(self):
        cfg = config_with(**{"meo.beam_angle": "1e-5 rad"})
        assert an.n_meo_max(cfg) == 0

    def test_loose_epsilon(self):
        cfg = replace(CFG, epsilon=0.999)
        assert an.n_meo_max(cfg) == 0


class TestHybridAvailability:
    def test_reduces_to_leo(self):
        cfg = config_with(**{"meo.n_orbits": "0"})
        for k in (1, 3, 6):
            assert an.hybrid_availability(cfg, k) == pytest.approx(an.leo_availability(cfg, k), rel=1e-12)

    def test_reduces_to_meo_within_epsilon(self):
        cfg = config_with(**{"leo.n_sats": "0"})
        for k in (1, 3, 6):
            hybrid = an.hybrid_availability(cfg, k)
            meo = an.meo_availability(cfg, k)
            assert meo - cfg.epsilon <= hybrid <= meo + 1e-12

    def test_dominates_both_layers(self):
        for k in (1, 3, 6):
            hybrid = an.hybrid_availability(CFG, k)
            assert hybrid >= an.leo_availability(CFG, k) - CFG.epsilon
            assert hybrid >= an.meo_availability(CFG, k) - CFG.epsilon

    def test_monotone_in_k(self):
        values = [an.hybrid_availability(CFG, k) for k in range(1, 8)]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_rejects_zero_level(self):
        with pytest.raises(ValueError):
            an.hybrid_availability(CFG, 0)


def sum_form_contact_pdf(n, k, theta):
    """The rank density assembled term by term from the occupancy CDF
    derivative, kept numerically stable through binomial pmf factors."""
    c = math.cos(theta)
    p = 0.5 * (1 - c)
    if p <= 0.0:
        return 0.0 if k > 1 else n * 0.5 * math.sin(theta) * (0.5 * (1 + c)) ** (n - 1)
    total = 0.0
    for j in range(k):
        bracket = (n - j) / (1 + c) - j / (1 - c)
        total += float(binom.pmf(j, n, p)) * bracket
    return math.sin(theta) * total


class TestContactAngles:
    def test_matches_sum_form(self):
        n = CFG.leo.n_sats
        grid = np.linspace(1e-4, CFG.leo_theta_max, 40)
        for k in (1, 2, 4, 6):
            for theta in grid:
                want = sum_form_contact_pdf(n, k, float(theta))
                got = an.leo_contact_angle_pdf(CFG, k, float(theta))
                assert got == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_rank_one_closed_form(self):
        n = CFG.leo.n_sats
        for theta in (0.001, 0.01, 0.05):
            want = n * 0.5 * math.sin(theta) * (0.5 * (1 + math.cos(theta))) ** (n - 1)
            assert an.leo_contact_angle_pdf(CFG, 1, theta) == pytest.approx(want, rel=1e-10)

    def test_zero_angle(self):
        assert an.leo_contact_angle_pdf(CFG, 1, 0.0) == 0.0
        assert an.leo_contact_angle_pdf(CFG, 3, 0.0) == 0.0

    def test_mass_equals_availability(self):
        # defective density: total mass is the k-availability tail
        for k in (1, 2, 5):
            mass, _ = quad(lambda t: an.leo_contact_angle_pdf(CFG, k, t), 0, CFG.leo_theta_max,
                           epsabs=1e-12, epsrel=1e-10, limit=200)
            assert mass == pytest.approx(an.leo_availability(CFG, k), abs=1e-6)
        closed = 1 - (0.5 * (1 + math.cos(CFG.leo_theta_max))) ** CFG.leo.n_sats
        mass1, _ = quad(lambda t: an.leo_contact_angle_pdf(CFG, 1, t), 0, CFG.leo_theta_max,
                        epsabs=1e-12, epsrel=1e-10, limit=200)
        assert mass1 == pytest.approx(closed, abs=1e-6)

    def test_histogram_of_ranked_angles(self):
        # small shell so the draws are cheap; compare binned counts of the
        # k-th nearest angle against the density by chi-square
        cfg = config_with(**{"leo.n_sats": "50", "leo.beam_angle": "170 deg"})
        theta_max = cfg.leo_theta_max
        rng = derive_rng(23)
        n_draws = 20_000
        ranked = {1: [], 2: [], 3: []}
        for _ in range(n_draws):
            angles = np.sort(central_angle_to_target(sample_bpp(cfg.leo, rng)))
            for k in ranked:
                if angles[k - 1] <= theta_max:
                    ranked[k].append(angles[k - 1])
        edges = np.linspace(0, theta_max, 13)
        for k, samples in ranked.items():
            samples = np.asarray(samples)
            observed, _ = np.histogram(samples, bins=edges)
            probs = np.array([
                quad(lambda t: an.leo_contact_angle_pdf(cfg, k, t), a, b, limit=100)[0]
                for a, b in zip(edges[:-1], edges[1:])
            ])
            expected = probs / probs.sum() * len(samples)
            keep = expected > 10
            assert chisquare(observed[keep], expected[keep] * observed[keep].sum() / expected[keep].sum()).pvalue > 0.01

    def test_meo_pdf_shape_and_mass(self):
        theta_max = CFG.meo_theta_max
        assert an.meo_contact_angle_pdf(CFG, 0.0) == 0.0
        assert an.meo_contact_angle_pdf(CFG, 0.5) == pytest.approx(0.5 * math.sin(0.5), rel=1e-12)
        assert an.meo_contact_angle_pdf(CFG, theta_max + 0.01) == 0.0
        mass, _ = quad(lambda t: an.meo_contact_angle_pdf(CFG, t), 0, theta_max,
                       epsabs=1e-12, epsrel=1e-10, limit=200)
        assert mass == pytest.approx(an.meo_single_availability(CFG), abs=1e-6)

    def test_meo_contact_angle_sampling(self):
        # one satellite's angle, conditioned on detectability, follows the
        # renormalized density
        cfg = config_with(**{"meo.n_orbits": "1", "meo.sats_per_orbit": "1"})
        theta_max = cfg.meo_theta_max
        rng = derive_rng(29)
        samples = []
        for _ in range(40_000):
            angle = float(central_angle_to_target(sample_dsbpp(cfg.meo, rng))[0])
            if angle <= theta_max:
                samples.append(angle)
        cap = 1 - math.cos(theta_max)

        def conditional_cdf(t):
            return np.clip((1 - np.cos(t)) / cap, 0.0, 1.0)

        assert kstest(np.asarray(samples), conditional_cdf).pvalue > 0.01

    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            an.leo_contact_angle_pdf(CFG, 0, 0.01)
        with pytest.raises(ValueError):
            an.leo_contact_angle_pdf(CFG, CFG.leo.n_sats + 1, 0.01)


class TestInterferenceMixture:
    def test_no_satellites(self):
        cfg = config_with(**{"leo.n_sats": "0"})
        assert an.interference_mixture(cfg, 0.0).p_zero == 1.0

    def test_baseline_values(self):
        mix = an.interference_mixture(CFG, 0.03)
        assert mix.theta_d_max == pytest.approx(0.059646355, abs=1e-8)
        assert mix.p_zero == pytest.approx(0.168788705, abs=1e-8)

    def test_empty_cap_fraction_by_simulation(self):
        # fraction of draws leaving a fixed cap of the interference radius
        # empty; the fixed direction plays the serving satellite
        mix = an.interference_mixture(CFG, 0.03)
        rng = derive_rng(41)
        cos_cut = math.cos(mix.theta_d_max)
        n_draws = 20_000
        empty = 0
        for _ in range(n_draws):
            pts = sample_bpp(CFG.leo, rng)
            cos_sep = pts[:, 2] / CFG.leo.radius_km
            empty += int(np.max(cos_sep) < cos_cut)
        se = math.sqrt(mix.p_zero * (1 - mix.p_zero) / n_draws)
        assert abs(empty / n_draws - mix.p_zero) < 3 * se

    def test_conditional_density_normalizes(self):
        spec = QuadratureSpec(1e-7, 1e-12, 200)
        mix = an.interference_mixture(CFG, 0.03, spec)
        scale = mix.watts_per_fading
        total, _ = quad(lambda u: mix.conditional_density(math.exp(u)) * math.exp(u),
                        math.log(scale) - 25, math.log(scale) + 6, limit=300)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_rejects_out_of_range_serving_angle(self):
        with pytest.raises(ValueError):
            an.interference_mixture(CFG, CFG.leo_theta_max + 0.01)


class TestFadingRule:
    def test_matches_adaptive_quadrature(self):
        fading = CFG.leo_fading
        nodes, weights = an._fading_rule(fading)
        assert float(weights.sum()) == pytest.approx(1.0, abs=1e-9)
        w_hi = an._fading_upper_bound(fading)
        for x, c in ((0.0, 0.5), (0.3, 2.0), (1.0, 10.0), (2.5, 0.01)):
            want, _ = quad(lambda w: sr_pdf(fading, w) * (1 - sr_cdf(fading, x + c * w)),
                           0, w_hi, epsabs=1e-13, epsrel=1e-11, limit=300)
            got = float(np.dot(weights, 1 - sr_cdf(fading, x + c * nodes)))
            assert got == pytest.approx(want, abs=1e-9)


class TestLeoLocalizability:
    def test_vanishing_threshold_gives_availability_product(self):
        cfg = with_leo_threshold(CFG, 1e-30)
        probs = an.leo_rank_coverage_probs(cfg, 4)
        for k in range(1, 5):
            assert probs[k - 1] == pytest.approx(an.leo_availability(CFG, k), abs=1e-6)

    def test_huge_threshold_kills_coverage(self):
        cfg = with_leo_threshold(CFG, 1e12)
        assert an.leo_localizability(cfg, 2) == pytest.approx(0.0, abs=1e-12)

    def test_rank_probs_decrease(self):
        probs = an.leo_rank_coverage_probs(CFG, 6)
        assert np.all(np.diff(probs) < 0)

    def test_rank_coverage_below_availability(self):
        probs = an.leo_rank_coverage_probs(CFG, 6)
        for k in range(1, 7):
            assert probs[k - 1] <= an.leo_availability(CFG, k) + 1e-9

    def test_trivial_levels(self):
        assert an.leo_localizability(CFG, 0) == 1.0
        assert an.leo_localizability(config_with(**{"leo.n_sats": "0"}), 1) == 0.0


class TestMeoLocalizability:
    def test_vanishing_threshold_gives_availability(self):
        cfg = with_meo_threshold(CFG, 1e-30)
        for k in (1, 4):
            assert an.meo_localizability(cfg, k) == pytest.approx(an.meo_availability(CFG, k), abs=1e-7)

    def test_huge_threshold(self):
        cfg = with_meo_threshold(CFG, 1e12)
        assert an.meo_localizability(cfg, 1) == pytest.approx(0.0, abs=1e-12)

    def test_single_below_availability(self):
        p1c = an.meo_single_localizability(CFG)
        assert p1c <= an.meo_single_availability(CFG)
        assert p1c == pytest.approx(0.3700, abs=2e-3)


class TestHybridLocalizability:
    def test_reduces_to_leo(self):
        cfg = config_with(**{"meo.n_orbits": "0"})
        got = an.hybrid_localizability(cfg, 3)
        assert got == pytest.approx(an.leo_localizability(cfg, 3), rel=1e-9)

    def test_reduces_to_meo_within_epsilon(self):
        cfg = config_with(**{"leo.n_sats": "0"})
        for k in (1, 4):
            hybrid = an.hybrid_localizability(cfg, k)
            meo = an.meo_localizability(cfg, k)
            assert meo - cfg.epsilon <= hybrid <= meo + 1e-9

    def test_below_hybrid_availability(self):
        for k in (1, 3, 6):
            assert an.hybrid_localizability(CFG, k) <= an.hybrid_availability(CFG, k) + 1e-9

    def test_monotone_in_k(self):
        values = [an.hybrid_localizability(CFG, k) for k in range(1, 7)]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


class TestQuadratureSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(relative_tolerance=0.0)

    def test_tighter(self):
        spec = QuadratureSpec(1e-6, 1e-10, 100)
        inner = spec.tighter()
        assert inner.relative_tolerance == pytest.approx(1e-7)
        assert inner.absolute_tolerance == pytest.approx(1e-11)
        assert inner.max_subdivisions == 100


class TestSystemConfigValidation:
    def test_epsilon_bounds(self):
        with pytest.raises(ValueError):
            replace(CFG, epsilon=0.0)
        with pytest.raises(ValueError):
            replace(CFG, epsilon=1.0)
