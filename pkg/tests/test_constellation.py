import math

import numpy as np
import pytest
from scipy.stats import chisquare, ks_2samp

from constelsim.constellation import (
    LeoShellConfig,
    MeoShellConfig,
    central_angle_to_target,
    derive_rng,
    sample_bpp,
    sample_dsbpp,
)

LEO = LeoShellConfig(n_sats=2000, radius_km=7371.0, beam_angle=math.pi / 4)
MEO = MeoShellConfig(n_orbits=2, sats_per_orbit=6, radius_km=26371.0, beam_angle=math.pi / 6)


class TestBpp:
    def test_empty(self):
        cfg = LeoShellConfig(0, 7371.0, math.pi / 4)
        assert sample_bpp(cfg, derive_rng(1)).shape == (0, 3)

    def test_counts_and_norms(self):
        pts = sample_bpp(LEO, derive_rng(2))
        assert pts.shape == (2000, 3)
        norms = np.linalg.norm(pts, axis=1)
        assert np.max(np.abs(norms / 7371.0 - 1.0)) < 1e-12

    def test_mean_height_is_unbiased(self):
        # each coordinate of a uniform point has variance R^2/3
        pts = sample_bpp(LEO, derive_rng(3))
        sigma = 7371.0 / math.sqrt(3 * 2000)
        assert abs(pts[:, 2].mean()) < 3 * sigma

    def test_cap_count_fraction(self):
        # fraction within central angle theta of the target is the cap area
        rng = derive_rng(4)
        theta = 0.8
        want = 0.5 * (1 - math.cos(theta))
        hits = 0
        n_draws = 50
        for _ in range(n_draws):
            angles = central_angle_to_target(sample_bpp(LEO, rng))
            hits += int((angles <= theta).sum())
        total = n_draws * LEO.n_sats
        se = math.sqrt(want * (1 - want) / total)
        assert abs(hits / total - want) < 3 * se

    def test_determinism_and_stream_independence(self):
        a = sample_bpp(LEO, derive_rng(99, 5))
        b = sample_bpp(LEO, derive_rng(99, 5))
        c = sample_bpp(LEO, derive_rng(99, 6))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rotation_invariance(self):
        # angles to the pole and to an arbitrary direction follow one law
        pts = sample_bpp(LeoShellConfig(20000, 7371.0, math.pi / 4), derive_rng(8))
        pole = central_angle_to_target(pts, np.array([0.0, 0.0, 1.0]))
        skew_dir = np.array([1.0, 2.0, -0.5])
        skew_dir /= np.linalg.norm(skew_dir)
        skew = central_angle_to_target(pts, skew_dir)
        assert ks_2samp(np.cos(pole), np.cos(skew)).pvalue > 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            LeoShellConfig(-1, 7371.0, 1.0)
        with pytest.raises(ValueError):
            LeoShellConfig(10, 6000.0, 1.0)
        with pytest.raises(ValueError):
            LeoShellConfig(10, 7371.0, 7.0)


class TestDsbpp:
    def test_empty(self):
        cfg = MeoShellConfig(0, 6, 26371.0, math.pi / 6)
        assert sample_dsbpp(cfg, derive_rng(1)).shape == (0, 3)

    def test_counts_and_norms(self):
        pts = sample_dsbpp(MEO, derive_rng(2))
        assert pts.shape == (12, 3)
        norms = np.linalg.norm(pts, axis=1)
        assert np.max(np.abs(norms / 26371.0 - 1.0)) < 1e-9

    def test_orbit_coplanarity(self):
        # all points of one orbit lie in the plane of its first two points
        rng = derive_rng(3)
        for _ in range(20):
            pts = sample_dsbpp(MEO, rng)
            for orbit in range(MEO.n_orbits):
                block = pts[orbit * 6:(orbit + 1) * 6]
                normal = np.cross(block[0], block[1])
                norm = np.linalg.norm(normal)
                if norm < 1e-6:
                    continue
                offsets = np.abs(block @ (normal / norm))
                assert np.max(offsets) < 1e-9 * 26371.0

    def test_single_point_marginal_uniform(self):
        # one satellite on one random orbit is uniform on the sphere:
        # chi-square over 48 equal-area bins (8 height slices x 6 sectors)
        cfg = MeoShellConfig(1, 1, 26371.0, math.pi / 6)
        rng = derive_rng(4)
        n = 100_000
        pts = np.vstack([sample_dsbpp(cfg, rng) for _ in range(n)])
        z_bin = np.minimum((pts[:, 2] / 26371.0 + 1.0) / 2.0 * 8.0, 7.9999).astype(int)
        az = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi)
        az_bin = np.minimum(az / (2 * math.pi) * 6.0, 5.9999).astype(int)
        counts = np.bincount(z_bin * 6 + az_bin, minlength=48)
        assert chisquare(counts).pvalue > 0.01

    def test_determinism(self):
        a = sample_dsbpp(MEO, derive_rng(7, 1))
        b = sample_dsbpp(MEO, derive_rng(7, 1))
        assert np.array_equal(a, b)


class TestCentralAngle:
    def test_identities(self):
        d = np.array([1.0, 0.0, 0.0])
        assert central_angle_to_target(np.array([[5.0, 0.0, 0.0]]), d)[0] == pytest.approx(0.0)
        assert central_angle_to_target(np.array([[-2.0, 0.0, 0.0]]), d)[0] == pytest.approx(math.pi)
        assert central_angle_to_target(np.array([[0.0, 3.0, 0.0]]), d)[0] == pytest.approx(math.pi / 2)

    def test_single_vector(self):
        got = central_angle_to_target(np.array([0.0, 0.0, 2.0]), np.array([0.0, 0.0, 1.0]))
        assert got == pytest.approx(0.0)
