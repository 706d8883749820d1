"""Closed-form availability and localizability probabilities.

Availability counts satellites within the maximum detectable central angle:
binomial for the LEO shell (points are independent), binomial with an
orbit-averaged single-satellite probability for the MEO shell, and a
convolution of the two for hybrid constellations, truncated at the smallest
MEO count whose exceedance probability drops below ``epsilon``.

Localizability additionally requires each beam-associated satellite to clear
its layer's SINR threshold. LEO beams see a zero-or-one interferer mixture:
with probability ``p_zero`` no other satellite falls inside the receive
beam's effective range, otherwise a single interferer is placed uniformly in
that cap and its power is taken at the serving satellite's range. MEO beams
are noise limited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate, special
from scipy.stats import binom

from .channel import (
    AntennaPattern,
    LinkParams,
    SrFadingParams,
    effective_beam_range,
    sr_cdf,
    sr_pdf,
)
from .constellation import LeoShellConfig, MeoShellConfig
from .geom import (
    SphereGeometry,
    central_from_dome,
    dome_from_central,
    max_central_angle,
    max_detect_distance,
    max_orbit_central_angle,
)

KM_TO_M = 1e3


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, label: str, estimate: float, error: float, detail: str = ""):
        self.label = label
        self.estimate = estimate
        self.error = error
        msg = f"quadrature '{label}' did not converge: estimate {estimate}, error {error}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-8
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.relative_tolerance <= 0 or self.absolute_tolerance <= 0:
            raise ValueError("tolerances must be positive")

    def tighter(self, factor: float = 10.0) -> "QuadratureSpec":
        """Spec for an inner integral nested under this one."""
        return replace(
            self,
            relative_tolerance=self.relative_tolerance / factor,
            absolute_tolerance=self.absolute_tolerance / factor,
        )


DEFAULT_QUADRATURE = QuadratureSpec()


def integrate_adaptive(func, a: float, b: float, spec: QuadratureSpec, label: str, points=None) -> float:
    """Adaptive quadrature with an embedded error estimate; raises on failure."""
    out = integrate.quad(
        func, a, b,
        epsabs=spec.absolute_tolerance, epsrel=spec.relative_tolerance,
        limit=spec.max_subdivisions, full_output=True,
        points=points if (points and np.isfinite(b)) else None,
    )
    value, error = out[0], out[1]
    if len(out) > 3:
        raise QuadratureError(label, value, error, detail=str(out[3]))
    return value


@dataclass(frozen=True)
class SystemConfig:
    """Full two-layer system description, all linear units."""

    leo: LeoShellConfig
    meo: MeoShellConfig
    leo_link: LinkParams
    meo_link: LinkParams
    leo_fading: SrFadingParams
    meo_fading: SrFadingParams
    rx_pattern: AntennaPattern
    epsilon: float = 0.01

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def leo_geom(self) -> SphereGeometry:
        return SphereGeometry(self.leo.radius_km)

    @property
    def meo_geom(self) -> SphereGeometry:
        return SphereGeometry(self.meo.radius_km)

    @property
    def leo_theta_max(self) -> float:
        return max_central_angle(self.leo_geom, self.leo.beam_angle)

    @property
    def meo_theta_max(self) -> float:
        return max_central_angle(self.meo_geom, self.meo.beam_angle)

    @property
    def leo_d_max_km(self) -> float:
        return max_detect_distance(self.leo_geom, self.leo_theta_max)

    @property
    def meo_d_max_km(self) -> float:
        return max_detect_distance(self.meo_geom, self.meo_theta_max)


def _cap_fraction(theta: float) -> float:
    """Area fraction of the spherical cap with central half-angle theta."""
    return 0.5 * (1.0 - math.cos(theta))


def _slant_range_sq_m2(geom: SphereGeometry, theta) -> np.ndarray:
    rq, re = geom.shell_radius_km, geom.earth_radius_km
    d_sq_km2 = rq * rq + re * re - 2.0 * rq * re * np.cos(theta)
    return d_sq_km2 * KM_TO_M**2


def _snr_threshold_scale(link: LinkParams, geom: SphereGeometry, theta) -> np.ndarray:
    """Fading power that must be exceeded per watt of (interference + noise).

    The SINR condition 'received power over (I + noise) exceeds the
    threshold' rearranges to W > q(theta) * (I + noise) with this q.
    """
    q = (
        link.sinr_threshold
        * (4.0 * math.pi / link.wavelength_m) ** 2
        * _slant_range_sq_m2(geom, theta)
        / (link.tx_power_w * link.tx_gain * link.max_rx_gain * link.system_loss)
    )
    return q


# ---------------------------------------------------------------------------
# Availability
# ---------------------------------------------------------------------------

def leo_availability(config: SystemConfig, k_min: int) -> float:
    """Probability that at least ``k_min`` LEO satellites are detectable."""
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    if k_min == 0:
        return 1.0
    if k_min > config.leo.n_sats:
        return 0.0
    p = _cap_fraction(config.leo_theta_max)
    return float(binom.sf(k_min - 1, config.leo.n_sats, p))


def meo_single_availability(config: SystemConfig, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that one given MEO satellite is detectable, averaged over
    its orbit's attitude."""
    geom = config.meo_geom
    d_max = config.meo_d_max_km
    rq, re = geom.shell_radius_km, geom.earth_radius_km
    closest = (re * re + rq * rq - d_max * d_max) / (2.0 * re * rq)
    if closest >= 1.0:
        return 0.0
    half_window = math.acos(max(closest, -1.0))

    def integrand(theta):
        return max_orbit_central_angle(geom, theta, d_max) * math.sin(theta) / (4.0 * math.pi)

    return integrate_adaptive(
        integrand,
        math.pi / 2 - half_window,
        math.pi / 2 + half_window,
        quad_spec,
        label="meo single-satellite availability",
    )


def meo_availability(config: SystemConfig, k_min: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that at least ``k_min`` MEO satellites are detectable.

    Satellites are treated as independent with the orbit-averaged
    single-satellite probability; same-orbit correlation is ignored.
    """
    n = config.meo.n_sats
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    if k_min == 0:
        return 1.0
    if k_min > n:
        return 0.0
    p1 = meo_single_availability(config, quad_spec)
    return float(binom.sf(k_min - 1, n, p1))


def n_meo_max(config: SystemConfig, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> int:
    """Smallest satellite count whose exceedance probability is below epsilon.

    Convolution sums over MEO counts are truncated here; the neglected mass
    is at most epsilon.
    """
    p1 = meo_single_availability(config, quad_spec)
    return _n_meo_max_from_p(config.meo.n_sats, p1, config.epsilon)


def _n_meo_max_from_p(n: int, p1: float, epsilon: float) -> int:
    k = 0
    while k < n and binom.sf(k, n, p1) > epsilon:
        k += 1
    return k


def _hybrid_convolution(leo_tail, meo_pmf: np.ndarray, k_min: int, cutoff: int) -> float:
    """Mix a LEO tail function with a MEO count distribution.

    With ``j`` MEO satellites counted, the LEO layer must supply the
    remaining ``k_min - j``; counts beyond ``cutoff`` are dropped (their
    total mass is below epsilon by construction).
    """
    total = 0.0
    for j in range(0, min(k_min - 1, cutoff) + 1):
        total += leo_tail(k_min - j) * meo_pmf[j]
    if k_min <= cutoff:
        total += float(meo_pmf[k_min: cutoff + 1].sum())
    return total


def hybrid_availability(config: SystemConfig, k_min: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that LEO and MEO layers together provide ``k_min``
    detectable satellites."""
    if k_min < 1:
        raise ValueError("k_min must be at least 1")
    p1 = meo_single_availability(config, quad_spec)
    n = config.meo.n_sats
    cutoff = _n_meo_max_from_p(n, p1, config.epsilon)
    pmf = binom.pmf(np.arange(cutoff + 1), n, p1)

    def leo_tail(j):
        if j > config.leo.n_sats:
            return 0.0
        return leo_availability(config, j)

    return _hybrid_convolution(leo_tail, pmf, k_min, cutoff)


# ---------------------------------------------------------------------------
# Contact angle densities
# ---------------------------------------------------------------------------

def leo_contact_angle_pdf(config: SystemConfig, k: int, theta):
    """Density of the central angle to the k-th nearest LEO satellite.

    Derivative of the binomial occupancy CDF of the cap of half-angle theta;
    defective on [0, theta_max] (it integrates to the probability that a
    k-th satellite is detectable at all). Zero outside the support.
    """
    n = config.leo.n_sats
    if not 1 <= k <= n:
        raise ValueError(f"rank k must lie in [1, {n}]")
    theta = np.asarray(theta, dtype=float)
    p = 0.5 * (1.0 - np.cos(theta))
    log_comb = special.gammaln(n + 1) - special.gammaln(k + 1) - special.gammaln(n - k + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_body = math.log(k) + log_comb + (k - 1) * np.log(p) + (n - k) * np.log1p(-p)
        body = np.exp(log_body)
    # p = 0 only at theta = 0, where the k = 1 body tends to n and higher
    # ranks vanish; the sin factor zeroes the density either way.
    limit_at_zero = float(n) if k == 1 else 0.0
    density = np.where(p > 0, body, limit_at_zero) * 0.5 * np.sin(theta)
    in_support = (theta >= 0) & (theta <= config.leo_theta_max)
    out = np.where(in_support, density, 0.0)
    return float(out) if out.ndim == 0 else out


def meo_contact_angle_pdf(config: SystemConfig, theta):
    """Density of the central angle between one MEO satellite and the target.

    The orbit-attitude average collapses to the uniform-sphere law sin/2;
    defective on [0, theta_max] with total mass equal to the
    single-satellite availability.
    """
    theta = np.asarray(theta, dtype=float)
    in_support = (theta >= 0) & (theta <= config.meo_theta_max)
    out = np.where(in_support, 0.5 * np.sin(theta), 0.0)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Interference mixture
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterferenceMixture:
    """Aggregate LEO interference seen by one beam: an atom at zero plus a
    continuous part driven by a single in-beam interferer."""

    p_zero: float
    theta_d_max: float
    serving_angle: float
    watts_per_fading: float  # interference watts contributed per unit fading at boresight gain shape 1
    _config: SystemConfig
    _quad_spec: QuadratureSpec

    def _gain_shape(self, theta_i):
        phi = dome_from_central(self._config.leo_geom, theta_i)
        return float(self._config.rx_pattern.gain_shape(phi))

    def conditional_density(self, interference_w: float) -> float:
        """Density of the nonzero interference branch at ``interference_w``."""
        if interference_w < 0:
            raise ValueError("interference power must be non-negative")
        cap = 1.0 - math.cos(self.theta_d_max)
        fading = self._config.leo_fading

        def integrand(theta_i):
            shape = self._gain_shape(theta_i)
            if shape <= 0.0:
                return 0.0
            scale = 1.0 / (self.watts_per_fading * shape)
            return sr_pdf(fading, interference_w * scale) * scale * math.sin(theta_i) / cap

        return integrate_adaptive(
            integrand, 0.0, self.theta_d_max, self._quad_spec,
            label="conditional interference density",
        )


def interference_mixture(
    config: SystemConfig,
    serving_angle: float,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> InterferenceMixture:
    """Mixture describing aggregate LEO interference for a beam whose serving
    satellite sits at ``serving_angle``.

    The effective receive range (a dome angle) is mapped to the central-angle
    cap around the serving satellite; the interferer's path loss is taken at
    the serving satellite's own range, which is the narrow-beam
    approximation.
    """
    if not 0 <= serving_angle <= config.leo_theta_max:
        raise ValueError("serving angle outside the detectable range")
    geom = config.leo_geom
    theta_d = central_from_dome(geom, effective_beam_range(config.rx_pattern))
    p_zero = (0.5 * (1.0 + math.cos(theta_d))) ** config.leo.n_sats
    link = config.leo_link
    # One unit of fading power at gain shape 1 lands this many watts.
    watts_per_fading = (
        link.tx_power_w * link.tx_gain * link.max_rx_gain * link.system_loss
        * (link.wavelength_m / (4.0 * math.pi)) ** 2
        / float(_slant_range_sq_m2(geom, serving_angle))
    )
    return InterferenceMixture(
        p_zero=p_zero,
        theta_d_max=theta_d,
        serving_angle=serving_angle,
        watts_per_fading=watts_per_fading,
        _config=config,
        _quad_spec=quad_spec,
    )


# ---------------------------------------------------------------------------
# Localizability
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _fading_upper_bound(fading: SrFadingParams) -> float:
    """w beyond which the fading survival probability is below 1e-11."""
    hi = fading.mean_power
    while sr_cdf(fading, hi) < 1.0 - 1e-11:
        hi *= 2.0
    return hi


@lru_cache(maxsize=32)
def _fading_rule(fading: SrFadingParams, n_nodes: int = 64) -> tuple:
    """Gauss-Legendre rule for expectations against the fading density.

    Returns nodes w_j and weights that absorb the density, so
    E[phi(W)] = sum_j weight_j * phi(w_j) for smooth phi, up to the truncated
    tail mass (< 1e-11) and the rule's own error; verified against adaptive
    quadrature in the test suite.
    """
    w_hi = _fading_upper_bound(fading)
    nodes, gl_weights = np.polynomial.legendre.leggauss(n_nodes)
    w = 0.5 * w_hi * (nodes + 1.0)
    weights = 0.5 * w_hi * gl_weights * sr_pdf(fading, w)
    return w, weights


def _leo_sinr_pass_function(config: SystemConfig, quad_spec: QuadratureSpec):
    """Build P_pass(theta): probability that a LEO beam served from central
    angle theta clears the SINR threshold under the interference mixture.

    The interferer's contribution enters the threshold argument as
    gamma * gain_shape(dome(theta_i)) * W_i, with path loss taken at the
    serving range. The interferer-angle integral is adaptive at 10x tighter
    tolerance; the expectation over the interferer's fading uses the
    fixed fading rule, vectorized over its nodes.
    """
    geom = config.leo_geom
    fading = config.leo_fading
    link = config.leo_link
    gamma = link.sinr_threshold
    theta_d = central_from_dome(geom, effective_beam_range(config.rx_pattern))
    p_zero = (0.5 * (1.0 + math.cos(theta_d))) ** config.leo.n_sats
    cap = 1.0 - math.cos(theta_d)
    inner_spec = quad_spec.tighter()
    w_nodes, w_weights = _fading_rule(fading)

    def survival_with_interferer(x: float, theta_i: float) -> float:
        shape = float(config.rx_pattern.gain_shape(dome_from_central(geom, theta_i)))
        if shape <= 0.0:
            return 1.0 - sr_cdf(fading, x)
        survival = 1.0 - sr_cdf(fading, x + gamma * shape * w_nodes)
        return float(np.dot(w_weights, survival))

    def p_pass(theta: float) -> float:
        x = float(_snr_threshold_scale(link, geom, theta)) * link.noise_power_w
        noise_only = 1.0 - sr_cdf(fading, x)
        if p_zero >= 1.0:
            return noise_only

        def over_angle(theta_i):
            return survival_with_interferer(x, theta_i) * math.sin(theta_i) / cap

        interfered = integrate_adaptive(
            over_angle, 0.0, theta_d, inner_spec,
            label="interferer angle expectation",
        )
        return p_zero * noise_only + (1.0 - p_zero) * interfered

    return p_pass


def leo_rank_coverage_probs(config: SystemConfig, k_max: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """Per-rank probabilities that the k-th nearest LEO satellite is
    detectable and clears the SINR threshold, for k = 1..k_max.

    All ranks share one adaptive pass so the expensive SINR factor is
    evaluated once per node.
    """
    n = config.leo.n_sats
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    ranks = [k for k in range(1, min(k_max, n) + 1)]
    if not ranks:
        return np.zeros(k_max)
    p_pass = _leo_sinr_pass_function(config, quad_spec)
    theta_max = config.leo_theta_max

    def integrand(theta):
        densities = np.array([leo_contact_angle_pdf(config, k, theta) for k in ranks])
        return densities * p_pass(theta)

    result, err_est, info = integrate.quad_vec(
        integrand, 0.0, theta_max,
        epsabs=quad_spec.absolute_tolerance, epsrel=quad_spec.relative_tolerance,
        limit=quad_spec.max_subdivisions, full_output=True,
    )
    if not info.success:
        raise QuadratureError("rank coverage", float(np.max(result)), float(err_est))
    out = np.zeros(k_max)
    out[: len(ranks)] = np.clip(result, 0.0, 1.0)
    return out


def leo_localizability(config: SystemConfig, k_min: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that the k_min nearest LEO satellites all clear their
    SINR thresholds (per-rank probabilities multiplied)."""
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    if k_min == 0:
        return 1.0
    if k_min > config.leo.n_sats:
        return 0.0
    return float(np.prod(leo_rank_coverage_probs(config, k_min, quad_spec)))


def meo_single_localizability(config: SystemConfig, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that one MEO satellite is detectable and clears its
    (noise-limited) SNR threshold."""
    geom = config.meo_geom
    link = config.meo_link
    fading = config.meo_fading
    theta_max = config.meo_theta_max
    if theta_max <= 0:
        return 0.0

    def integrand(theta):
        x = float(_snr_threshold_scale(link, geom, theta)) * link.noise_power_w
        return 0.5 * math.sin(theta) * (1.0 - sr_cdf(fading, x))

    return integrate_adaptive(integrand, 0.0, theta_max, quad_spec, label="meo single-satellite localizability")


def meo_localizability(config: SystemConfig, k_min: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that at least ``k_min`` MEO satellites are localizable."""
    n = config.meo.n_sats
    if k_min < 0:
        raise ValueError("k_min must be non-negative")
    if k_min == 0:
        return 1.0
    if k_min > n:
        return 0.0
    p1 = meo_single_localizability(config, quad_spec)
    return float(binom.sf(k_min - 1, n, p1))


def hybrid_localizability(config: SystemConfig, k_min: int, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Localizability of the two-layer system: MEO satellites are used first,
    LEO ranks fill the remainder; same convolution and truncation as
    hybrid availability."""
    if k_min < 1:
        raise ValueError("k_min must be at least 1")
    n = config.meo.n_sats
    p1_avail = meo_single_availability(config, quad_spec)
    cutoff = _n_meo_max_from_p(n, p1_avail, config.epsilon)
    p1_loc = meo_single_localizability(config, quad_spec)
    pmf = binom.pmf(np.arange(cutoff + 1), n, p1_loc)

    max_leo_rank = min(k_min, config.leo.n_sats)
    if max_leo_rank >= 1:
        rank_probs = leo_rank_coverage_probs(config, max_leo_rank, quad_spec)
        leo_products = np.concatenate([[1.0], np.cumprod(rank_probs)])
    else:
        leo_products = np.array([1.0])

    def leo_tail(j):
        if j > config.leo.n_sats:
            return 0.0
        return float(leo_products[j])

    return _hybrid_convolution(leo_tail, pmf, k_min, cutoff)
