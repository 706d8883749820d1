"""Radio-layer models: shadowed-Rician fading, receive patterns, link budget.

Shadowed-Rician power fading describes a Nakagami-distributed line-of-sight
amplitude plus circular Gaussian scatter. Its CDF is the series

    F(w) = (2 b0 m / (2 b0 m + Omega))^m
           * sum_z (m)_z / z! * beta^z * P(z + 1, w / (2 b0)),

with beta = Omega / (2 b0 m + Omega) and P the regularized lower incomplete
gamma function; the density is its exact term-by-term derivative. Both series
are truncated by a geometric tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

_MAX_SERIES_TERMS = 10_000
_SERIES_TOL = 1e-12


class SeriesConvergenceError(RuntimeError):
    """Raised when the fading series fails to meet its tail bound."""


@dataclass(frozen=True)
class SrFadingParams:
    """Shadowed-Rician triple: Nakagami shape m, scatter half-power b0,
    line-of-sight average power omega."""

    m: float
    b0: float
    omega: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.m, self.b0, self.omega))):
            raise ValueError("fading parameters must be finite")
        if self.m <= 0 or self.b0 <= 0 or self.omega < 0:
            raise ValueError("require m > 0, b0 > 0, omega >= 0")

    @property
    def mean_power(self) -> float:
        return self.omega + 2.0 * self.b0

    @property
    def _beta(self) -> float:
        return self.omega / (2.0 * self.b0 * self.m + self.omega)

    @property
    def _log_prefactor(self) -> float:
        return self.m * math.log(2.0 * self.b0 * self.m / (2.0 * self.b0 * self.m + self.omega))


@dataclass(frozen=True)
class LinkParams:
    """One layer's link budget, all linear units (W, m, ratios)."""

    tx_power_w: float
    tx_gain: float
    max_rx_gain: float
    wavelength_m: float
    system_loss: float
    noise_power_w: float
    sinr_threshold: float

    def __post_init__(self):
        values = (
            self.tx_power_w, self.tx_gain, self.max_rx_gain, self.wavelength_m,
            self.system_loss, self.noise_power_w, self.sinr_threshold,
        )
        if not all(math.isfinite(v) and v > 0 for v in values):
            raise ValueError("link parameters must be positive and finite")


def _series_coeffs(params: SrFadingParams, z: np.ndarray) -> np.ndarray:
    """log of (m)_z / z! * beta^z, Pochhammer via log-gamma (m need not be
    an integer)."""
    m = params.m
    beta = params._beta
    log_poch = special.gammaln(m + z) - special.gammaln(m) - special.gammaln(z + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_beta_pow = np.where(z == 0, 0.0, z * (math.log(beta) if beta > 0 else -np.inf))
    return log_poch + log_beta_pow


def _sr_series(params: SrFadingParams, w, density: bool, tol: float) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("fading power must be non-negative")
    shape = w.shape
    x = np.ravel(w / (2.0 * params.b0))
    if x.size == 0:
        return np.zeros(shape)
    beta = params._beta
    prefactor = math.exp(params._log_prefactor)
    if density:
        # The density is bounded by exp(-x (1 - beta)) times slowly varying
        # factors; past this point it underflows and the series would churn.
        x_cut = (745.0 + 200.0 + abs(params._log_prefactor)) / (1.0 - beta)
        if np.any(x > x_cut):
            out = np.zeros(x.size)
            live = x <= x_cut
            if live.any():
                out[live] = _sr_series(params, 2.0 * params.b0 * x[live], density=True, tol=tol)
            return out.reshape(shape)
    x_max = float(np.max(x))
    total = np.zeros_like(x)
    block = 16
    z0 = 0
    while z0 < _MAX_SERIES_TERMS:
        z = np.arange(z0, z0 + block, dtype=float)
        log_c = _series_coeffs(params, z)
        if density:
            # d/dw P(z+1, x) = x^z e^{-x} / Gamma(z+1) / (2 b0)
            with np.errstate(divide="ignore", invalid="ignore"):
                log_x_pow = np.where(z[:, None] == 0, 0.0, z[:, None] * np.log(np.where(x > 0, x, 1.0)))
                log_x_pow = np.where((z[:, None] > 0) & (x == 0), -np.inf, log_x_pow)
            log_term = (
                log_c[:, None] + log_x_pow - x[None, :]
                - special.gammaln(z + 1.0)[:, None] - math.log(2.0 * params.b0)
            )
            terms = np.exp(log_term)
        else:
            terms = np.exp(log_c)[:, None] * special.gammainc(z[:, None] + 1.0, x[None, :])
        total += terms.sum(axis=0)
        z_next = z0 + block
        # Successive terms shrink at least geometrically once this ratio
        # drops below one; the remaining tail is then bounded by the last
        # term times ratio / (1 - ratio).
        ratio = beta * (params.m + z_next) / (z_next + 1.0)
        if density:
            ratio = ratio * x_max / (z_next + 1.0)
        if ratio < 1.0:
            tail_bound = prefactor * float(np.max(terms[-1])) * ratio / (1.0 - ratio)
            if tail_bound <= tol:
                return (prefactor * total).reshape(shape)
        z0 = z_next
    raise SeriesConvergenceError(
        f"shadowed-Rician series did not converge within {_MAX_SERIES_TERMS} terms"
    )


def sr_cdf(params: SrFadingParams, w, tol: float = _SERIES_TOL):
    """CDF of the shadowed-Rician power fading, elementwise over ``w``."""
    out = np.minimum(_sr_series(params, w, density=False, tol=tol), 1.0)
    return float(out) if np.isscalar(w) or np.ndim(w) == 0 else out


def sr_pdf(params: SrFadingParams, w, tol: float = _SERIES_TOL):
    """Density of the shadowed-Rician power fading, elementwise over ``w``."""
    out = _sr_series(params, w, density=True, tol=tol)
    return float(out) if np.isscalar(w) or np.ndim(w) == 0 else out


def sr_sample(params: SrFadingParams, rng: np.random.Generator, size=None):
    """Draw fading powers W = |a + n|^2 with a Nakagami-m line-of-sight
    amplitude (E[a^2] = omega) and complex scatter of per-component
    variance b0. The power so built has exactly the CDF of :func:`sr_cdf`."""
    shape = () if size is None else size
    los_power = rng.gamma(shape=params.m, scale=params.omega / params.m, size=shape) \
        if params.omega > 0 else np.zeros(shape)
    amp = np.sqrt(los_power)
    scale = math.sqrt(params.b0)
    re = amp + scale * rng.standard_normal(shape)
    im = scale * rng.standard_normal(shape)
    w = re * re + im * im
    return float(w) if size is None else w


# ---------------------------------------------------------------------------
# Receive antenna patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianPattern:
    """Gaussian main lobe, half-power beamwidth phi_3db."""

    phi_3db: float

    def __post_init__(self):
        if self.phi_3db <= 0:
            raise ValueError("phi_3db must be positive")

    def gain_shape(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.exp2(-(phi / self.phi_3db) ** 2)

    @property
    def effective_range(self) -> float:
        # Beyond 3 beamwidths the gain has fallen by 2^-9.
        return 3.0 * self.phi_3db


@dataclass(frozen=True)
class FlatTopPattern:
    phi_3db: float

    def __post_init__(self):
        if self.phi_3db <= 0:
            raise ValueError("phi_3db must be positive")

    def gain_shape(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.where(np.abs(phi) <= self.phi_3db, 1.0, 0.0)

    @property
    def effective_range(self) -> float:
        return self.phi_3db


@dataclass(frozen=True)
class SincPattern:
    n_elements: int

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be at least 1")

    def gain_shape(self, phi):
        # np.sinc(x) = sin(pi x)/(pi x), so this is sin^2(pi Na phi)/(pi Na phi)^2.
        return np.sinc(self.n_elements * np.asarray(phi, dtype=float)) ** 2

    @property
    def effective_range(self) -> float:
        # Main lobe plus first sidelobe.
        return 3.0 / self.n_elements


@dataclass(frozen=True)
class CosinePattern:
    n_elements: int

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be at least 1")

    def gain_shape(self, phi):
        phi = np.asarray(phi, dtype=float)
        shape = np.cos(np.pi * self.n_elements * phi / 2.0) ** 2
        return np.where(np.abs(phi) <= 1.0 / self.n_elements, shape, 0.0)

    @property
    def effective_range(self) -> float:
        return 1.0 / self.n_elements


AntennaPattern = GaussianPattern | FlatTopPattern | SincPattern | CosinePattern


def rx_gain(pattern: AntennaPattern, max_gain: float, phi):
    """Receive gain at dome angle ``phi`` off boresight."""
    out = max_gain * pattern.gain_shape(phi)
    return float(out) if np.ndim(phi) == 0 else out


def effective_beam_range(pattern: AntennaPattern) -> float:
    """Dome angle beyond which received interference is treated as negligible."""
    return pattern.effective_range


def received_power(link: LinkParams, rx_gain_value: float, distance_m: float, fading: float) -> float:
    """Free-space received power in watts at slant range ``distance_m``.

    Callers enforce the detectability cutoff (zero beyond the maximum
    detectable range); this is the bare link equation.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    factor = (link.wavelength_m / (4.0 * math.pi)) ** 2
    return link.tx_power_w * link.tx_gain * rx_gain_value * link.system_loss * factor * fading / distance_m**2
