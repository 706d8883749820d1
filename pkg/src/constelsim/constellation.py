"""Random constellation generators.

LEO shells are homogeneous binomial point processes on a sphere: a fixed
number of satellites placed i.i.d. uniformly. MEO shells are generated
orbit-first: each orbit normal is uniform on the sphere (inclination density
sin/2, azimuth uniform), and a fixed number of satellites is placed at
independent uniform anomalies along each orbit.

Positions are returned as ``(n, 3)`` float arrays in kilometres. MEO points
are ordered orbit-major: satellite ``j`` of orbit ``i`` sits at row
``i * sats_per_orbit + j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import EARTH_RADIUS_KM

# The ground target used throughout; the point processes are isotropic, so
# fixing it loses no generality.
TARGET_DIRECTION = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class LeoShellConfig:
    n_sats: int
    radius_km: float
    beam_angle: float  # full width of the transmit cone, radians

    def __post_init__(self):
        if self.n_sats < 0:
            raise ValueError("n_sats must be non-negative")
        if self.radius_km <= EARTH_RADIUS_KM:
            raise ValueError("LEO shell radius must exceed the Earth radius")
        if not 0 < self.beam_angle < 2 * math.pi:
            raise ValueError("beam angle must lie in (0, 2*pi)")


@dataclass(frozen=True)
class MeoShellConfig:
    n_orbits: int
    sats_per_orbit: int
    radius_km: float
    beam_angle: float

    def __post_init__(self):
        if self.n_orbits < 0 or self.sats_per_orbit < 0:
            raise ValueError("orbit and satellite counts must be non-negative")
        if self.radius_km <= EARTH_RADIUS_KM:
            raise ValueError("MEO shell radius must exceed the Earth radius")
        if not 0 < self.beam_angle < 2 * math.pi:
            raise ValueError("beam angle must lie in (0, 2*pi)")

    @property
    def n_sats(self) -> int:
        return self.n_orbits * self.sats_per_orbit


@dataclass(frozen=True)
class OrbitOrientation:
    """Orbit plane attitude relative to the target axis."""

    inclination: float  # angle between orbit normal and +z, sin/2 density
    azimuth: float  # rotation about +z, uniform on [0, 2*pi)


def derive_rng(master_seed: int, trial_index: int = 0) -> np.random.Generator:
    """Independent, reproducible substream for one Monte Carlo trial.

    Keyed on (master_seed, trial_index) through the seed-sequence spawn
    mechanism, so distinct trials never share state and the same pair always
    reproduces the same stream.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def sample_bpp(config: LeoShellConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw the LEO shell: n_sats points i.i.d. uniform on the sphere."""
    n = config.n_sats
    polar = np.arccos(1.0 - 2.0 * rng.random(n))
    azimuth = 2.0 * np.pi * rng.random(n)
    sin_p = np.sin(polar)
    out = np.empty((n, 3))
    out[:, 0] = sin_p * np.cos(azimuth)
    out[:, 1] = sin_p * np.sin(azimuth)
    out[:, 2] = np.cos(polar)
    out *= config.radius_km
    return out


def sample_orbit_orientations(n_orbits: int, rng: np.random.Generator) -> list[OrbitOrientation]:
    """Draw orbit attitudes: inclination with sin/2 density, azimuth uniform."""
    inclinations = np.arccos(1.0 - 2.0 * rng.random(n_orbits))
    azimuths = 2.0 * np.pi * rng.random(n_orbits)
    return [OrbitOrientation(float(i), float(a)) for i, a in zip(inclinations, azimuths)]


def _orbit_points(config: MeoShellConfig, orient: OrbitOrientation, anomalies: np.ndarray) -> np.ndarray:
    """Place points on one orbit circle and rotate it into attitude.

    The circle starts in the xy-plane, is tilted about the x-axis by the
    inclination, then swung about the z-axis by the azimuth.
    """
    r = config.radius_km
    flat = np.column_stack([r * np.cos(anomalies), r * np.sin(anomalies), np.zeros_like(anomalies)])
    ci, si = math.cos(orient.inclination), math.sin(orient.inclination)
    ca, sa = math.cos(orient.azimuth), math.sin(orient.azimuth)
    rot_x = np.array([[1.0, 0.0, 0.0], [0.0, ci, -si], [0.0, si, ci]])
    rot_z = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    return flat @ rot_x.T @ rot_z.T


def sample_dsbpp(config: MeoShellConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw the MEO shell: random orbits, uniform anomalies along each.

    Random draws happen in a fixed order (all inclinations, all azimuths,
    then the anomalies orbit by orbit) so a given (config, stream) pair is
    reproducible.
    """
    orientations = sample_orbit_orientations(config.n_orbits, rng)
    blocks = []
    for orient in orientations:
        anomalies = 2.0 * np.pi * rng.random(config.sats_per_orbit)
        blocks.append(_orbit_points(config, orient, anomalies))
    if not blocks:
        return np.empty((0, 3))
    return np.vstack(blocks)


def central_angle_to_target(positions: np.ndarray, target_direction: np.ndarray = TARGET_DIRECTION) -> np.ndarray:
    """Central angle (radians, in [0, pi]) between each satellite and the target."""
    pos = np.atleast_2d(positions)
    norms = np.linalg.norm(pos, axis=1)
    cos_theta = pos @ target_direction / np.where(norms > 0, norms, 1.0)
    angles = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    return angles if positions.ndim > 1 else angles[0]
