"""Spherical geometry of satellite shells seen from a ground target.

All angles are in radians and all lengths in kilometres unless a name says
otherwise. Central angles are measured at the Earth's centre, dome angles at
the ground target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_KM = 6371.0

# Slack for cosine arguments that drift past +/-1 through roundoff.
_COS_EPS = 1e-12


@dataclass(frozen=True)
class SphereGeometry:
    """Earth plus one concentric satellite shell."""

    shell_radius_km: float
    earth_radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self):
        if not (math.isfinite(self.shell_radius_km) and math.isfinite(self.earth_radius_km)):
            raise ValueError("radii must be finite")
        if self.earth_radius_km <= 0:
            raise ValueError("earth radius must be positive")
        if self.shell_radius_km < self.earth_radius_km:
            raise ValueError(
                f"shell radius {self.shell_radius_km} km below earth radius "
                f"{self.earth_radius_km} km"
            )

    @property
    def altitude_km(self) -> float:
        return self.shell_radius_km - self.earth_radius_km

    @property
    def radius_ratio(self) -> float:
        return self.earth_radius_km / self.shell_radius_km

    @property
    def horizon_angle(self) -> float:
        """Central angle at which the shell drops below the target's horizon."""
        return math.acos(min(1.0, self.radius_ratio))


def max_central_angle(geom: SphereGeometry, beam_angle: float) -> float:
    """Largest central angle at which a satellite is still detectable.

    A satellite is detectable when the target sits inside its transmit cone of
    full width ``beam_angle`` and the sight line clears the Earth. Whichever
    constraint binds first gives the limit: the horizon angle
    acos(Re/Rq) once the beam is wide enough, otherwise the beam-limited
    angle asin(Rq*sin(beam/2)/Re) - beam/2.
    """
    if not math.isfinite(beam_angle) or beam_angle <= 0:
        raise ValueError(f"beam angle must be positive and finite, got {beam_angle}")
    if beam_angle >= 2 * math.pi:
        raise ValueError(f"beam angle must be below 2*pi, got {beam_angle}")
    if geom.shell_radius_km == geom.earth_radius_km:
        # Degenerate shell on the surface: both branches collapse.
        return 0.0
    ratio = geom.radius_ratio
    if beam_angle >= 2 * math.asin(ratio):
        return math.acos(ratio)
    half = beam_angle / 2
    return math.asin(math.sin(half) / ratio) - half


def max_detect_distance(geom: SphereGeometry, theta_max: float) -> float:
    """Slant range (km) matching a central angle, by the law of cosines."""
    if not 0 <= theta_max <= math.pi:
        raise ValueError(f"central angle must lie in [0, pi], got {theta_max}")
    rq, re = geom.shell_radius_km, geom.earth_radius_km
    return math.sqrt(rq * rq + re * re - 2 * rq * re * math.cos(theta_max))


def max_orbit_central_angle(geom: SphereGeometry, inclination: float, d_max_km: float) -> float:
    """Arc (as central angle, up to 2*pi) of one orbit lying within range.

    For a circular orbit whose normal makes angle ``inclination`` with the
    target direction, returns the central angle spanned by orbit points whose
    slant range to the target is at most ``d_max_km``. Zero when the orbit
    never comes within range.
    """
    if not 0 <= inclination <= math.pi:
        raise ValueError(f"inclination must lie in [0, pi], got {inclination}")
    if d_max_km <= 0:
        raise ValueError(f"d_max must be positive, got {d_max_km}")
    rq, re = geom.shell_radius_km, geom.earth_radius_km
    closest = (re * re + rq * rq - d_max_km * d_max_km) / (2 * re * rq)
    if closest < -1 - _COS_EPS:
        raise ValueError(f"d_max {d_max_km} km exceeds the largest possible separation")
    if closest >= 1:
        # Range shorter than the closest possible approach: nothing reachable.
        return 0.0
    crit = math.acos(max(closest, -1.0))
    if abs(inclination - math.pi / 2) > crit:
        return 0.0
    sin_inc = math.sin(inclination)
    arg = closest / sin_inc
    if abs(arg) > 1 + _COS_EPS:
        raise ValueError(
            f"inconsistent inputs: cosine argument {arg} outside [-1, 1] "
            f"for inclination {inclination}, d_max {d_max_km}"
        )
    return 2 * math.acos(min(1.0, max(-1.0, arg)))


def dome_from_central(geom: SphereGeometry, theta: float) -> float:
    """Dome angle at the target between the zenith satellite and one offset
    by central angle ``theta`` on the same shell.

    Equals acot(cot(theta) - (Re/Rq)*sqrt(1 + cot(theta)^2)); evaluated in
    atan2 form, which is exact for theta in (0, pi) and has no cotangent
    blow-up.
    """
    if not math.isfinite(theta) or theta <= 0:
        raise ValueError(f"central angle must be positive, got {theta}")
    if theta >= math.pi:
        raise ValueError(f"central angle must be below pi, got {theta}")
    rq, re = geom.shell_radius_km, geom.earth_radius_km
    return math.atan2(rq * math.sin(theta), rq * math.cos(theta) - re)


def central_from_dome(geom: SphereGeometry, phi_max: float) -> float:
    """Central angle whose dome angle at the target equals ``phi_max``.

    Inverse of :func:`dome_from_central` on phi in (0, pi/2): the positive
    root of the quadratic obtained from the sine rule,
    cot(theta) = (u + rho*sqrt(1 + u^2 - rho^2)) / (1 - rho^2)
    with u = cot(phi_max) and rho = Re/Rq.
    """
    if geom.shell_radius_km <= geom.earth_radius_km:
        raise ValueError("shell radius must exceed earth radius")
    if not 0 < phi_max < math.pi / 2:
        raise ValueError(f"dome angle must lie in (0, pi/2), got {phi_max}")
    rho = geom.radius_ratio
    u = 1.0 / math.tan(phi_max)
    t = (u + rho * math.sqrt(1 + u * u - rho * rho)) / (1 - rho * rho)
    return math.atan2(1.0, t)
