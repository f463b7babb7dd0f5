"""Exact geometry and gravity of a ring of equal masses plus a central body.

The configuration is N particles of mass m on a circle of radius R with a
mass M at the center.  A test particle sits at radius R + x and angular
offset phi from the reference ray.  All forces returned here are
accelerations (per unit test mass), exact point-mass sums with no
expansion in x.  This module is the ground truth the analytic modules
are verified against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Distances below this fraction of the ring radius raise CoincidenceError
# instead of silently propagating huge values.
MIN_SEPARATION_FACTOR = 1e-12


class CoincidenceError(ValueError):
    """Test particle coincides with a ring particle or the center."""


@dataclass(frozen=True)
class RingSystem:
    """Parameters of one N+1 ring configuration."""

    n_particles: int
    particle_mass: float
    central_mass: float
    radius: float = 1.0
    grav_constant: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_particles, (int, np.integer)):
            raise TypeError("n_particles must be an integer")
        if self.n_particles < 2:
            raise ValueError(f"n_particles must be >= 2, got {self.n_particles}")
        if self.radius <= 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.grav_constant <= 0:
            raise ValueError(f"grav_constant must be > 0, got {self.grav_constant}")
        if self.particle_mass < 0 or self.central_mass < 0:
            raise ValueError("masses must be >= 0")
        if self.particle_mass == 0 and self.central_mass == 0:
            raise ValueError("at least one of particle_mass, central_mass must be > 0")

    @property
    def sector_angle(self) -> float:
        """Angular spacing between adjacent ring particles."""
        return 2.0 * math.pi / self.n_particles


@dataclass(frozen=True)
class TestParticleState:
    """Rotating-frame offsets and rates of a test particle.

    x is the radial offset from the ring radius, phi the angular offset
    from the reference ray; together with the frame rate Omega these fix
    the angular momentum L = (phi_dot + Omega) * (R + x)^2.
    """

    __test__ = False  # not a pytest class, despite the name

    x: float = 0.0
    phi: float = 0.0
    x_dot: float = 0.0
    phi_dot: float = 0.0


@dataclass(frozen=True)
class ForceSample:
    """Acceleration on the test particle.

    radial is along the center-particle ray (positive outward),
    tangential perpendicular to it (positive toward increasing phi).
    """

    radial: float
    tangential: float


def chord_geometry(system: RingSystem, x: float, alpha_j: float | np.ndarray):
    """Squared chord distance and ray-cosine to a ring particle at angle alpha_j.

    dist_sq = x^2 + (2 R sin(alpha_j/2))^2 (1 + x/R) is exact (law of
    cosines rearranged); cos_phi_j is the cosine of the angle at the test
    particle between the outward ray and the separation direction.
    """
    r = system.radius
    if r + x <= 0:
        raise ValueError(f"test particle radius R + x must be > 0, got {r + x}")
    half = np.sin(np.asarray(alpha_j, dtype=np.float64) / 2.0)
    chord_sq = (2.0 * r * half) ** 2
    dist_sq = x * x + chord_sq * (1.0 + x / r)
    floor = (MIN_SEPARATION_FACTOR * r) ** 2
    if np.any(dist_sq < floor):
        raise CoincidenceError("test particle coincides with a ring particle")
    cos_phi_j = (2.0 * r * x + 2.0 * x * x + chord_sq * (1.0 + x / r)) / (
        2.0 * (r + x) * np.sqrt(dist_sq)
    )
    if np.ndim(alpha_j) == 0:
        return float(dist_sq), float(cos_phi_j)
    return dist_sq, cos_phi_j


def _ring_angles(system: RingSystem, phi: float, include_nearest: bool) -> np.ndarray:
    n = system.n_particles
    sector = system.sector_angle
    if include_nearest:
        # Full ring: reduce phi by whole sectors so the N-fold symmetry
        # ring_force(x, phi) == ring_force(x, phi + 2*pi/N) is exact.
        phi = phi - round(phi / sector) * sector
        j = np.arange(0, n, dtype=np.float64)
    else:
        # The test particle replaces the j=0 ring particle; its empty slot
        # stays excluded no matter how far phi wanders.
        j = np.arange(1, n, dtype=np.float64)
    return sector * j + phi


def ring_force(
    system: RingSystem, x: float, phi: float = 0.0, include_nearest: bool = False
) -> ForceSample:
    """Exact ring-only acceleration on a test particle at (R + x, phi).

    With include_nearest the sum runs over all N ring particles (the
    nearest one sits at angular offset phi, which on the collinear ray
    phi = 0 means at radial distance |x|).  Without it the j = 0 slot is
    excluded, i.e. the test particle stands in for that ring particle.
    Summation order is fixed ascending-j for bitwise determinism.
    """
    alpha = _ring_angles(system, phi, include_nearest)
    r = system.radius
    gm = system.grav_constant * system.particle_mass
    half_sin = np.sin(alpha / 2.0)
    half_cos = np.cos(alpha / 2.0)
    chord_sq = (2.0 * r * half_sin) ** 2
    dist_sq = x * x + chord_sq * (1.0 + x / r)
    floor = (MIN_SEPARATION_FACTOR * r) ** 2
    if np.any(dist_sq < floor):
        raise CoincidenceError(
            f"test particle at x={x}, phi={phi} coincides with a ring particle"
        )
    inv_d3 = dist_sq**-1.5
    radial = -gm * math.fsum((2.0 * r * half_sin**2 + x) * inv_d3)
    tangential = -gm * math.fsum(2.0 * r * half_sin * half_cos * inv_d3)
    return ForceSample(radial=radial, tangential=tangential)


def ring_positions(system: RingSystem) -> np.ndarray:
    """Cartesian positions of the N ring particles, shape (N, 2)."""
    theta = system.sector_angle * np.arange(system.n_particles)
    return system.radius * np.column_stack([np.cos(theta), np.sin(theta)])


def potential(system: RingSystem, position) -> float:
    """Gravitational potential per unit mass, GM/r + sum_j Gm/d_j, at a
    planar point (positive convention: force = +grad U)."""
    p = np.asarray(position, dtype=np.float64)
    if p.shape != (2,):
        raise ValueError(f"position must be a planar point, got shape {p.shape}")
    g = system.grav_constant
    r_center = math.hypot(p[0], p[1])
    floor = MIN_SEPARATION_FACTOR * system.radius
    if r_center < floor:
        if system.central_mass > 0:
            raise CoincidenceError("position coincides with the central mass")
        u_central = 0.0
    else:
        u_central = g * system.central_mass / r_center
    delta = ring_positions(system) - p
    dist = np.hypot(delta[:, 0], delta[:, 1])
    if np.any(dist < floor):
        raise CoincidenceError("position coincides with a ring particle")
    return u_central + g * system.particle_mass * math.fsum(1.0 / dist)


def total_force(system: RingSystem, x: float, phi: float = 0.0,
                include_nearest: bool = True) -> ForceSample:
    """Ring force plus the central body's pull at (R + x, phi)."""
    ring = ring_force(system, x, phi, include_nearest)
    r = system.radius + x
    central = -system.grav_constant * system.central_mass / r**2
    return ForceSample(radial=ring.radial + central, tangential=ring.tangential)
