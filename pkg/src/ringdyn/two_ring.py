"""Double-ring (2N+1 body) configurations and their linearized coefficients.

Two nested rings of N particles each share a central mass.  In the
collinear arrangement the rings' particles lie on common rays; in the
noncollinear one the outer ring is offset by half a sector.  Forces
between rings are exact point-mass sums over actual positions, so the
sign conventions of approach/recede emerge from geometry instead of a
hand-maintained case table.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .equilibrium import omega_equilibrium
from .libration import LibrationBranch, LibrationUnavailableError, solve_full
from .ring_model import (CoincidenceError, ForceSample, MIN_SEPARATION_FACTOR,
                         RingSystem, ring_force)
from .ring_sums import csc3_sum, csc_sum

# Scale below which the numerically-summed tangential coefficients are
# accepted as the symmetry zeros they must be.
SYMMETRY_ZERO_TOL = 1e-12


class Arrangement(enum.Enum):
    COLLINEAR = "collinear"
    NONCOLLINEAR = "noncollinear"


@dataclass(frozen=True)
class TwoRingSystem:
    """Two nested N-particle rings plus a central mass."""

    n_per_ring: int
    inner_mass: float
    outer_mass: float
    inner_radius: float
    outer_radius: float
    central_mass: float
    arrangement: Arrangement = Arrangement.NONCOLLINEAR
    grav_constant: float = 1.0

    def __post_init__(self):
        if self.n_per_ring < 2:
            raise ValueError(f"n_per_ring must be >= 2, got {self.n_per_ring}")
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError("radii must satisfy 0 < inner < outer")
        if min(self.inner_mass, self.outer_mass, self.central_mass) < 0:
            raise ValueError("masses must be >= 0")
        if self.grav_constant <= 0:
            raise ValueError("grav_constant must be > 0")
        gap = self.outer_radius - self.inner_radius
        if (self.arrangement is Arrangement.COLLINEAR
                and gap < 1e-6 * self.outer_radius):
            warnings.warn("rings nearly touching: cross forces diverge",
                          stacklevel=2)

    def ring(self, which: str) -> RingSystem:
        """Single-ring view (own mass + central mass) of one ring."""
        mass, radius = self._select(which)
        return RingSystem(
            n_particles=self.n_per_ring, particle_mass=mass,
            central_mass=self.central_mass, radius=radius,
            grav_constant=self.grav_constant,
        )

    def _select(self, which: str) -> tuple[float, float]:
        if which == "inner":
            return self.inner_mass, self.inner_radius
        if which == "outer":
            return self.outer_mass, self.outer_radius
        raise ValueError(f"which must be 'inner' or 'outer', got {which!r}")

    def ring_angles(self, which: str) -> np.ndarray:
        sector = 2.0 * math.pi / self.n_per_ring
        theta = sector * np.arange(self.n_per_ring)
        if which == "outer" and self.arrangement is Arrangement.NONCOLLINEAR:
            theta = theta + sector / 2.0
        return theta


@dataclass(frozen=True)
class RingExpansion:
    """Linearized force coefficients of one ring of a double-ring system.

    radial_slope (A-like, < 0) and radial_const (B-like) expand the
    own-ring radial force; tangential_slope/const are the symmetry zeros,
    with tangential_verified set when the direct sums confirm them below
    SYMMETRY_ZERO_TOL scale.  omega_sq is the single-ring rigid rate
    squared for this ring (central mass + own ring only).
    """

    radial_slope: float
    radial_const: float
    tangential_slope: float
    tangential_const: float
    omega_sq: float
    tangential_verified: bool


def build_two_ring(
    n_per_ring: int,
    inner_mass: float,
    outer_mass: float,
    inner_radius: float,
    outer_radius: float,
    central_mass: float,
    arrangement: Arrangement = Arrangement.NONCOLLINEAR,
    grav_constant: float = 1.0,
) -> tuple[TwoRingSystem, np.ndarray, np.ndarray]:
    """Construct the system plus body positions and masses.

    Returns (system, positions (2N+1, 2), masses (2N+1,)); index 0 is the
    central body, 1..N the inner ring, N+1..2N the outer ring.
    """
    system = TwoRingSystem(
        n_per_ring=n_per_ring, inner_mass=inner_mass, outer_mass=outer_mass,
        inner_radius=inner_radius, outer_radius=outer_radius,
        central_mass=central_mass, arrangement=arrangement,
        grav_constant=grav_constant,
    )
    positions = [np.zeros(2)]
    masses = [central_mass]
    for which in ("inner", "outer"):
        mass, radius = system._select(which)
        theta = system.ring_angles(which)
        for t in theta:
            positions.append(radius * np.array([math.cos(t), math.sin(t)]))
            masses.append(mass)
    return system, np.array(positions), np.array(masses)


def ring_expansion(system: TwoRingSystem, which: str) -> RingExpansion:
    """Own-ring linearization coefficients for one ring.

    radial_slope = -(G m_k / R_k^3)(csc3_sum/8 - 3 csc_sum/8) and
    radial_const = -(G m_k / 4 R_k^2) csc_sum are the analytic sums; the
    tangential pair is zero by mirror symmetry and verified numerically.
    """
    mass, radius = system._select(which)
    n = system.n_per_ring
    g = system.grav_constant
    s3, s1 = csc3_sum(n), csc_sum(n)
    radial_slope = -g * mass / radius**3 * (s3 / 8.0 - 3.0 * s1 / 8.0)
    radial_const = -g * mass / (4.0 * radius**2) * s1
    omega_sq = omega_equilibrium(system.ring(which)).omega ** 2

    # direct check of the symmetry zeros on the exclusive collinear ray:
    # the summed tangential force must stay at roundoff scale relative to
    # the radial force for offsets inside the linear range
    ring = system.ring(which)
    verified = True
    for x in (0.0, 0.01 * radius, -0.01 * radius):
        sample = ring_force(ring, x, 0.0, include_nearest=False)
        if abs(sample.tangential) > SYMMETRY_ZERO_TOL * abs(sample.radial):
            verified = False
            break
    return RingExpansion(
        radial_slope=radial_slope, radial_const=radial_const,
        tangential_slope=0.0, tangential_const=0.0,
        omega_sq=omega_sq, tangential_verified=verified,
    )


def cross_ring_force(
    system: TwoRingSystem, which: str, x: float, phi: float = 0.0
) -> ForceSample:
    """Force on a displaced particle of ring `which` from the other ring
    plus the central mass, by exact summation over positions.

    The particle sits at radius R_k + x and angle (own reference ray) + phi;
    radial/tangential components are taken along/perpendicular to its ray.
    """
    other = "outer" if which == "inner" else "inner"
    mass_other, _ = system._select(other)
    _, radius_own = system._select(which)
    g = system.grav_constant
    r = radius_own + x
    if r <= 0:
        raise ValueError("displaced particle must stay outside the center")
    base = float(system.ring_angles(which)[0])
    theta = system.ring_angles(other) - base  # other ring relative to own ray
    pos = np.column_stack([np.cos(theta), np.sin(theta)]) * system._select(other)[1]
    p = np.array([r * math.cos(phi), r * math.sin(phi)])
    delta = pos - p
    dist = np.hypot(delta[:, 0], delta[:, 1])
    if np.any(dist < MIN_SEPARATION_FACTOR * radius_own):
        raise CoincidenceError("displaced particle coincides with the other ring")
    inv_d3 = dist**-3
    fx = g * mass_other * math.fsum(delta[:, 0] * inv_d3)
    fy = g * mass_other * math.fsum(delta[:, 1] * inv_d3)
    # central mass pull
    fx += -g * system.central_mass * p[0] / r**3
    fy += -g * system.central_mass * p[1] / r**3
    radial_hat = p / r
    tang_hat = np.array([-radial_hat[1], radial_hat[0]])
    return ForceSample(radial=float(fx * radial_hat[0] + fy * radial_hat[1]),
                       tangential=float(fx * tang_hat[0] + fy * tang_hat[1]))


def _total_radial_at_rest(system: TwoRingSystem, which: str) -> float:
    """Radial force on an undisplaced particle of ring `which`: own ring
    (exclusive) + other ring + central mass."""
    own = system.ring(which)
    self_radial = ring_force(own, 0.0, 0.0, include_nearest=False).radial
    cross = cross_ring_force(system, which, 0.0, 0.0)
    return self_radial + cross.radial   # cross already includes the center


def fit_common_omega(system: TwoRingSystem, fit: str = "outer") -> float:
    """Rigid rotation rate for the pair: zero the chosen ring's residual
    ("inner"/"outer"), or least-squares over both ("lsq")."""
    need = {}
    for which in ("inner", "outer"):
        _, radius = system._select(which)
        need[which] = -_total_radial_at_rest(system, which) / radius
    if fit in ("inner", "outer"):
        omega_sq = need[fit]
    elif fit == "lsq":
        r_i, r_o = system.inner_radius, system.outer_radius
        omega_sq = ((r_i**2 * need["inner"] + r_o**2 * need["outer"])
                    / (r_i**2 + r_o**2))
    else:
        raise ValueError(f"fit must be inner/outer/lsq, got {fit!r}")
    if omega_sq <= 0:
        raise ValueError("no real common rotation rate")
    return math.sqrt(omega_sq)


def stationarity_residual(
    system: TwoRingSystem, fit: str = "outer"
) -> tuple[float, float, float]:
    """(inner_residual, outer_residual, omega) under a common rigid rate.

    Residual_k = -R_k Omega^2 - [total radial force on a ring-k particle],
    the rotating-frame acceleration left over at rest; both vanish iff the
    double ring is stationary at this geometry.
    """
    omega = fit_common_omega(system, fit)
    return (-system.inner_radius * omega**2 - _total_radial_at_rest(system, "inner"),
            -system.outer_radius * omega**2 - _total_radial_at_rest(system, "outer"),
            omega)


def place_second_ring(
    base: RingSystem,
    second_mass: float,
    branch: LibrationBranch = LibrationBranch.OUTER,
) -> TwoRingSystem:
    """Second ring of N particles placed at the base ring's libration radius.

    Collinear branches put the new ring on the same rays (collinear
    arrangement).  Raises LibrationUnavailableError when the requested
    branch has no root.
    """
    result = solve_full(base, branch)
    if result is None or not result.converged:
        raise LibrationUnavailableError(
            f"{branch.value} libration point absent for this system")
    new_radius = base.radius * (1.0 + result.x_over_r)
    if branch is LibrationBranch.INNER:
        inner_mass, outer_mass = second_mass, base.particle_mass
        inner_radius, outer_radius = new_radius, base.radius
    else:
        inner_mass, outer_mass = base.particle_mass, second_mass
        inner_radius, outer_radius = base.radius, new_radius
    return TwoRingSystem(
        n_per_ring=base.n_particles,
        inner_mass=inner_mass, outer_mass=outer_mass,
        inner_radius=inner_radius, outer_radius=outer_radius,
        central_mass=base.central_mass,
        arrangement=Arrangement.COLLINEAR,
        grav_constant=base.grav_constant,
    )
