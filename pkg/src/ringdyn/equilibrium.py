"""Rigid-rotation equilibrium, linearized radial dynamics, and oscillations.

The configuration rotates rigidly at Omega^2 = GM/R^3 + Gm/(4R^3) * csc_sum(N);
small radial departures of a ring particle obey a linear oscillator whose
frequency picks up a ring self-gravity term on top of the epicyclic rate of
the central field.  The damped/stationary-oscillation relations of that
oscillator live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ring_model import RingSystem, ring_force
from .ring_sums import csc3_sum, csc_sum

# |radial/tangential| ratios at or beyond this are reported as this
# sentinel: the tangential component is zero up to roundoff there
# (physical ratios in the supported range stay orders of magnitude below).
RATIO_SENTINEL = 1e12


class DegenerateSystemError(ValueError):
    """System has no mass to rotate around."""


class ResonanceError(ValueError):
    """Phase angle undefined at omega == omega0 with nonzero damping."""


class ImaginaryFrequencyError(ValueError):
    """Squared oscillation frequency came out negative."""

    def __init__(self, radicand: float):
        super().__init__(f"squared frequency is negative: {radicand}")
        self.radicand = radicand


@dataclass(frozen=True)
class EquilibriumInfo:
    """Rigid rotation rate, its Kepler limit, and their ratio."""

    omega: float
    omega_kepler: float
    ratio: float


@dataclass(frozen=True)
class LinearCoeffs:
    """Linearization of the collinear ring force (nearest slot excluded).

    In the positive-sum convention F(x) = -ForceSample.radial the force is
    a0-magnitude + a_lin * x with a_lin = a_lin_parts[0] - a_lin_parts[1];
    a0 is the signed force value at x = 0.  tangential_lin is identically
    zero by mirror symmetry of the ray.
    """

    a0: float
    a_lin: float
    a_lin_parts: tuple[float, float]
    tangential_lin: float


@dataclass(frozen=True)
class DampedParams:
    """Damped-oscillator response of a radially perturbed ring particle."""

    resistance: float
    omega0: float
    omega: float
    delta: float
    gamma_ratio: float
    wavelength: float
    is_stationary: bool


def omega_equilibrium(system: RingSystem) -> EquilibriumInfo:
    """Rotation rate making the ring configuration stationary.

    Omega^2 = GM/R^3 + Gm/(4 R^3) * csc_sum(N).  ratio is Omega over the
    Kepler rate sqrt(GM/R^3), reported as inf when the central mass is zero.
    """
    g, m, M, r = (system.grav_constant, system.particle_mass,
                  system.central_mass, system.radius)
    if m == 0 and M == 0:
        raise DegenerateSystemError("both masses are zero")
    omega_sq = g * M / r**3 + g * m / (4.0 * r**3) * csc_sum(system.n_particles)
    omega = math.sqrt(omega_sq)
    if M == 0:
        return EquilibriumInfo(omega=omega, omega_kepler=0.0, ratio=math.inf)
    omega_kepler = math.sqrt(g * M / r**3)
    return EquilibriumInfo(omega=omega, omega_kepler=omega_kepler,
                           ratio=omega / omega_kepler)


def omega_ratio_sweep(n_values, ring_mass_fraction: float):
    """Rows (N, Omega/Omega0) at fixed total ring mass = fraction * M.

    The per-particle mass is fraction * M / N, so the ratio column grows
    like sqrt(1 + fraction * csc_sum(N) / (4N)) ~ log N.
    """
    rows = []
    for n in n_values:
        ratio_sq = 1.0 + ring_mass_fraction * csc_sum(int(n)) / (4.0 * int(n))
        rows.append((int(n), math.sqrt(ratio_sq)))
    return rows


def linearize_radial(system: RingSystem) -> LinearCoeffs:
    """Analytic linearization of the ring force along the collinear ray."""
    g, m, r, n = (system.grav_constant, system.particle_mass,
                  system.radius, system.n_particles)
    part_csc3 = g * m / (8.0 * r**3) * csc3_sum(n)
    part_csc = 3.0 * g * m / (8.0 * r**3) * csc_sum(n)
    a0 = -g * m / (4.0 * r**2) * csc_sum(n)
    return LinearCoeffs(
        a0=a0,
        a_lin=part_csc3 - part_csc,
        a_lin_parts=(part_csc3, part_csc),
        tangential_lin=0.0,
    )


def _ring_frequency_term(system: RingSystem) -> float:
    g, m, r = system.grav_constant, system.particle_mass, system.radius
    return g * m / (8.0 * r**3) * csc3_sum(system.n_particles)


def _omega0_sq(system: RingSystem, ang_momentum: float) -> float:
    g, M, r = system.grav_constant, system.central_mass, system.radius
    return -2.0 * g * M / r**3 + 3.0 * ang_momentum**2 / r**4


def epicyclic_omega(system: RingSystem, ang_momentum: float | None = None) -> float:
    """Frequency of small radial oscillations at fixed angular momentum.

    omega^2 = -2GM/R^3 + 3 L^2/R^4 + Gm/(8R^3) csc3_sum(N); by default L
    is the equilibrium value Omega R^2.
    """
    if ang_momentum is None:
        ang_momentum = omega_equilibrium(system).omega * system.radius**2
    omega_sq = _omega0_sq(system, ang_momentum) + _ring_frequency_term(system)
    if omega_sq < 0:
        raise ImaginaryFrequencyError(omega_sq)
    return math.sqrt(omega_sq)


def oscillation_threshold(system: RingSystem) -> float:
    """Amplitude scale where the ring term dominates the oscillation condition.

    x_crit = [sum_j m/(2R sin)^3] / (6 M / R^4); zero for a massless ring,
    linear in the particle mass.
    """
    m, M, r = system.particle_mass, system.central_mass, system.radius
    if M <= 0:
        raise ValueError("oscillation threshold requires a central mass")
    ring_sum = m / (8.0 * r**3) * csc3_sum(system.n_particles)
    return ring_sum / (6.0 * M / r**4)


def damped_response(
    system: RingSystem,
    resistance: float,
    ang_momentum: float | None = None,
    *,
    integer_tol: float = 1e-6,
) -> DampedParams:
    """Phase angle and frequency ratio of the damped radial oscillator.

    tan(delta) = 2 k omega / (omega0^2 - omega^2); the ratio
    gamma = sqrt(ring_term / omega0^2 + 1) equals omega/omega0, and the
    response is flagged stationary when gamma is within integer_tol of an
    integer.
    """
    if resistance < 0:
        raise ValueError(f"resistance must be >= 0, got {resistance}")
    if ang_momentum is None:
        ang_momentum = omega_equilibrium(system).omega * system.radius**2
    omega0_sq = _omega0_sq(system, ang_momentum)
    if omega0_sq <= 0:
        raise ImaginaryFrequencyError(omega0_sq)
    ring = _ring_frequency_term(system)
    omega0 = math.sqrt(omega0_sq)
    omega = math.sqrt(omega0_sq + ring)
    if resistance == 0.0:
        delta = 0.0
    else:
        denom = omega0_sq - omega**2
        if abs(denom) < 1e-15 * omega0_sq:
            raise ResonanceError("omega equals omega0: phase angle undefined")
        delta = math.atan(2.0 * resistance * omega / denom)
    gamma = math.sqrt(ring / omega0_sq + 1.0)
    return DampedParams(
        resistance=resistance,
        omega0=omega0,
        omega=omega,
        delta=delta,
        gamma_ratio=gamma,
        wavelength=2.0 * math.pi / gamma,
        is_stationary=abs(gamma - round(gamma)) < integer_tol,
    )


def force_ratio_series(system: RingSystem, x_values, phi: float | None = None,
                       include_nearest: bool = False):
    """Rows (x/R, |radial|/|tangential|) of the ring force anisotropy.

    Sampled just off the collinear ray (default phi = pi/(4N)) where the
    tangential component is small but nonzero; exactly-symmetric samples
    (e.g. the full ring on the midpoint ray) report RATIO_SENTINEL.
    """
    if phi is None:
        phi = math.pi / (4.0 * system.n_particles)
    rows = []
    for x in x_values:
        sample = ring_force(system, float(x), phi, include_nearest=include_nearest)
        if abs(sample.tangential) * RATIO_SENTINEL <= abs(sample.radial):
            ratio = RATIO_SENTINEL
        else:
            ratio = abs(sample.radial) / abs(sample.tangential)
        rows.append((float(x) / system.radius, ratio))
    return rows
