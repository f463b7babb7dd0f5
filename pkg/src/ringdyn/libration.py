"""Collinear and noncollinear stationary points of the rotating ring.

A test particle co-rotating with the configuration is stationary where the
radial residual

    f(x) = -(R + x) Omega^2 + GM/(R + x)^2 + sum_j Gm (2 R sin^2 + x) / d^3

vanishes (the j = 0 term is the nearest ring particle at radial distance
|x|; its sign follows from the signed offset x).  Four independent
solution routes are provided: the full nonlinear residual, a quintic
polynomial from the small-offset force expansion, a cubic approximation,
and asymptotic limit expressions.  Cross-checking them against each other
is the point.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .equilibrium import omega_equilibrium
from .ring_model import RingSystem, ring_force
from .ring_sums import ring_coefficients

# Scan window defaults: inner roots searched on [-0.9 R, -1e-9 R],
# outer on [1e-9 R, 1.0 R].
INNER_X_MAX = 0.9
OUTER_X_MAX = 1.0
GRID_POINTS = 400
RESIDUAL_TOL = 1e-12

# Stated validity bound of the cubic approximation: m/M << bound/N^3.
CUBIC_VALIDITY_CONST = 7.84048


class SingularDenominatorError(ValueError):
    """Cubic approximation evaluated at its k = 3 pole."""


class LibrationUnavailableError(ValueError):
    """Requested libration point does not exist in the search window."""


class LibrationBranch(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    NONCOLLINEAR = "noncollinear"


@dataclass(frozen=True)
class LibrationResult:
    branch: LibrationBranch
    x_over_r: float
    method: str
    converged: bool
    residual: float
    iterations: int


@dataclass(frozen=True)
class QuinticCoeffs:
    """Descending-power coefficients (c5..c0) of the collinear equilibrium
    polynomial, plus the nearest-particle sign it was built with."""

    c5: float
    c4: float
    c3: float
    c2: float
    c1: float
    c0: float
    branch_sign: int

    def as_array(self) -> np.ndarray:
        return np.array([self.c5, self.c4, self.c3, self.c2, self.c1, self.c0])

    def __call__(self, x: float | np.ndarray):
        return np.polyval(self.as_array(), x)


def _branch_sign(branch: LibrationBranch) -> int:
    if branch is LibrationBranch.INNER:
        return -1
    if branch is LibrationBranch.OUTER:
        return 1
    raise ValueError("collinear solvers take the inner or outer branch")


def residual_collinear(system: RingSystem, x: float,
                       branch: LibrationBranch | None = None) -> float:
    """Radial acceleration residual on the collinear ray (phi = 0).

    Zero at a libration point.  The ring term includes the nearest
    particle, whose contribution reduces to -+ Gm/x^2 with the sign
    emerging from the signed offset.
    """
    if x == 0:
        raise ValueError("residual is singular at x = 0 (nearest ring particle)")
    if branch is not None and _branch_sign(branch) * x < 0:
        raise ValueError(f"x = {x} inconsistent with branch {branch.value}")
    r = system.radius + x
    if r <= 0:
        raise ValueError("test particle must stay outside the center")
    g = system.grav_constant
    omega_sq = omega_equilibrium(system).omega ** 2
    ring = ring_force(system, x, 0.0, include_nearest=True)
    return -r * omega_sq + g * system.central_mass / r**2 - ring.radial


def _residual_scale(system: RingSystem) -> float:
    g, r = system.grav_constant, system.radius
    if system.central_mass > 0:
        return g * system.central_mass / r**2
    return g * system.particle_mass * system.n_particles / r**2


def solve_full(
    system: RingSystem,
    branch: LibrationBranch,
    *,
    x_max: float | None = None,
    grid_points: int = GRID_POINTS,
    tol: float | None = None,
) -> LibrationResult | None:
    """Root of the full nonlinear residual, or None when no sign change
    exists in the scan window.

    The window |x| in [1e-9 R, x_max] is scanned on a geometric grid; the
    sign change closest to the ring is refined by Brent's method.
    """
    sign = _branch_sign(branch)
    r = system.radius
    if x_max is None:
        x_max = (INNER_X_MAX if sign < 0 else OUTER_X_MAX) * r
    if tol is None:
        tol = RESIDUAL_TOL * _residual_scale(system)
    grid = sign * np.geomspace(1e-9 * r, x_max, grid_points)
    values = np.empty(grid_points)
    for i, x in enumerate(grid):
        values[i] = residual_collinear(system, float(x))
    bracket = None
    for i in range(grid_points - 1):
        a, b = values[i], values[i + 1]
        if np.isfinite(a) and np.isfinite(b) and np.sign(a) != np.sign(b):
            bracket = (grid[i], grid[i + 1])
            break
    if bracket is None:
        return None
    lo, hi = sorted(map(float, bracket))
    root, info = brentq(
        lambda x: residual_collinear(system, x), lo, hi,
        xtol=1e-15 * r, rtol=8 * np.finfo(float).eps, full_output=True,
    )
    res = residual_collinear(system, root)
    return LibrationResult(
        branch=branch,
        x_over_r=root / r,
        method="full",
        converged=bool(info.converged) and abs(res) < tol,
        residual=res,
        iterations=info.iterations,
    )


def quintic_coeffs(system: RingSystem, branch: LibrationBranch) -> QuinticCoeffs:
    """Degree-5 polynomial whose roots approximate the collinear points.

    Obtained by replacing the non-nearest ring force with its linearization
    A x + B, keeping the nearest particle exact, and clearing denominators:

      -(R+x)^3 x^2 W^2 + GM x^2 + s Gm (R+x)^2 + (A x + B)(R+x)^2 x^2 = 0

    with s = +1 outer / -1 inner and W^2 the rigid rotation rate squared.
    """
    s = _branch_sign(branch)
    g, m, M, r = (system.grav_constant, system.particle_mass,
                  system.central_mass, system.radius)
    coeff = ring_coefficients(system)
    a, b = coeff.a_coeff, coeff.b_coeff
    w2 = omega_equilibrium(system).omega ** 2
    return QuinticCoeffs(
        c5=a - w2,
        c4=-3.0 * r * w2 + 2.0 * a * r + b,
        c3=-3.0 * r**2 * w2 + a * r**2 + 2.0 * b * r,
        c2=-(r**3) * w2 + g * M + b * r**2 + s * g * m,
        c1=2.0 * s * g * m * r,
        c0=s * g * m * r**2,
        branch_sign=s,
    )


def quintic_reference(system: RingSystem, branch: LibrationBranch, x) -> float:
    """Uncollected form of the quintic (direct evaluation of the cleared
    equation); used to validate the collected coefficients."""
    s = _branch_sign(branch)
    g, m, M, r = (system.grav_constant, system.particle_mass,
                  system.central_mass, system.radius)
    coeff = ring_coefficients(system)
    w2 = omega_equilibrium(system).omega ** 2
    rx = r + x
    return (-(rx**3) * x**2 * w2 + g * M * x**2 + s * g * m * rx**2
            + (coeff.a_coeff * x + coeff.b_coeff) * rx**2 * x**2)


def solve_quintic(
    coeffs: QuinticCoeffs,
    *,
    x_min: float,
    x_max: float,
    grid_points: int = 2000,
) -> list[float]:
    """All real roots of the quintic in (x_min, x_max), ascending.

    Sign-change isolation on a dense linear grid, refined by Brent; a
    deterministic alternative to companion-matrix eigenvalues.
    """
    if coeffs.c5 == 0:
        raise ValueError("leading coefficient must be nonzero")
    xs = np.linspace(x_min, x_max, grid_points)
    vals = coeffs(xs)
    roots = []
    for i in range(grid_points - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(xs[i]))
        elif np.sign(a) != np.sign(b):
            roots.append(float(brentq(coeffs, xs[i], xs[i + 1], xtol=1e-15)))
    if vals[-1] == 0.0:
        roots.append(float(xs[-1]))
    return sorted(roots)


def approx_cubic(system: RingSystem, branch: LibrationBranch) -> LibrationResult:
    """Small-offset cubic approximation x^3 = s (m/M) R^3 / (3 - k) with
    k = 2.4041 m N^3 / (8 M pi^3); valid for m/M well below
    CUBIC_VALIDITY_CONST / N^3 (a warning is issued otherwise)."""
    s = _branch_sign(branch)
    m, M, r, n = (system.particle_mass, system.central_mass,
                  system.radius, system.n_particles)
    if M <= 0:
        raise ValueError("cubic approximation requires a central mass")
    if m / M > CUBIC_VALIDITY_CONST / n**3:
        warnings.warn(
            f"cubic approximation outside its validity bound "
            f"m/M < {CUBIC_VALIDITY_CONST}/N^3", stacklevel=2)
    k = 2.4041 * m * n**3 / (8.0 * M * math.pi**3)
    if abs(3.0 - k) < 1e-9:
        raise SingularDenominatorError(f"cubic denominator 3 - k vanishes (k = {k})")
    cube = s * (m / M) * r**3 / (3.0 - k)
    x = math.copysign(abs(cube) ** (1.0 / 3.0), cube)
    return LibrationResult(
        branch=branch, x_over_r=x / r, method="cubic",
        converged=True, residual=math.nan, iterations=0,
    )


def asymptotic_roots(system: RingSystem, limit: str) -> LibrationResult:
    """Closed-form limits of the quintic.

    limit="small_m": x = (Gm / (A + 3 W))^(1/3) with W = Omega^2 (outer
    branch sign); limit="small_B": x = -B / (A + 3 W), the perturbation of
    the zero root.
    """
    g, m = system.grav_constant, system.particle_mass
    coeff = ring_coefficients(system)
    w2 = omega_equilibrium(system).omega ** 2
    denom = coeff.a_coeff + 3.0 * w2
    if limit == "small_m":
        x = (g * m / denom) ** (1.0 / 3.0)
        branch = LibrationBranch.OUTER
    elif limit == "small_B":
        x = -coeff.b_coeff / denom
        branch = LibrationBranch.INNER if x < 0 else LibrationBranch.OUTER
    else:
        raise ValueError(f"unknown limit {limit!r}")
    return LibrationResult(
        branch=branch, x_over_r=x / system.radius, method="asymptotic",
        converged=True, residual=math.nan, iterations=0,
    )


def three_body_collinear(mass_ratio: float) -> float:
    """Classical collinear-point offset (m / 3M)^(1/3) for mass ratio m/M."""
    if mass_ratio <= 0:
        raise ValueError(f"mass ratio must be > 0, got {mass_ratio}")
    return (mass_ratio / 3.0) ** (1.0 / 3.0)


def noncollinear_check(system: RingSystem) -> tuple[float, float]:
    """(radial, tangential) residual at the midpoint ray phi = pi/N, x = 0.

    The tangential residual vanishes by symmetry; the radial residual
    measures how far the rigid rotation rate is from balancing the
    midpoint ring pull (it is not zero in general).
    """
    r = system.radius
    g = system.grav_constant
    omega_sq = omega_equilibrium(system).omega ** 2
    sample = ring_force(system, 0.0, math.pi / system.n_particles,
                        include_nearest=True)
    radial = -r * omega_sq + g * system.central_mass / r**2 - sample.radial
    return radial, sample.tangential


def noncollinear_balanced_omega(system: RingSystem) -> float:
    """Rotation rate that exactly balances the midpoint ray at x = 0."""
    r = system.radius
    g = system.grav_constant
    sample = ring_force(system, 0.0, math.pi / system.n_particles,
                        include_nearest=True)
    omega_sq = (g * system.central_mass / r**2 - sample.radial) / r
    if omega_sq <= 0:
        raise ValueError("no real corotation rate balances the midpoint ray")
    return math.sqrt(omega_sq)


@dataclass(frozen=True)
class SweepRow:
    n_particles: int
    ring_to_central_mass: float
    inner: LibrationResult | None
    outer: LibrationResult | None
    three_body: float


def sweep_tables(n_values, ratio_values, *, grav_constant: float = 1.0) -> list[SweepRow]:
    """Inner/outer full-solver roots plus the three-body column over a
    (N, mN/M) grid, in input order.  Units G = M = R = 1; the ratio is the
    total ring mass over the central mass."""
    rows = []
    for n in n_values:
        for ratio in ratio_values:
            system = RingSystem(
                n_particles=int(n), particle_mass=ratio / int(n),
                central_mass=1.0, radius=1.0, grav_constant=grav_constant,
            )
            rows.append(SweepRow(
                n_particles=int(n),
                ring_to_central_mass=ratio,
                inner=solve_full(system, LibrationBranch.INNER),
                outer=solve_full(system, LibrationBranch.OUTER),
                three_body=three_body_collinear(ratio / int(n)),
            ))
    return rows
