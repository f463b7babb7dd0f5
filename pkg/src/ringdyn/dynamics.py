"""Direct numerical integration of the ring configurations.

Two complementary models: the full planar inertial problem (every body
dynamical, used to verify rigid rotation of the analytic equilibria), and
the rotating-frame test-particle problem with the ring frozen at its
equilibrium geometry (used to measure oscillation frequencies against the
linearized predictions).  Fixed-step RK4 and kick-drift-kick leapfrog
only; close encounters abort the run rather than being regularized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import epicyclic_omega, omega_equilibrium
from .ring_model import CoincidenceError, RingSystem, ring_force, ring_positions
from .two_ring import TwoRingSystem, build_two_ring, fit_common_omega

MIN_SEPARATION = 1e-12


@dataclass
class SimState:
    """Inertial-frame snapshot of all bodies."""

    time: float
    positions: np.ndarray   # (n, 2)
    velocities: np.ndarray  # (n, 2)
    masses: np.ndarray      # (n,)

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        self.velocities = np.atleast_2d(np.asarray(self.velocities, dtype=float))
        self.masses = np.asarray(self.masses, dtype=float)
        n = len(self.masses)
        if self.positions.shape != (n, 2) or self.velocities.shape != (n, 2):
            raise ValueError("positions/velocities must have shape (n, 2)")
        if not (np.all(np.isfinite(self.positions))
                and np.all(np.isfinite(self.velocities))):
            raise ValueError("non-finite state")

    def copy(self) -> "SimState":
        return SimState(self.time, self.positions.copy(),
                        self.velocities.copy(), self.masses.copy())


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"          # "rk4" | "leapfrog"
    step: float = 0.0
    duration: float = 0.0
    record_every: int = 1

    def __post_init__(self):
        if self.method not in ("rk4", "leapfrog"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.duration < self.step:
            raise ValueError("duration must be >= step")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass(frozen=True)
class Diagnostics:
    """Conserved-quantity diagnostics of one recorded snapshot."""

    time: float
    energy: float
    ang_momentum: float
    max_radius_deviation: float


@dataclass
class Trajectory:
    times: list[float] = field(default_factory=list)
    states: list[SimState] = field(default_factory=list)
    diagnostics: list[Diagnostics] = field(default_factory=list)


def _accelerations(positions: np.ndarray, masses: np.ndarray, g: float,
                   min_sep: float) -> np.ndarray:
    delta = positions[None, :, :] - positions[:, None, :]   # delta[i,j] = r_j - r_i
    dist2 = np.einsum("ijk,ijk->ij", delta, delta)
    np.fill_diagonal(dist2, 1.0)
    if np.any(dist2 < min_sep**2):
        raise CoincidenceError("bodies coincide during integration")
    inv_d3 = dist2**-1.5
    np.fill_diagonal(inv_d3, 0.0)
    return g * np.einsum("ij,ijk->ik", inv_d3 * masses[None, :], delta)


def total_energy(state: SimState, g: float) -> float:
    kinetic = 0.5 * math.fsum(
        state.masses * np.einsum("ij,ij->i", state.velocities, state.velocities))
    delta = state.positions[None, :, :] - state.positions[:, None, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", delta, delta))
    iu = np.triu_indices(len(state.masses), k=1)
    pair = state.masses[iu[0]] * state.masses[iu[1]] / dist[iu]
    return kinetic - g * math.fsum(pair)


def total_ang_momentum(state: SimState) -> float:
    lz = state.masses * (state.positions[:, 0] * state.velocities[:, 1]
                         - state.positions[:, 1] * state.velocities[:, 0])
    return math.fsum(lz)


def init_central_configuration(
    system: RingSystem | TwoRingSystem, grav_constant: float | None = None
) -> SimState:
    """Bodies on their polygon(s) with tangential velocities v = Omega r.

    Single rings use the analytic rigid rate (exact stationarity); double
    rings use the common rate fitted to the outer ring, so the residual
    there is a reported diagnostic, not an error.
    """
    if isinstance(system, RingSystem):
        omega = omega_equilibrium(system).omega
        pos = np.vstack([np.zeros((1, 2)), ring_positions(system)])
        masses = np.concatenate([[system.central_mass],
                                 np.full(system.n_particles, system.particle_mass)])
    else:
        omega = fit_common_omega(system, "outer")
        _, pos, masses = build_two_ring(
            system.n_per_ring, system.inner_mass, system.outer_mass,
            system.inner_radius, system.outer_radius, system.central_mass,
            system.arrangement, system.grav_constant,
        )
    vel = omega * np.column_stack([-pos[:, 1], pos[:, 0]])
    return SimState(time=0.0, positions=pos, velocities=vel, masses=masses)


def integrate(state: SimState, config: IntegratorConfig, *,
              grav_constant: float = 1.0) -> Trajectory:
    """Fixed-step integration of pairwise Newtonian gravity.

    Records every config.record_every steps (plus the initial state);
    diagnostics track energy, z angular momentum, and the largest
    fractional radius change of any non-central body.
    """
    g = grav_constant
    s = state.copy()
    ref_radii = np.hypot(s.positions[:, 0], s.positions[:, 1])
    tracked = ref_radii > MIN_SEPARATION
    min_sep = MIN_SEPARATION * max(float(ref_radii.max()), 1.0)

    traj = Trajectory()

    def record(st: SimState):
        radii = np.hypot(st.positions[:, 0], st.positions[:, 1])
        dev = (np.abs(radii[tracked] - ref_radii[tracked]) / ref_radii[tracked]
               if tracked.any() else np.zeros(1))
        traj.times.append(st.time)
        traj.states.append(st.copy())
        traj.diagnostics.append(Diagnostics(
            time=st.time,
            energy=total_energy(st, g),
            ang_momentum=total_ang_momentum(st),
            max_radius_deviation=float(dev.max()),
        ))

    record(s)
    n_steps = int(round(config.duration / config.step))
    dt = config.step

    def step_once(i: int):
        nonlocal acc
        if config.method == "rk4":
            p, v = s.positions, s.velocities
            a1 = _accelerations(p, s.masses, g, min_sep)
            k1p, k1v = v, a1
            a2 = _accelerations(p + 0.5 * dt * k1p, s.masses, g, min_sep)
            k2p, k2v = v + 0.5 * dt * k1v, a2
            a3 = _accelerations(p + 0.5 * dt * k2p, s.masses, g, min_sep)
            k3p, k3v = v + 0.5 * dt * k2v, a3
            a4 = _accelerations(p + dt * k3p, s.masses, g, min_sep)
            k4p, k4v = v + dt * k3v, a4
            s.positions = p + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
            s.velocities = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        else:  # kick-drift-kick leapfrog
            s.velocities = s.velocities + 0.5 * dt * acc
            s.positions = s.positions + dt * s.velocities
            acc = _accelerations(s.positions, s.masses, g, min_sep)
            s.velocities = s.velocities + 0.5 * dt * acc
        s.time = i * dt + state.time
        if not np.all(np.isfinite(s.positions)):
            raise CoincidenceError(f"integration blew up at t = {s.time}")

    acc = None
    try:
        if config.method == "leapfrog":
            acc = _accelerations(s.positions, s.masses, g, min_sep)
        for i in range(1, n_steps + 1):
            step_once(i)
            if i % config.record_every == 0 or i == n_steps:
                record(s)
    except CoincidenceError as exc:
        # abort with the recorded prefix attached, for partial output
        raise AbortedIntegration(str(exc), trajectory=traj) from exc
    return traj


def rotating_rhs(system: RingSystem, omega: float, state_vec: np.ndarray,
                 include_nearest: bool = True) -> np.ndarray:
    """Right-hand side of the rotating-frame test-particle equations.

    state_vec = (x, x_dot, phi, phi_dot); the ring is frozen at its
    polygon, the frame rotates at omega.
    """
    x, x_dot, phi, phi_dot = state_vec
    r = system.radius + x
    if r <= 0:
        raise CoincidenceError("test particle fell into the center")
    force = ring_force(system, x, phi, include_nearest=include_nearest)
    g = system.grav_constant
    x_acc = (r * (phi_dot + omega) ** 2
             - g * system.central_mass / r**2 + force.radial)
    phi_acc = (force.tangential - 2.0 * (phi_dot + omega) * x_dot) / r
    return np.array([x_dot, x_acc, phi_dot, phi_acc])


def integrate_rotating_test_particle(
    system: RingSystem,
    initial,
    config: IntegratorConfig,
    *,
    omega: float | None = None,
    include_nearest: bool = True,
):
    """RK4 trajectory of a rotating-frame test particle; ring frozen.

    Returns (times, states) with states rows (x, x_dot, phi, phi_dot).
    The frame rate defaults to the configuration's rigid rotation rate.
    """
    if omega is None:
        omega = omega_equilibrium(system).omega
    y = np.array([initial.x, initial.x_dot, initial.phi, initial.phi_dot],
                 dtype=float)
    dt = config.step
    n_steps = int(round(config.duration / dt))
    times = [0.0]
    states = [y.copy()]
    try:
        for i in range(1, n_steps + 1):
            k1 = rotating_rhs(system, omega, y, include_nearest)
            k2 = rotating_rhs(system, omega, y + 0.5 * dt * k1, include_nearest)
            k3 = rotating_rhs(system, omega, y + 0.5 * dt * k2, include_nearest)
            k4 = rotating_rhs(system, omega, y + dt * k3, include_nearest)
            y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise CoincidenceError(
                    f"rotating-frame run blew up at step {i}")
            if i % config.record_every == 0 or i == n_steps:
                times.append(i * dt)
                states.append(y.copy())
    except CoincidenceError as exc:
        raise AbortedIntegration(str(exc), times=np.array(times),
                                 states=np.array(states)) from exc
    return np.array(times), np.array(states)


def rotating_to_inertial(system: RingSystem, omega: float, times: np.ndarray,
                         states: np.ndarray) -> np.ndarray:
    """Map rotating-frame test-particle states to inertial positions."""
    r = system.radius + states[:, 0]
    ang = states[:, 2] + omega * times
    return np.column_stack([r * np.cos(ang), r * np.sin(ang)])


def integrate_prescribed_ring_inertial(
    system: RingSystem,
    initial,
    config: IntegratorConfig,
    *,
    omega: float | None = None,
    include_nearest: bool = True,
):
    """Inertial test particle with the ring prescribed on rigid rotation.

    Same physical model as the rotating-frame integrator in different
    coordinates; used as a frame-consistency cross-check.
    """
    if omega is None:
        omega = omega_equilibrium(system).omega
    g = system.grav_constant
    gm = g * system.particle_mass
    n = system.n_particles
    base = 2.0 * math.pi * np.arange(0 if include_nearest else 1, n) / n

    def acc(t: float, p: np.ndarray) -> np.ndarray:
        theta = base + omega * t
        ring = system.radius * np.column_stack([np.cos(theta), np.sin(theta)])
        delta = ring - p
        dist = np.hypot(delta[:, 0], delta[:, 1])
        if np.any(dist < MIN_SEPARATION * system.radius):
            raise CoincidenceError("test particle hit a ring particle")
        inv_d3 = dist**-3
        a = gm * np.array([math.fsum(delta[:, 0] * inv_d3),
                           math.fsum(delta[:, 1] * inv_d3)])
        r = math.hypot(p[0], p[1])
        a += -g * system.central_mass * p / r**3
        return a

    r0 = system.radius + initial.x
    p = np.array([r0 * math.cos(initial.phi), r0 * math.sin(initial.phi)])
    # inertial velocity of a point moving with the rotating frame + offsets
    v = np.array([
        initial.x_dot * math.cos(initial.phi)
        - r0 * (initial.phi_dot + omega) * math.sin(initial.phi),
        initial.x_dot * math.sin(initial.phi)
        + r0 * (initial.phi_dot + omega) * math.cos(initial.phi),
    ])
    dt = config.step
    n_steps = int(round(config.duration / dt))
    times = [0.0]
    out = [p.copy()]
    t = 0.0
    for i in range(1, n_steps + 1):
        k1p, k1v = v, acc(t, p)
        k2p, k2v = v + 0.5 * dt * k1v, acc(t + 0.5 * dt, p + 0.5 * dt * k1p)
        k3p, k3v = v + 0.5 * dt * k2v, acc(t + 0.5 * dt, p + 0.5 * dt * k2p)
        k4p, k4v = v + dt * k3v, acc(t + dt, p + dt * k3p)
        p = p + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        v = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = i * dt
        if i % config.record_every == 0 or i == n_steps:
            times.append(t)
            out.append(p.copy())
    return np.array(times), np.array(out)


class AbortedIntegration(CoincidenceError):
    """Run aborted on coincidence/blow-up; carries the recorded prefix."""

    def __init__(self, message: str, trajectory=None, times=None, states=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.times = times
        self.states = states


class InsufficientCrossingsError(ValueError):
    """Too few zero crossings to estimate a frequency."""


def measure_frequency(times, series) -> tuple[float, float]:
    """Angular frequency from zero crossings of the demeaned series.

    Crossing times (linear interpolation) are regressed against the
    half-period index; returns (omega, standard_error).  Requires at
    least 10 crossings.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(series, dtype=float) - float(np.mean(series))
    sign = np.sign(y)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(idx) < 10:
        raise InsufficientCrossingsError(
            f"need >= 10 zero crossings, found {len(idx)}")
    crossings = t[idx] - y[idx] * (t[idx + 1] - t[idx]) / (y[idx + 1] - y[idx])
    k = np.arange(len(crossings), dtype=float)
    # least-squares line t_k = t0 + k * (T/2)
    km, tm = k.mean(), crossings.mean()
    skk = float(np.sum((k - km) ** 2))
    slope = float(np.sum((k - km) * (crossings - tm))) / skk
    resid = crossings - (tm + slope * (k - km))
    dof = max(len(crossings) - 2, 1)
    slope_se = math.sqrt(float(np.sum(resid**2)) / dof / skk)
    omega = math.pi / slope
    return omega, math.pi * slope_se / slope**2


def oscillation_demo(
    system: RingSystem,
    resistance: float,
    kick: float,
    *,
    forcing: float = 0.0,
    periods: float = 8.0,
    samples_per_period: int = 256,
):
    """Undamped and damped responses of the linearized radial oscillator.

    Integrates x'' = -omega^2 x - 2 k x' + forcing * x from rest with a
    velocity kick; returns (t_over_T, x_undamped/kick-scale,
    x_damped/kick-scale) suitable for plotting.
    """
    if resistance < 0:
        raise ValueError("resistance must be >= 0")
    omega = epicyclic_omega(system)
    period = 2.0 * math.pi / omega
    dt = period / samples_per_period
    n_steps = int(round(periods * samples_per_period))
    scale = kick / omega  # amplitude of the undamped response

    def run(k: float) -> np.ndarray:
        y = np.array([0.0, kick])
        out = [y[0]]

        def rhs(s):
            return np.array([s[1],
                             -(omega**2) * s[0] - 2.0 * k * s[1] + forcing * s[0]])

        for _ in range(n_steps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
            y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            out.append(y[0])
        return np.array(out) / scale

    t_over_period = np.arange(n_steps + 1) * dt / period
    return t_over_period, run(0.0), run(resistance)
