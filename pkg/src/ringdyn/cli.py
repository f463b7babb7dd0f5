"""Command-line front end.

Subcommands reproduce the model's reference tables and figure data as CSV
(header row always present, floats at 9 significant digits, '\n' line
endings, byte-identical across runs and thread counts), run sweeps and
simulations, and -- via the report subcommand -- render the figures to
image files next to the delimited output.

All inputs are dimensionless: G = M = R = 1 internally, ring masses given
as mN/M (total ring over central) or per-particle m/M.  Exit codes:
0 success, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

from . import dynamics, equilibrium, libration, ring_sums
from .ring_model import CoincidenceError, RingSystem, TestParticleState

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

TABLE_N_VALUES = (50, 100, 1000)
TABLE_RATIOS = (1e-5, 1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0)
TABLE4_N_VALUES = (10, 20, 50, 100, 200, 1250, 2500, 5000, 10000, 20000)


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """One CSV field: floats at 9 significant digits."""
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def write_csv(stream, header, rows):
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def emit(path, header, rows):
    stream, close = _open_output(path)
    try:
        write_csv(stream, header, rows)
    finally:
        if close:
            stream.close()


def load_config(path) -> dict[str, str]:
    """Flat key = value file, UTF-8, '#' comments."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return out


def apply_config(args, argv):
    """Fill parser defaults from --config; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    parser = args.subparser
    values = load_config(args.config)
    known = {a.dest: a for a in parser._actions
             if a.dest not in ("help", "config")}
    explicit = _explicit_dests(parser, argv)
    for key, raw in values.items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r}")
        if key in explicit:
            continue
        action = known[key]
        try:
            if action.type is not None:
                value = action.type(raw)
            elif isinstance(action.default, bool):
                value = raw.lower() in ("1", "true", "yes", "on")
            else:
                value = raw
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {exc}") from exc
        setattr(args, key, value)
    return args


def _explicit_dests(parser, argv) -> set[str]:
    given = set()
    for a in parser._actions:
        for opt in a.option_strings:
            if any(tok == opt or tok.startswith(opt + "=") for tok in argv):
                given.add(a.dest)
    return given


def _check_finite(args, names):
    for name in names:
        v = getattr(args, name, None)
        if v is None:
            continue
        if isinstance(v, float) and not math.isfinite(v):
            raise UsageError(f"{name} must be finite, got {v}")


def _parallel_rows(worker, items, threads):
    if threads <= 1:
        return [worker(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, items))


# --------------------------------------------------------------------------
# sums
# --------------------------------------------------------------------------

def cmd_sums(args) -> int:
    if args.table4:
        n_values = list(TABLE4_N_VALUES)
    elif args.n_particles:
        n_values = args.n_particles
    else:
        raise UsageError("sums: give -N or --table4")
    for n in n_values:
        if n < 2:
            raise UsageError(f"N must be >= 2, got {n}")

    def row(n):
        alpha_prime = (ring_sums.alpha_prime_coefficient(n) if n % 2 == 0 else "")
        return (n, ring_sums.csc_sum(n), ring_sums.csc3_sum(n),
                ring_sums.csc_sum_asymptotic(n),
                ring_sums.alpha_coefficient(n), alpha_prime)

    rows = _parallel_rows(row, n_values, args.threads)
    emit(args.output,
         ("N", "csc_sum", "csc3_sum", "csc_sum_asymptotic", "alpha", "alpha_prime"),
         rows)
    return 0


# --------------------------------------------------------------------------
# libration
# --------------------------------------------------------------------------

def _libration_fields(result):
    if result is None:
        return "", "absent", ""
    return result.x_over_r, ("converged" if result.converged else "unconverged"), result.residual


def cmd_libration(args) -> int:
    header = ("N", "mN_over_M", "x_inner", "inner_status", "x_outer",
              "outer_status", "x0_three_body", "method",
              "residual_inner", "residual_outer")
    if args.table2 or args.table3:
        rows_spec = [(n, r) for n in TABLE_N_VALUES for r in TABLE_RATIOS]

        def row(spec):
            n, ratio = spec
            system = RingSystem(n, ratio / n, 1.0)
            inner = libration.solve_full(system, libration.LibrationBranch.INNER)
            outer = libration.solve_full(system, libration.LibrationBranch.OUTER)
            xi, si, ri = _libration_fields(inner)
            xo, so, ro = _libration_fields(outer)
            return (n, ratio, xi, si, xo, so,
                    libration.three_body_collinear(ratio / n), "full", ri, ro)

        rows = _parallel_rows(row, rows_spec, args.threads)
        emit(args.output, header, rows)
        return 0

    if args.n_particles is None or args.ratio is None or args.branch is None:
        raise UsageError("libration: give -N, --ratio and --branch "
                         "(or --table2/--table3)")
    if args.n_particles < 2:
        raise UsageError(f"N must be >= 2, got {args.n_particles}")
    if args.ratio <= 0:
        print("libration: no root exists for a massless ring", file=sys.stderr)
        return EXIT_NUMERICAL
    n, ratio = args.n_particles, args.ratio
    system = RingSystem(n, ratio / n, 1.0)
    branch = libration.LibrationBranch(args.branch)
    result = libration.solve_full(system, branch)
    if result is None or not result.converged:
        print(f"libration: {args.branch} point absent or unconverged",
              file=sys.stderr)
        return EXIT_NUMERICAL
    xi, si, ri = _libration_fields(result if branch is libration.LibrationBranch.INNER else None)
    xo, so, ro = _libration_fields(result if branch is libration.LibrationBranch.OUTER else None)
    if branch is libration.LibrationBranch.INNER:
        si = "converged"
        so = "not_requested"
    else:
        so = "converged"
        si = "not_requested"
    emit(args.output, header,
         [(n, ratio, xi, si, xo, so,
           libration.three_body_collinear(ratio / n), "full", ri, ro)])
    return 0


# --------------------------------------------------------------------------
# omega
# --------------------------------------------------------------------------

def cmd_omega(args) -> int:
    if args.n_particles:
        n_values = args.n_particles
    else:
        n_values = [int(10**k) for k in range(2, 13, 2)]
    for n in n_values:
        if n < 2:
            raise UsageError(f"N must be >= 2, got {n}")
    if args.fraction < 0:
        raise UsageError("fraction must be >= 0")
    rows = [(n, args.fraction, ratio)
            for n, ratio in equilibrium.omega_ratio_sweep(n_values, args.fraction)]
    emit(args.output, ("N", "mass_fraction", "omega_ratio"), rows)
    return 0


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------

def fig1_series(n: int, ratio: float, points: int = 60):
    import numpy as np
    system = RingSystem(n, ratio / n, 1.0)
    xs = np.linspace(-0.3, 0.3, points)
    xs = xs[xs != 0.0]
    return equilibrium.force_ratio_series(system, xs)


def fig2_series(n: int, ratio: float, resistance: float, kick: float = 1e-4):
    system = RingSystem(n, ratio / n, 1.0)
    return dynamics.oscillation_demo(system, resistance, kick)


def cmd_figures(args) -> int:
    if args.fig1 == args.fig2:
        raise UsageError("figures: give exactly one of --fig1/--fig2")
    if args.fig1:
        rows = fig1_series(args.n_particles or 10, args.ratio)
        emit(args.output, ("x_over_R", "radial_over_tangential"), rows)
    else:
        t, undamped, damped = fig2_series(args.n_particles or 50, args.ratio,
                                          args.resistance)
        rows = list(zip(t, undamped, damped))
        emit(args.output, ("t_over_T", "x_undamped", "x_damped"), rows)
    return 0


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Parsed key = value settings of one simulation run."""

    mode: str = "inertial"
    n_particles: int = 20
    ring_mass_ratio: float = 1e-6
    method: str = "rk4"
    steps_per_period: int = 4096
    periods: float = 1.0
    record_every: int = 64
    kick: float = 1e-4
    trajectory: str = "trajectory.csv"
    diagnostics: str = "diagnostics.csv"
    measure_frequency: str = "no"

    def validate(self):
        if self.mode not in ("inertial", "rotating"):
            raise UsageError("mode must be inertial or rotating")
        for key in ("ring_mass_ratio", "periods", "kick"):
            if not math.isfinite(getattr(self, key)):
                raise UsageError(f"{key} must be finite")
        if (self.n_particles < 2 or self.steps_per_period < 4
                or self.periods <= 0):
            raise UsageError("simulate: parameter out of range")
        return self


def _parse_run_config(path) -> RunConfig:
    types = {f.name: f.type for f in fields(RunConfig)}
    casts = {"str": str, "int": int, "float": float}
    cfg = RunConfig()
    for key, value in load_config(path).items():
        if key not in types:
            raise UsageError(f"unknown config key {key!r}")
        try:
            setattr(cfg, key, casts[types[key]](value))
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {exc}") from exc
    return cfg.validate()


def _flush_rows(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(fh, header, rows)
        fh.write("truncated" + "," * (len(header) - 1) + "\n")


TRAJ_HEADER = ("t", "body", "x", "y", "vx", "vy")
DIAG_HEADER = ("t", "energy", "ang_momentum", "max_radius_deviation")


def _inertial_rows(traj):
    traj_rows = [
        (st.time, body, st.positions[body, 0], st.positions[body, 1],
         st.velocities[body, 0], st.velocities[body, 1])
        for st in traj.states for body in range(len(st.masses))
    ]
    diag_rows = [(d.time, d.energy, d.ang_momentum, d.max_radius_deviation)
                 for d in traj.diagnostics]
    return traj_rows, diag_rows


def _rotating_rows(system, omega, times, states):
    positions = dynamics.rotating_to_inertial(system, omega, times, states)
    traj_rows = [(t, 0, positions[i, 0], positions[i, 1], states[i, 1],
                  states[i, 3]) for i, t in enumerate(times)]
    diag_rows = [(t, "", "", abs(states[i, 0]) / system.radius)
                 for i, t in enumerate(times)]
    return traj_rows, diag_rows


def cmd_simulate(args) -> int:
    cfg = _parse_run_config(args.config_file)
    n = cfg.n_particles
    system = RingSystem(n, cfg.ring_mass_ratio / n, 1.0)
    omega = equilibrium.omega_equilibrium(system).omega
    period = 2.0 * math.pi / omega
    config = dynamics.IntegratorConfig(
        method=cfg.method, step=period / cfg.steps_per_period,
        duration=cfg.periods * period, record_every=cfg.record_every,
    )
    try:
        if cfg.mode == "inertial":
            state = dynamics.init_central_configuration(system)
            traj = dynamics.integrate(state, config)
            traj_rows, diag_rows = _inertial_rows(traj)
            freq_series = None
        else:
            initial = TestParticleState(x=cfg.kick * system.radius,
                                        phi=math.pi / n)
            times, states = dynamics.integrate_rotating_test_particle(
                system, initial, config)
            traj_rows, diag_rows = _rotating_rows(system, omega, times, states)
            freq_series = (times, states[:, 0])
    except dynamics.AbortedIntegration as exc:
        # flush whatever was recorded, with an explicit truncation marker row
        if exc.trajectory is not None:
            traj_rows, diag_rows = _inertial_rows(exc.trajectory)
        elif exc.times is not None:
            traj_rows, diag_rows = _rotating_rows(system, omega, exc.times,
                                                  exc.states)
        else:
            traj_rows, diag_rows = [], []
        _flush_rows(cfg.trajectory, TRAJ_HEADER, traj_rows)
        _flush_rows(cfg.diagnostics, DIAG_HEADER, diag_rows)
        print(f"simulate: aborted: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    emit(cfg.trajectory, TRAJ_HEADER, traj_rows)
    emit(cfg.diagnostics, DIAG_HEADER, diag_rows)
    if cfg.measure_frequency.lower() in ("1", "true", "yes", "on"):
        if freq_series is None:
            raise UsageError("frequency measurement needs mode = rotating")
        freq, err = dynamics.measure_frequency(*freq_series)
        predicted = equilibrium.epicyclic_omega(system)
        print(f"frequency,{fmt(freq)},stderr,{fmt(err)},predicted,{fmt(predicted)}")
    return 0


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

def cmd_report(args) -> int:
    from pathlib import Path

    from . import plotting

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    n, ratio = args.n_particles or 10, args.ratio

    rows1 = fig1_series(n, ratio)
    emit(str(outdir / "force_ratio.csv"),
         ("x_over_R", "radial_over_tangential"), rows1)
    plotting.save_force_ratio(rows1, outdir / "force_ratio.png", n)

    t, undamped, damped = fig2_series(n, ratio, args.resistance)
    emit(str(outdir / "oscillations.csv"), ("t_over_T", "x_undamped", "x_damped"),
         list(zip(t, undamped, damped)))
    plotting.save_oscillations(t, undamped, damped, outdir / "oscillations.png",
                               args.resistance)

    sums_rows = []
    for nn in TABLE4_N_VALUES:
        ap = ring_sums.alpha_prime_coefficient(nn) if nn % 2 == 0 else ""
        sums_rows.append((nn, ring_sums.csc_sum(nn), ring_sums.csc3_sum(nn),
                          ring_sums.csc_sum_asymptotic(nn),
                          ring_sums.alpha_coefficient(nn), ap))
    emit(str(outdir / "coefficients.csv"),
         ("N", "csc_sum", "csc3_sum", "csc_sum_asymptotic", "alpha", "alpha_prime"),
         sums_rows)

    omega_rows = [(nn, args.fraction, rr) for nn, rr in
                  equilibrium.omega_ratio_sweep(
                      [int(10**k) for k in range(2, 13)], args.fraction)]
    emit(str(outdir / "omega_ratio.csv"), ("N", "mass_fraction", "omega_ratio"),
         omega_rows)
    plotting.save_omega_ratio(omega_rows, outdir / "omega_ratio.png")

    lib_rows = []
    for row in libration.sweep_tables(TABLE_N_VALUES, TABLE_RATIOS):
        xi, si, ri = _libration_fields(row.inner)
        xo, so, ro = _libration_fields(row.outer)
        lib_rows.append((row.n_particles, row.ring_to_central_mass,
                         xi, si, xo, so, row.three_body, "full", ri, ro))
    emit(str(outdir / "libration.csv"),
         ("N", "mN_over_M", "x_inner", "inner_status", "x_outer", "outer_status",
          "x0_three_body", "method", "residual_inner", "residual_outer"),
         lib_rows)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--config", help="flat key = value settings file")
    sub.add_argument("-o", "--output", default=None,
                     help="output CSV path (default stdout)")
    sub.add_argument("--threads", type=int, default=1,
                     help="parallelism cap for sweep rows")
    sub.set_defaults(subparser=sub)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringdyn",
        description="Ring central configurations: sums, equilibria, "
                    "libration points, simulations.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("sums", help="cosecant sums and derived coefficients")
    p.add_argument("-N", dest="n_particles", type=int, action="append")
    p.add_argument("--table4", action="store_true",
                   help="reference N set for the coefficient table")
    _add_common(p)
    p.set_defaults(func=cmd_sums)

    p = subs.add_parser("libration", help="collinear libration points")
    p.add_argument("-N", dest="n_particles", type=int)
    p.add_argument("--ratio", type=float, help="total ring mass over central mass")
    p.add_argument("--branch", choices=("inner", "outer"))
    p.add_argument("--table2", action="store_true", help="full inner/outer grid")
    p.add_argument("--table3", action="store_true", help="alias of --table2")
    _add_common(p)
    p.set_defaults(func=cmd_libration)

    p = subs.add_parser("omega", help="rotation-rate increase over Kepler")
    p.add_argument("-N", dest="n_particles", type=int, action="append")
    p.add_argument("--fraction", type=float, default=0.01,
                   help="total ring mass / central mass")
    _add_common(p)
    p.set_defaults(func=cmd_omega)

    p = subs.add_parser("figures", help="figure data series as CSV")
    p.add_argument("--fig1", action="store_true",
                   help="radial/tangential force ratio")
    p.add_argument("--fig2", action="store_true",
                   help="stationary and damped oscillations")
    p.add_argument("-N", dest="n_particles", type=int)
    p.add_argument("--ratio", type=float, default=1e-3)
    p.add_argument("--resistance", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_figures)

    p = subs.add_parser("simulate", help="run an N-body or test-particle case")
    p.add_argument("config_file", help="key = value run configuration")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("report", help="CSV tables plus rendered figures")
    p.add_argument("--outdir", required=True)
    p.add_argument("-N", dest="n_particles", type=int)
    p.add_argument("--ratio", type=float, default=1e-3)
    p.add_argument("--fraction", type=float, default=0.01)
    p.add_argument("--resistance", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = apply_config(args, argv)
        _check_finite(args, ("ratio", "fraction", "resistance"))
        return args.func(args)
    except UsageError as exc:
        print(f"ringdyn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, CoincidenceError) as exc:
        print(f"ringdyn: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
