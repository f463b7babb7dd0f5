"""Planar ring central configurations: sums, equilibria, libration points,
double rings, and direct N-body verification."""

from .ring_model import (CoincidenceError, ForceSample, RingSystem,
                         TestParticleState, chord_geometry, potential,
                         ring_force, total_force)
from .ring_sums import (RingCoefficients, SumKind, alpha_coefficient,
                        alpha_prime_coefficient, csc3_sum, csc_sum,
                        csc_sum_asymptotic, ring_coefficients, trig_sum)
from .equilibrium import (DampedParams, EquilibriumInfo, LinearCoeffs,
                          damped_response, epicyclic_omega, force_ratio_series,
                          linearize_radial, omega_equilibrium,
                          omega_ratio_sweep, oscillation_threshold)
from .libration import (LibrationBranch, LibrationResult, QuinticCoeffs,
                        approx_cubic, asymptotic_roots, noncollinear_check,
                        quintic_coeffs, residual_collinear, solve_full,
                        solve_quintic, sweep_tables, three_body_collinear)
from .two_ring import (Arrangement, RingExpansion, TwoRingSystem,
                       build_two_ring, cross_ring_force, place_second_ring,
                       ring_expansion, stationarity_residual)
from .dynamics import (AbortedIntegration, Diagnostics, IntegratorConfig,
                       SimState, init_central_configuration, integrate,
                       integrate_rotating_test_particle, measure_frequency,
                       oscillation_demo)

__version__ = "0.1.0"
