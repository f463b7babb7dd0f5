import math

import numpy as np
import pytest

from ringdyn.ring_model import (CoincidenceError, RingSystem,
                                chord_geometry, potential, ring_force,
                                ring_positions, total_force)
from ringdyn.ring_sums import ring_coefficients


class TestRingSystem:
    def test_valid(self):
        s = RingSystem(10, 0.01, 1.0)
        assert s.sector_angle == pytest.approx(2 * math.pi / 10)

    @pytest.mark.parametrize("kwargs", [
        dict(n_particles=1, particle_mass=1.0, central_mass=1.0),
        dict(n_particles=5, particle_mass=1.0, central_mass=1.0, radius=0.0),
        dict(n_particles=5, particle_mass=-1.0, central_mass=1.0),
        dict(n_particles=5, particle_mass=0.0, central_mass=0.0),
        dict(n_particles=5, particle_mass=1.0, central_mass=1.0, grav_constant=0.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            RingSystem(**kwargs)


class TestChordGeometry:
    def test_opposite_point_unit_ring(self):
        dist_sq, cos_phi = chord_geometry(RingSystem(4, 1, 0), 0.0, math.pi)
        assert dist_sq == pytest.approx(4.0, rel=1e-15)
        assert cos_phi == pytest.approx(1.0, rel=1e-12)

    def test_quarter_circle_chord(self):
        dist_sq, _ = chord_geometry(RingSystem(4, 1, 0), 0.0, math.pi / 2)
        assert dist_sq == pytest.approx(2.0, rel=1e-15)

    def test_offset_point(self):
        dist_sq, _ = chord_geometry(RingSystem(4, 1, 0), 0.1, math.pi)
        assert dist_sq == pytest.approx(0.01 + 4 * 1.1, rel=1e-15)

    def test_matches_law_of_cosines(self):
        system = RingSystem(7, 1, 0, radius=2.3)
        rng = np.random.default_rng(42)
        for _ in range(50):
            x = rng.uniform(-0.5, 1.0) * system.radius
            alpha = rng.uniform(0.05, 2 * math.pi - 0.05)
            r_t = system.radius + x
            direct = (r_t**2 + system.radius**2
                      - 2 * r_t * system.radius * math.cos(alpha))
            dist_sq, _ = chord_geometry(system, x, alpha)
            assert dist_sq == pytest.approx(direct, rel=1e-12)

    def test_coincidence_raises(self):
        with pytest.raises(CoincidenceError):
            chord_geometry(RingSystem(4, 1, 0), 0.0, 0.0)


class TestRingForce:
    def test_two_particle_single_term(self):
        # one ring particle across the diameter: |F| = Gm*2R/(2R)^3 = 1/4
        force = ring_force(RingSystem(2, 1.0, 0.0), 0.0, 0.0,
                           include_nearest=False)
        assert force.radial == pytest.approx(-0.25, rel=1e-15)
        assert abs(force.tangential) < 1e-15

    def test_symmetric_midpoint_tangential_zero(self):
        for n in (7, 8):
            system = RingSystem(n, 1.0, 0.0)
            force = ring_force(system, 0.0, math.pi / n, include_nearest=True)
            assert abs(force.tangential) < 1e-12 * abs(force.radial)

    def test_cross_module_b_coefficient(self):
        system = RingSystem(10, 0.37, 0.0)
        force = ring_force(system, 0.0, 0.0, include_nearest=False)
        assert force.radial == pytest.approx(-ring_coefficients(system).b_coeff,
                                             rel=1e-12)

    def test_rotational_symmetry_exact(self):
        system = RingSystem(12, 1.0, 0.0)
        base = ring_force(system, 0.07, 0.0, include_nearest=True)
        shifted = ring_force(system, 0.07, system.sector_angle,
                             include_nearest=True)
        assert shifted.radial == base.radial
        assert shifted.tangential == base.tangential

    def test_rotational_symmetry_generic_phi(self):
        system = RingSystem(9, 1.0, 0.0)
        phi = 0.11
        base = ring_force(system, -0.04, phi, include_nearest=True)
        shifted = ring_force(system, -0.04, phi + system.sector_angle,
                             include_nearest=True)
        assert shifted.radial == pytest.approx(base.radial, rel=1e-13)
        assert shifted.tangential == pytest.approx(base.tangential, rel=1e-10,
                                                   abs=1e-13 * abs(base.radial))

    def test_net_inward_outside_ring(self):
        force = ring_force(RingSystem(16, 1.0, 0.0), 0.2, 0.0,
                           include_nearest=False)
        assert force.radial < 0

    def test_coincidence_with_nearest(self):
        with pytest.raises(CoincidenceError):
            ring_force(RingSystem(8, 1.0, 0.0), 0.0, 0.0, include_nearest=True)

    def test_matches_direct_vector_sum(self):
        # independent Cartesian oracle
        system = RingSystem(11, 0.7, 0.0, radius=1.9, grav_constant=2.0)
        rng = np.random.default_rng(7)
        for include in (True, False):
            for _ in range(20):
                x = rng.uniform(-0.4, 0.6) * system.radius
                phi = rng.uniform(0.01, 0.5)
                r_t = system.radius + x
                p = np.array([r_t * math.cos(phi), r_t * math.sin(phi)])
                pos = ring_positions(system)
                if not include:
                    pos = pos[1:]
                delta = pos - p
                dist = np.hypot(delta[:, 0], delta[:, 1])
                acc = (system.grav_constant * system.particle_mass
                       * (delta / dist[:, None] ** 3).sum(axis=0))
                radial_hat = p / r_t
                tang_hat = np.array([-radial_hat[1], radial_hat[0]])
                force = ring_force(system, x, phi, include_nearest=include)
                assert force.radial == pytest.approx(float(acc @ radial_hat),
                                                     rel=1e-11, abs=1e-13)
                assert force.tangential == pytest.approx(float(acc @ tang_hat),
                                                         rel=1e-11, abs=1e-13)


class TestPotential:
    def test_single_particle_unit_distance(self):
        # ring of two, evaluated at unit distance from one particle
        system = RingSystem(2, 1.0, 0.0, radius=0.5)
        # particles at (0.5, 0) and (-0.5, 0); point (0.5, 1) is at distance
        # 1 from the first and sqrt(2) from the second
        u = potential(system, (0.5, 1.0))
        assert u == pytest.approx(1.0 + 1.0 / math.sqrt(2.0), rel=1e-14)

    def test_center_of_four_unit_ring(self):
        assert potential(RingSystem(4, 1.0, 0.0), (0.0, 0.0)) == pytest.approx(4.0)

    def test_coincidence(self):
        with pytest.raises(CoincidenceError):
            potential(RingSystem(4, 1.0, 1.0), (1.0, 0.0))
        with pytest.raises(CoincidenceError):
            potential(RingSystem(4, 1.0, 1.0), (0.0, 0.0))

    def test_gradient_matches_force(self):
        """Central-difference gradient of the potential equals the analytic
        force (ring + central) to 1e-5 relative, over random states."""
        system = RingSystem(9, 0.05, 2.0, radius=1.3)
        rng = np.random.default_rng(123)
        h = 1e-6 * system.radius
        for _ in range(100):
            x = rng.uniform(-0.4, 0.4) * system.radius
            phi = rng.uniform(0.0, 2 * math.pi / system.n_particles)
            if abs(x) < 0.02 * system.radius:
                x = math.copysign(0.02 * system.radius, x or 1.0)
            r_t = system.radius + x
            p = np.array([r_t * math.cos(phi), r_t * math.sin(phi)])
            grad = np.array([
                (potential(system, p + [h, 0]) - potential(system, p - [h, 0])) / (2 * h),
                (potential(system, p + [0, h]) - potential(system, p - [0, h])) / (2 * h),
            ])
            radial_hat = p / r_t
            tang_hat = np.array([-radial_hat[1], radial_hat[0]])
            force = total_force(system, x, phi, include_nearest=True)
            scale = math.hypot(force.radial, force.tangential)
            assert abs(float(grad @ radial_hat) - force.radial) < 1e-5 * scale
            assert abs(float(grad @ tang_hat) - force.tangential) < 1e-5 * scale
