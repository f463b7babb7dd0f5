import math

import mpmath
import numpy as np
import pytest

from ringdyn.ring_model import RingSystem
from ringdyn.ring_sums import (SumKind, TWO_ZETA3, alpha_coefficient,
                               alpha_prime_coefficient, csc3_sum,
                               csc3_sum_asymptotic, csc_sum,
                               csc_sum_asymptotic, ring_coefficients,
                               trig_sum)


def mp_csc_sum(n, power=1):
    """High-precision direct summation oracle."""
    with mpmath.workdps(50):
        total = mpmath.fsum(1 / mpmath.sin(mpmath.pi * j / n) ** power
                            for j in range(1, n))
        return float(total)


class TestCscSum:
    def test_n2_single_term(self):
        assert csc_sum(2) == 1.0

    def test_n3_closed_form(self):
        assert csc_sum(3) == pytest.approx(4.0 / math.sqrt(3.0), rel=1e-15)

    def test_n4_closed_form(self):
        assert csc_sum(4) == pytest.approx(1.0 + 2.0 * math.sqrt(2.0), rel=1e-15)

    @pytest.mark.parametrize("n", [5, 17, 100, 1001])
    def test_matches_high_precision_oracle(self, n):
        assert csc_sum(n) == pytest.approx(mp_csc_sum(n), rel=1e-14)

    def test_strictly_increasing(self):
        values = [csc_sum(n) for n in range(3, 60)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            csc_sum(1)

    def test_bitwise_deterministic(self):
        assert all(csc_sum(997) == csc_sum(997) for _ in range(3))


class TestCsc3Sum:
    def test_n2(self):
        assert csc3_sum(2) == 1.0

    def test_n4_closed_form(self):
        assert csc3_sum(4) == pytest.approx(1.0 + 4.0 * math.sqrt(2.0), rel=1e-15)

    def test_n10_oracle(self):
        assert csc3_sum(10) == pytest.approx(mp_csc_sum(10, power=3), abs=1e-10)
        assert csc3_sum(10) == pytest.approx(84.7276, abs=1e-3)

    @pytest.mark.parametrize("n", [7, 64, 333])
    def test_matches_high_precision_oracle(self, n):
        assert csc3_sum(n) == pytest.approx(mp_csc_sum(n, power=3), rel=1e-13)

    def test_strictly_increasing(self):
        values = [csc3_sum(n) for n in range(3, 40)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_nearest_neighbor_dominance(self):
        # the j in {1, N-1} pair carries > 80% of the total for N >= 50
        for n in (50, 128, 1000):
            nearest = 2.0 / math.sin(math.pi / n) ** 3
            assert nearest > 0.8 * csc3_sum(n)


class TestAsymptotics:
    def test_corrected_close_to_direct_n10(self):
        direct = csc_sum(10)
        approx = csc_sum_asymptotic(10)
        assert abs(approx - direct) / direct < 1e-3

    def test_corrected_close_to_direct_n1e6(self):
        direct = csc_sum(10**6)
        approx = csc_sum_asymptotic(10**6)
        assert abs(approx - direct) / direct < 1e-4

    def test_paper_literal_far_from_direct(self):
        direct = csc_sum(10**6)
        approx = csc_sum_asymptotic(10**6, variant="paper_literal")
        assert abs(approx - direct) / direct > 1e-2

    def test_huge_n_magnitude(self):
        assert csc_sum_asymptotic(10**12) == pytest.approx(1.766e13, rel=1e-3)

    def test_auto_switch_above_direct_limit(self):
        n = 10**8
        assert csc_sum(n) == csc_sum_asymptotic(n)
        assert csc3_sum(n) == csc3_sum_asymptotic(n)

    def test_csc3_asymptotic_accuracy(self):
        n = 10**6
        direct = csc3_sum(n)
        assert abs(csc3_sum_asymptotic(n) - direct) / direct < 1e-6

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            csc_sum_asymptotic(10, variant="bogus")


class TestRingCoefficients:
    def test_closed_form_n4(self):
        coeff = ring_coefficients(RingSystem(4, 1.0, 0.0))
        assert coeff.a_coeff == pytest.approx((1 + 4 * math.sqrt(2)) / 8, rel=1e-14)
        assert coeff.b_coeff == pytest.approx((1 + 2 * math.sqrt(2)) / 4, rel=1e-14)

    def test_massless_ring(self):
        coeff = ring_coefficients(RingSystem(6, 0.0, 1.0))
        assert coeff.a_coeff == 0.0
        assert coeff.b_coeff == 0.0

    def test_n2_single_term(self):
        coeff = ring_coefficients(RingSystem(2, 1.0, 0.0))
        assert coeff.a_coeff == pytest.approx(0.125, rel=1e-15)
        assert coeff.b_coeff == pytest.approx(0.25, rel=1e-15)

    def test_scaling_with_radius(self):
        small = ring_coefficients(RingSystem(10, 1.0, 0.0, radius=1.0))
        big = ring_coefficients(RingSystem(10, 1.0, 0.0, radius=2.0))
        assert big.a_coeff == pytest.approx(small.a_coeff / 8, rel=1e-14)
        assert big.b_coeff == pytest.approx(small.b_coeff / 4, rel=1e-14)


class TestAlpha:
    def test_limit_value_large_n(self):
        assert alpha_coefficient(10000) == pytest.approx(2.40411, abs=1e-4)

    def test_n4_closed_form(self):
        expected = math.pi**3 / 64 * (1 + 4 * math.sqrt(2))
        assert alpha_coefficient(4) == pytest.approx(expected, rel=1e-14)

    def test_n2(self):
        assert alpha_coefficient(2) == pytest.approx(math.pi**3 / 8, rel=1e-15)

    def test_bounded_and_converging(self):
        for n in (2, 5, 10, 100, 1000):
            assert 2.404 < alpha_coefficient(n) < 4.0
        for n in (10, 50, 400):
            err_n = abs(alpha_coefficient(n) - TWO_ZETA3)
            err_2n = abs(alpha_coefficient(2 * n) - TWO_ZETA3)
            assert err_2n < err_n


class TestAlphaPrime:
    def test_n2(self):
        assert alpha_prime_coefficient(2) == 2.0

    def test_n10_reference(self):
        assert alpha_prime_coefficient(10) == pytest.approx(2.3713241, abs=1e-6)

    def test_n20_reference(self):
        assert alpha_prime_coefficient(20) == pytest.approx(2.3950641, abs=1e-6)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            alpha_prime_coefficient(9)

    def test_converges_to_two_zeta3(self):
        deltas = [abs(alpha_prime_coefficient(n) - TWO_ZETA3)
                  for n in (10, 100, 1000, 10000)]
        assert all(b < a for a, b in zip(deltas, deltas[1:]))
        assert deltas[-1] < 1e-7


def test_trig_sum_dispatch():
    assert trig_sum(SumKind.CSC, 4) == csc_sum(4)
    assert trig_sum(SumKind.CSC3, 4) == csc3_sum(4)
