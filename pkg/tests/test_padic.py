"""Unit tests for capped-precision p-adic arithmetic."""

import random
from fractions import Fraction

import pytest

from padicdyn.errors import DomainError
from padicdyn.padic import INFINITY, PAdic, padic_exp, padic_log, stabilizing_exponent


def embed(value, p=5, prec=4):
    return PAdic.from_rational(Fraction(value), p, prec)


class TestFromRational:
    def test_one_third_base_five(self):
        # oracle: modular inverse of 3 mod 5**4
        x = embed(Fraction(1, 3))
        assert x.valuation == 0
        assert x.unit_digits == pow(3, -1, 5**4)
        assert x.unit_digits == 417

    def test_zero(self):
        x = embed(0)
        assert x.is_exact_zero()
        assert x.valuation == INFINITY

    def test_fifty_base_five(self):
        x = PAdic.from_rational(50, 5, 3)
        assert x.valuation == 2
        assert x.unit_digits == 2

    def test_negative_valuation(self):
        x = embed(Fraction(1, 5))
        assert x.valuation == -1
        assert x.unit_digits == 1

    def test_rejects_even_prime(self):
        with pytest.raises(DomainError):
            PAdic.from_rational(1, 2, 4)

    def test_rejects_composite(self):
        with pytest.raises(DomainError):
            PAdic.from_rational(1, 9, 4)

    def test_rejects_nonpositive_precision(self):
        with pytest.raises(DomainError):
            PAdic.from_rational(1, 5, 0)

    def test_small_rational_round_trip(self):
        for num in range(-20, 21):
            for den in (1, 2, 3, 7):
                x = PAdic.from_rational(Fraction(num, den), 5, 12)
                assert x.lift() % 5**10 == Fraction(num, den) % 5**10 or x.is_zero() or (
                    PAdic.from_rational(Fraction(num, den), 5, 12) - Fraction(num, den)
                ).is_zero()


class TestArithmetic:
    def test_ring_axioms_randomized(self):
        rng = random.Random(7)
        for _ in range(200):
            p = rng.choice((3, 5, 7))
            xs = [
                PAdic.from_rational(
                    Fraction(rng.randint(-50, 50), rng.choice((1, 2, 3, p))), p, 10
                )
                for _ in range(3)
            ]
            a, b, c = xs
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a
            assert a * b == b * a

    def test_norm_multiplicative_and_ultrametric(self):
        rng = random.Random(11)
        for _ in range(200):
            p = rng.choice((3, 5, 7))
            vals = []
            for _ in range(2):
                q = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
                if q == 0:
                    q = Fraction(1)
                vals.append(q)
            x = PAdic.from_rational(vals[0], p, 14)
            y = PAdic.from_rational(vals[1], p, 14)
            assert (x * y).abs_value() == x.abs_value() * y.abs_value()
            assert (x + y).abs_value() <= max(x.abs_value(), y.abs_value())

    def test_precision_shrinks_on_cancellation(self):
        x = embed(1 + 125, prec=4)
        y = embed(1, prec=4)
        d = x - y  # = 125, three digits eaten by cancellation
        assert d.valuation == 3
        assert d.precision == 1

    def test_homomorphism_from_rationals(self):
        rng = random.Random(13)
        for _ in range(100):
            p = rng.choice((3, 5))
            a = Fraction(rng.randint(-30, 30), rng.choice((1, 2, 3)))
            b = Fraction(rng.randint(-30, 30), rng.choice((1, 2, 3)))
            fa, fb = (PAdic.from_rational(v, p, 12) for v in (a, b))
            assert fa + fb == PAdic.from_rational(a + b, p, 12)
            assert fa * fb == PAdic.from_rational(a * b, p, 12)

    def test_division_tracks_valuation(self):
        x = embed(5, prec=6)
        y = embed(25, prec=6)
        assert (x / y).valuation == -1
        assert (y / x).valuation == 1


class TestLog:
    def test_log_of_one(self):
        assert padic_log(embed(1)).is_zero()

    def test_log_one_plus_p_matches_partial_sum_oracle(self):
        # oracle: direct partial sums of the alternating series at higher precision
        u = embed(6, prec=4)  # 1 + 5
        got = padic_log(u)
        oracle = Fraction(0)
        for k in range(1, 30):
            oracle += Fraction((-1) ** (k + 1) * 5**k, k)
        expected = PAdic.from_rational(oracle, 5, 8)
        assert (got - expected).is_zero()
        assert got.valuation == 1

    def test_exp_log_round_trip(self):
        u = embed(6, prec=6)
        assert padic_exp(padic_log(u)) == u

    def test_log_rejects_units_away_from_one(self):
        with pytest.raises(DomainError):
            padic_log(embed(2))

    def test_log_is_additive(self):
        rng = random.Random(17)
        for _ in range(50):
            p = rng.choice((3, 5, 7))
            u = PAdic.from_rational(1 + p * rng.randint(1, 30), p, 10)
            v = PAdic.from_rational(1 + p * rng.randint(1, 30), p, 10)
            lhs = padic_log(u * v)
            rhs = padic_log(u) + padic_log(v)
            assert (lhs - rhs).is_zero()


class TestStabilizingExponent:
    def test_one(self):
        assert stabilizing_exponent(embed(1)) == 1

    def test_two_mod_five(self):
        # oracle: brute-force order of 2 in (Z/5)*
        order = next(m for m in range(1, 5) if pow(2, m, 5) == 1)
        assert order == 4
        assert stabilizing_exponent(embed(2)) == 4

    def test_six_mod_five(self):
        assert stabilizing_exponent(embed(6)) == 1

    def test_divides_p_minus_one(self):
        for p in (3, 5, 7, 11, 13):
            for b in range(1, p):
                m = stabilizing_exponent(PAdic.from_rational(b, p, 6))
                assert (p - 1) % m == 0
                assert pow(b, m, p) == 1

    def test_rejects_non_units(self):
        with pytest.raises(DomainError):
            stabilizing_exponent(embed(5))

    def test_log_defined_after_stabilizing(self):
        for b in (2, 3, 4, 6, 7):
            x = embed(b, prec=8)
            m = stabilizing_exponent(x)
            assert not padic_log(x**m).is_exact_zero() or b == 1 or (x**m - 1).is_zero()
