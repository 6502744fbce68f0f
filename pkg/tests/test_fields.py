import os
import random
import sys
import unittest
from fractions import Fraction

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.errors import ValidationError
from sheafcalc.fields import BaseField, UnivariatePoly, factor, get_field, is_irreducible


class TestBaseField(unittest.TestCase):
    """Tests for scalar parsing, formatting and arithmetic."""

    def test_rationals_round_trip(self):
        q = get_field("q")
        value = q("3/4")
        self.assertEqual(q.format(value), "3/4")
        self.assertEqual(q.to_fraction(value + q(1)), Fraction(7, 4))

    def test_prime_field_reduces_representatives(self):
        f5 = get_field("f5")
        self.assertEqual(f5.format(f5(7)), "2 mod 5")
        self.assertEqual(f5("2 mod 5"), f5(-3))
        self.assertEqual(f5.format(f5("1/2")), "3 mod 5")

    def test_denominator_divisible_by_p_is_rejected(self):
        with self.assertRaises(ValidationError):
            get_field("f5")("1/5")

    def test_modulus_must_match(self):
        with self.assertRaises(ValidationError):
            get_field("f5")("2 mod 7")

    def test_unknown_or_composite_fields(self):
        for name in ("f4", "r", "f"):
            with self.assertRaises(ValidationError):
                get_field(name)

    def test_get_field_is_cached(self):
        self.assertIs(get_field("f7"), get_field("f7"))
        self.assertEqual(get_field("f7"), BaseField(7))

    def test_elements_and_random_sampling(self):
        f3 = get_field("f3")
        self.assertEqual([f3.to_int(x) for x in f3.elements()], [0, 1, 2])
        rng = random.Random(1)
        for _ in range(20):
            self.assertFalse(f3.is_zero(f3.random_nonzero(rng)))

    def test_inverse_of_zero(self):
        with self.assertRaises(ValidationError):
            get_field("q").inverse(get_field("q").zero)


class TestUnivariatePoly(unittest.TestCase):
    """Tests for polynomials in t."""

    def setUp(self):
        self.q = get_field("q")

    def test_linear_and_json(self):
        p = UnivariatePoly.linear(self.q, 2)
        self.assertEqual(p.to_json(), ["-2", "1"])
        self.assertEqual(p.linear_root(), self.q(2))
        self.assertTrue(p.is_monic())

    def test_reciprocal_inverts_the_root(self):
        p = UnivariatePoly.linear(self.q, 2).reciprocal()
        self.assertEqual(p, UnivariatePoly.linear(self.q, "1/2"))

    def test_reciprocal_needs_nonzero_constant_term(self):
        with self.assertRaises(ValidationError):
            UnivariatePoly.from_values(self.q, [0, 1]).reciprocal()

    def test_compose_power(self):
        p = UnivariatePoly.linear(self.q, 1).compose_power(2)
        self.assertEqual(p, UnivariatePoly.from_values(self.q, [-1, 0, 1]))

    def test_evaluate(self):
        p = UnivariatePoly.from_values(self.q, [1, 2, 3])
        self.assertEqual(p.evaluate(self.q(2)), self.q(17))

    def test_trailing_zeros_are_dropped(self):
        p = UnivariatePoly.from_values(self.q, [1, 1, 0, 0])
        self.assertEqual(p.degree, 1)

    def test_irreducibility_depends_on_the_field(self):
        self.assertTrue(is_irreducible(UnivariatePoly.from_values(self.q, [1, 0, 1])))
        self.assertFalse(is_irreducible(UnivariatePoly.from_values(get_field("f5"), [1, 0, 1])))

    def test_factor_over_rationals(self):
        result = factor(UnivariatePoly.from_values(self.q, [-1, 0, 1]))
        self.assertEqual(result, [(UnivariatePoly.linear(self.q, 1), 1),
                                  (UnivariatePoly.linear(self.q, -1), 1)])

    def test_factor_in_characteristic_two(self):
        f2 = get_field("f2")
        result = factor(UnivariatePoly.from_values(f2, [1, 0, 1]))
        self.assertEqual(result, [(UnivariatePoly.linear(f2, 1), 2)])

    def test_factor_zero_polynomial(self):
        with self.assertRaises(ValidationError):
            factor(UnivariatePoly(self.q, ()))


if __name__ == '__main__':
    unittest.main()
