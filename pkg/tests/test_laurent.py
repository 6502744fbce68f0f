import os
import random
import sys
import unittest

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.errors import NotInvertibleError
from sheafcalc.fields import get_field
from sheafcalc.laurent import (LaurentMatrix, LaurentPoly, birkhoff_factor, random_minus_unimodular,
                               random_plus_unimodular, splitting_type)


class TestLaurentPoly(unittest.TestCase):
    """Tests for Laurent polynomial arithmetic."""

    def setUp(self):
        self.q = get_field("q")

    def test_product(self):
        a = LaurentPoly.from_mapping(self.q, {1: 1, -1: 1})
        b = LaurentPoly.monomial(self.q, 1)
        self.assertEqual((a * b).as_dict(), {2: self.q(1), 0: self.q(1)})

    def test_cancellation_gives_zero(self):
        a = LaurentPoly.from_mapping(self.q, {3: 2})
        self.assertTrue((a - a).is_zero())

    def test_lowest_and_highest(self):
        a = LaurentPoly.from_mapping(self.q, {-2: 1, 5: 3})
        self.assertEqual((a.lowest, a.highest), (-2, 5))
        self.assertFalse(a.is_polynomial())
        self.assertTrue(a.shift(2).is_polynomial())


class TestBirkhoffFactorization(unittest.TestCase):
    """Tests for T^-1 M S = diag(z^d)."""

    def setUp(self):
        self.q = get_field("q")

    def test_diagonal_matrix(self):
        m = LaurentMatrix.diagonal(self.q, [2, -1])
        result = birkhoff_factor(m)
        self.assertEqual(result.exponents, [-1, 2])
        self.assertEqual(splitting_type(m), [-2, 1])

    def test_triangular_matrix_splits_evenly(self):
        m = LaurentMatrix.from_mappings(self.q, [[{1: 1}, {0: 1}], [{}, {-1: 1}]])
        result = birkhoff_factor(m)
        self.assertEqual(result.exponents, [0, 0])
        self.assertEqual(m * result.s, result.t * result.diagonal)
        self.assertTrue(result.s.is_over_polynomials())
        self.assertTrue(result.t.is_over_inverse_polynomials())

    def test_non_unit_determinant_is_rejected(self):
        m = LaurentMatrix.from_mappings(self.q, [[{0: 1, 1: 1}]])
        with self.assertRaises(NotInvertibleError):
            birkhoff_factor(m)

    def test_singular_matrix_is_rejected(self):
        m = LaurentMatrix.from_mappings(self.q, [[{0: 1}, {1: 1}], [{0: 1}, {1: 1}]])
        with self.assertRaises(NotInvertibleError):
            birkhoff_factor(m)

    def test_exponents_survive_unimodular_changes(self):
        rng = random.Random(7)
        for fld in (get_field("q"), get_field("f7")):
            for size in range(1, 5):
                exponents = [rng.randint(-3, 3) for _ in range(size)]
                m = (random_minus_unimodular(fld, size, rng, steps=3)
                     * LaurentMatrix.diagonal(fld, exponents)
                     * random_plus_unimodular(fld, size, rng, steps=3))
                self.assertEqual(birkhoff_factor(m).exponents, sorted(exponents))

    def test_random_unimodular_sides(self):
        rng = random.Random(3)
        self.assertTrue(random_plus_unimodular(self.q, 3, rng).is_over_polynomials())
        self.assertTrue(random_minus_unimodular(self.q, 3, rng).is_over_inverse_polynomials())


if __name__ == '__main__':
    unittest.main()
