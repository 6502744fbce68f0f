import os
import sys
import unittest

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.descriptors import BandDescriptor, Charge, StringDescriptor, unipotent
from sheafcalc.errors import DecomposablePushforwardError, UnsupportedReductionError, ValidationError
from sheafcalc.fields import UnivariatePoly, get_field
from sheafcalc.oracle import cohomology, is_isomorphic
from sheafcalc.sheaf_ops import (DecompositionResult, cohomology_formula, dual, pullback_etale,
                                 pushforward_decompose, pushforward_line, tensor_bands, tensor_unipotent,
                                 twist)
from sheafcalc.triples import band_to_triple, tensor_triples


def band(n, d, lam=1, m=1, field="q"):
    fld = get_field(field)
    return BandDescriptor(n, tuple(d), m, UnivariatePoly.linear(fld, lam))


def summary(result):
    """(word, m, root, multiplicity) for every summand with a linear parameter."""
    return sorted((x.d, x.m, x.field.sort_key(x.lam), k) for x, k in result.summands)


class TestTensorProducts(unittest.TestCase):
    """Tests for the closed-form tensor product of bands."""

    def test_line_bundles_multiply_parameters(self):
        result = tensor_bands(band(1, (1,), 2), band(1, (-1,), 3))
        self.assertEqual(summary(result), [((0,), 1, 6, 1)])

    def test_laps_raise_parameters_to_powers(self):
        result = tensor_bands(band(1, (0, 1), 2), band(1, (0,), 3))
        self.assertEqual(summary(result), [((0, 1), 1, 18, 1)])

    def test_periodic_summands_are_split(self):
        b = band(1, (0, 1), 1)
        result = tensor_bands(b, b)
        self.assertEqual(summary(result), [((0, 2), 1, 1, 1), ((1,), 1, -1, 1), ((1,), 1, 1, 1)])
        self.assertEqual(result.total_charge(), Charge(4, 2, (4,)))

    def test_unipotent_square(self):
        q = get_field("q")
        result = tensor_bands(unipotent(1, 2, q), unipotent(1, 2, q))
        self.assertEqual(summary(result), [((0,), 1, 1, 1), ((0,), 3, 1, 1)])

    def test_multiplicity_needs_characteristic_zero(self):
        f2 = get_field("f2")
        with self.assertRaises(UnsupportedReductionError):
            tensor_bands(unipotent(1, 2, f2), unipotent(1, 2, f2))

    def test_bands_on_different_cycles(self):
        with self.assertRaises(ValidationError):
            tensor_bands(band(1, (0,)), band(2, (0, 1)))

    def test_agrees_with_triple_tensor(self):
        a, b = band(1, (0, 1), 2, field="f7"), band(1, (1,), 3, field="f7")
        expected = tensor_triples(band_to_triple(a), band_to_triple(b))
        self.assertTrue(is_isomorphic(tensor_bands(a, b).to_triple(), expected))


class TestTensorUnipotent(unittest.TestCase):

    def test_characteristic_zero(self):
        self.assertEqual(tensor_unipotent(2, 2), [3, 1])
        self.assertEqual(tensor_unipotent(3, 2), [4, 2])
        self.assertEqual(tensor_unipotent(1, 4), [4])

    def test_positive_characteristic(self):
        self.assertEqual(tensor_unipotent(2, 2, 2), [2, 2])
        self.assertEqual(sum(tensor_unipotent(3, 3, 3)), 9)

    def test_sizes_must_be_positive(self):
        with self.assertRaises(ValidationError):
            tensor_unipotent(0, 2)


class TestCoverings(unittest.TestCase):
    """Tests for pullback and direct image along etale coverings."""

    def test_pullback_of_a_line_bundle(self):
        result = pullback_etale(band(1, (1,), 2), 2)
        ((x, k),) = result.summands
        self.assertEqual((x.n, x.d, k), (2, (1, 1), 1))
        self.assertEqual(x.lam, get_field("q")(4))

    def test_pullback_degree_must_be_positive(self):
        with self.assertRaises(ValidationError):
            pullback_etale(band(1, (1,), 2), 0)

    def test_pushforward_of_a_non_periodic_word(self):
        b = pushforward_line((0, 1), 1, 2, 1, get_field("q"))
        self.assertEqual((b.n, b.d, b.m), (1, (0, 1), 1))

    def test_pushforward_of_a_periodic_word(self):
        with self.assertRaises(DecomposablePushforwardError) as ctx:
            pushforward_line((0, 0), 1, 1, 1, get_field("q"))
        self.assertEqual(ctx.exception.context["summands"], 2)
        self.assertEqual(len(ctx.exception.decomposition.summands), 2)

    def test_pushforward_of_the_structure_sheaf(self):
        over_q = pushforward_decompose((0, 0), 1, 1, 1, get_field("q"))
        self.assertEqual(summary(over_q), [((0,), 1, -1, 1), ((0,), 1, 1, 1)])
        over_f2 = pushforward_decompose((0, 0), 1, 1, 1, get_field("f2"))
        self.assertEqual(summary(over_f2), [((0,), 2, 1, 1)])


class TestDualAndTwist(unittest.TestCase):

    def test_dual_band(self):
        d = dual(band(1, (1, -2), 2))
        self.assertEqual(d.d, (-1, 2))
        self.assertEqual(d.lam, get_field("q")("1/2"))

    def test_dual_strings(self):
        self.assertEqual(dual(StringDescriptor(1, (-1,))), StringDescriptor(1, (-1,)))
        self.assertEqual(dual(StringDescriptor(1, (0, -1, 0))).d, (-1, 1, -1))

    def test_double_dual(self):
        b = band(2, (0, 1, 1, 3, 1, -2), 5)
        self.assertEqual(dual(dual(b)), b)

    def test_twist(self):
        self.assertEqual(twist(band(1, (0,)), 2).d, (2,))
        self.assertEqual(twist(StringDescriptor(1, (-1,)), 1).d, (0,))


class TestCohomologyFormula(unittest.TestCase):
    """Tests for h0 and h1 of bands from their words."""

    def test_line_bundles(self):
        self.assertEqual(cohomology_formula(band(1, (1,), 5)), (1, 0))
        self.assertEqual(cohomology_formula(band(1, (-1,))), (0, 1))
        self.assertEqual(cohomology_formula(band(1, (0,), 2)), (0, 0))
        self.assertEqual(cohomology_formula(band(1, (0,))), (1, 1))

    def test_unipotent(self):
        self.assertEqual(cohomology_formula(unipotent(1, 3, get_field("q"))), (1, 1))

    def test_mixed_words(self):
        self.assertEqual(cohomology_formula(band(1, (2, -1))), (1, 0))
        self.assertEqual(cohomology_formula(band(1, (1, -1, 0), 3)), (0, 0))

    def test_agrees_with_the_oracle(self):
        for word in ((0, 1), (2, -1), (1, -1, 0), (0, 0, 1, -1), (3, -2, 1)):
            b = band(1, word, 3, field="f5")
            h = cohomology(band_to_triple(b))
            self.assertEqual(cohomology_formula(b), (h.h0, h.h1), word)


class TestDecompositionResult(unittest.TestCase):

    def test_equal_summands_are_merged(self):
        b = band(1, (1, 0), 2)
        result = DecompositionResult([(b, 1), (band(1, (0, 1), 2), 2)])
        self.assertEqual(len(result.summands), 1)
        self.assertEqual(result.summands[0][1], 3)
        self.assertEqual(result.summands[0][0].d, (0, 1))


if __name__ == '__main__':
    unittest.main()
