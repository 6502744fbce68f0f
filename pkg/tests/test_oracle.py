import os
import random
import sys
import unittest
from unittest.mock import patch

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.descriptors import BandDescriptor, StringDescriptor, canonical_band, is_periodic, unipotent
from sheafcalc.errors import InconclusiveError, ValidationError
from sheafcalc.fields import UnivariatePoly, get_field
from sheafcalc.oracle import (Cohomology, cohomology, end_dim, fingerprint, hom_dimension, hom_space,
                              is_isomorphic)
from sheafcalc.sheaf_ops import dual
from sheafcalc.triples import band_to_triple, cuspidal_line_bundle, dual_triple, string_to_triple, structure_sheaf


def line(d, lam, field="q", n=1):
    fld = get_field(field)
    return band_to_triple(BandDescriptor(n, tuple(d), 1, UnivariatePoly.linear(fld, lam)))


def random_band(rng, fld):
    n = rng.choice((1, 2))
    length = n * rng.randint(1, 2)
    while True:
        word = tuple(rng.randint(-1, 2) for _ in range(length))
        if is_periodic(word, n) is None:
            break
    if rng.random() < 0.2:
        return BandDescriptor(n, word, 1, UnivariatePoly.from_values(fld, [1, 0, 1]))
    return BandDescriptor(n, word, rng.randint(1, 2), UnivariatePoly.linear(fld, fld.random_nonzero(rng)))


class TestCohomology(unittest.TestCase):
    """Tests for h0 and h1 computed from triples."""

    def test_line_bundles_on_the_nodal_cubic(self):
        self.assertEqual(cohomology(line((1,), 5)), Cohomology(1, 0))
        self.assertEqual(cohomology(line((0,), 2)), Cohomology(0, 0))
        self.assertEqual(cohomology(line((-1,), 1)), Cohomology(0, 1))

    def test_structure_sheaf(self):
        self.assertEqual(cohomology(structure_sheaf(1, get_field("q"))), Cohomology(1, 1))
        self.assertEqual(cohomology(structure_sheaf(3, get_field("q"))), Cohomology(1, 1))

    def test_unipotent_bundles(self):
        q = get_field("q")
        self.assertEqual(cohomology(band_to_triple(unipotent(1, 2, q))), Cohomology(1, 1))
        f3 = get_field("f3")
        self.assertEqual(cohomology(band_to_triple(unipotent(1, 3, f3))), Cohomology(1, 1))

    def test_string_cohomology(self):
        q = get_field("q")
        result = cohomology(string_to_triple(StringDescriptor(1, (-1,)), q))
        self.assertEqual(result.to_json(), {"h0": 0, "h1": 0})
        golden = cohomology(string_to_triple(StringDescriptor(2, (-1, 0, 1, -1, 1), 2), q))
        self.assertEqual(golden.euler_characteristic, 1)

    def test_cuspidal_line_bundles(self):
        q = get_field("q")
        self.assertEqual(cohomology(cuspidal_line_bundle(1, q)), Cohomology(0, 0))
        self.assertEqual(cohomology(cuspidal_line_bundle(0, q, degree=1)), Cohomology(1, 0))


class TestHomSpaces(unittest.TestCase):
    """Tests for dimensions and bases of Hom spaces."""

    def test_hom_between_line_bundles(self):
        self.assertEqual(hom_dimension(line((0,), 2), line((1,), 3)), 1)
        self.assertEqual(hom_dimension(line((1,), 3), line((0,), 2)), 0)
        self.assertEqual(hom_dimension(line((0,), 2), line((0,), 3)), 0)
        self.assertEqual(hom_dimension(line((0,), 2), line((0,), 2)), 1)

    def test_basis_matches_dimension(self):
        space = hom_space(line((0,), 1), line((2,), 1))
        self.assertEqual(space.dimension, 2)
        self.assertEqual(len(space.basis), 2)

    def test_unipotent_endomorphisms(self):
        self.assertEqual(end_dim(band_to_triple(unipotent(1, 2, get_field("q")))), 2)

    def test_cuspidal_hom(self):
        q = get_field("q")
        self.assertEqual(hom_dimension(cuspidal_line_bundle(1, q), cuspidal_line_bundle(1, q)), 1)
        self.assertEqual(hom_dimension(cuspidal_line_bundle(1, q), cuspidal_line_bundle(2, q)), 0)

    def test_mixed_kinds_are_rejected(self):
        q = get_field("q")
        with self.assertRaises(ValidationError):
            hom_dimension(structure_sheaf(1, q), cuspidal_line_bundle(1, q))

    def test_fields_must_agree(self):
        with self.assertRaises(ValidationError):
            hom_dimension(line((0,), 1), line((0,), 1, field="f5"))

    def test_fingerprint(self):
        probes = [structure_sheaf(1, get_field("q")), line((-1,), 1)]
        self.assertEqual(fingerprint(probes, line((1,), 4)), (1, 2))


class TestIsomorphism(unittest.TestCase):
    """Tests for the isomorphism decision."""

    def test_rotated_word_is_isomorphic(self):
        self.assertTrue(is_isomorphic(line((0, 1), 2, field="f7"), line((1, 0), 2, field="f7")))

    def test_different_parameters(self):
        self.assertFalse(is_isomorphic(structure_sheaf(1, get_field("q")), line((0,), 2)))

    def test_different_shapes(self):
        self.assertFalse(is_isomorphic(line((0,), 1), line((1,), 1)))

    def test_cuspidal_parameters(self):
        f5 = get_field("f5")
        self.assertTrue(is_isomorphic(cuspidal_line_bundle(2, f5), cuspidal_line_bundle(2, f5)))
        self.assertFalse(is_isomorphic(cuspidal_line_bundle(2, f5), cuspidal_line_bundle(3, f5)))

    def test_canonical_form_is_isomorphic(self):
        f7 = get_field("f7")
        rng = random.Random(11)
        for _ in range(100):
            b = random_band(rng, f7)
            self.assertTrue(is_isomorphic(band_to_triple(b), band_to_triple(canonical_band(b)), seed=3), b)

    def test_descriptor_dual_matches_triple_dual(self):
        f7 = get_field("f7")
        rng = random.Random(12)
        for _ in range(30):
            b = random_band(rng, f7)
            self.assertTrue(is_isomorphic(band_to_triple(dual(b)), dual_triple(band_to_triple(b)), seed=3), b)

    @patch("sheafcalc.config.EXHAUSTIVE_LIMIT", 0)
    @patch("sheafcalc.config.ISO_RETRIES", 0)
    def test_exhausted_search_over_a_finite_field(self):
        f7 = get_field("f7")
        with self.assertRaises(InconclusiveError):
            is_isomorphic(structure_sheaf(1, f7), structure_sheaf(1, f7))

    @patch("sheafcalc.config.EXHAUSTIVE_LIMIT", 0)
    @patch("sheafcalc.config.ISO_RETRIES", 0)
    def test_exhausted_search_over_the_rationals(self):
        q = get_field("q")
        self.assertTrue(is_isomorphic(structure_sheaf(1, q), structure_sheaf(1, q)))


if __name__ == '__main__':
    unittest.main()
