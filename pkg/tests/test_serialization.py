import os
import sys
import unittest

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.descriptors import BandDescriptor, StringDescriptor
from sheafcalc.errors import ValidationError
from sheafcalc.fields import UnivariatePoly, get_field
from sheafcalc.serialization import (dump_descriptor, dump_triple, parse_descriptor, parse_laurent_matrix,
                                     parse_scalar, parse_triple)
from sheafcalc.torsion import TorsionModuleDescriptor
from sheafcalc.triples import band_to_triple, cuspidal_line_bundle, string_to_triple


class TestScalars(unittest.TestCase):

    def test_integers_and_strings(self):
        q = get_field("q")
        self.assertEqual(parse_scalar(q, 3), q(3))
        self.assertEqual(parse_scalar(q, "3/4"), q("3/4"))
        self.assertEqual(parse_scalar(q, 2.0), q(2))

    def test_inexact_floats_are_rejected(self):
        with self.assertRaises(ValidationError):
            parse_scalar(get_field("q"), 0.5)

    def test_other_types_are_rejected(self):
        with self.assertRaises(ValidationError):
            parse_scalar(get_field("q"), [1])


class TestDescriptors(unittest.TestCase):
    """Tests for the JSON shapes of descriptors."""

    def setUp(self):
        self.q = get_field("q")

    def test_band_round_trip(self):
        b = BandDescriptor(2, (0, 1, 1, 3, 1, -2), 2, UnivariatePoly.linear(self.q, "2/3"))
        data = dump_descriptor(b)
        self.assertEqual(data, {"kind": "band", "curve": {"cycle": 2}, "d": [0, 1, 1, 3, 1, -2],
                                "m": 2, "p": ["-2/3", "1"]})
        self.assertEqual(parse_descriptor(data, self.q), b)

    def test_band_with_lambda_and_default_curve(self):
        b = parse_descriptor({"kind": "band", "d": [1], "lambda": 5}, self.q)
        self.assertEqual((b.n, b.m, b.lam), (1, 1, self.q(5)))

    def test_string_round_trip(self):
        s = StringDescriptor(2, (-1, 0, 1, -1, 1), 2)
        data = dump_descriptor(s)
        self.assertEqual(data["f"], 2)
        self.assertEqual(parse_descriptor(data, self.q), s)

    def test_start_component_omitted_on_one_cycle(self):
        self.assertNotIn("f", dump_descriptor(StringDescriptor(1, (-1,))))

    def test_unipotent_and_torsion_modules(self):
        f3 = parse_descriptor({"kind": "unipotent", "m": 3}, self.q)
        self.assertEqual((f3.d, f3.m), ((0,), 3))
        module = parse_descriptor({"kind": "M", "n": 2, "m": 1, "lambda": "3"}, self.q)
        self.assertEqual(module, TorsionModuleDescriptor("M", 2, 1, 3, self.q))
        self.assertEqual(dump_descriptor(module), {"kind": "M", "n": 2, "m": 1, "lambda": "3"})

    def test_bad_descriptors(self):
        for data in ({"kind": "ribbon"}, {"d": [0]}, {"kind": "band", "d": [0]},
                     {"kind": "band", "d": [0.5], "lambda": 1}, "band"):
            with self.assertRaises(ValidationError):
                parse_descriptor(data, self.q)

    def test_integer_fields_must_be_whole_numbers(self):
        for data in ({"kind": "band", "d": [1], "m": "x", "lambda": 1},
                     {"kind": "band", "d": [1], "m": 1.5, "lambda": 1},
                     {"kind": "band", "d": [1], "m": True, "lambda": 1},
                     {"kind": "band", "curve": {"cycle": "two"}, "d": [1], "lambda": 1},
                     {"kind": "M", "n": "2", "m": 1, "lambda": 1}):
            with self.assertRaises(ValidationError):
                parse_descriptor(data, self.q)
        self.assertEqual(parse_descriptor({"kind": "band", "d": [1], "m": 2.0, "lambda": 1}, self.q).m, 2)

    def test_malformed_modulus(self):
        with self.assertRaises(ValidationError):
            parse_scalar(get_field("f5"), "2 mod x")


class TestTriples(unittest.TestCase):
    """Tests for the JSON shapes of triples and Laurent matrices."""

    def setUp(self):
        self.q = get_field("q")

    def test_nodal_round_trip(self):
        t = string_to_triple(StringDescriptor(2, (-1, 0, 1, -1, 1), 2), self.q)
        data = dump_triple(t)
        self.assertEqual(data["kind"], "nodal")
        self.assertEqual(data["columns"], [3, 3])
        self.assertEqual(dump_triple(parse_triple(data)), data)

    def test_cuspidal_round_trip(self):
        data = dump_triple(cuspidal_line_bundle("1/2", self.q, degree=1))
        self.assertEqual(data["i_eps"], [["1/2"]])
        self.assertEqual(dump_triple(parse_triple(data)), data)

    def test_matrix_shape_is_checked(self):
        data = dump_triple(band_to_triple(BandDescriptor(1, (0,), 1, UnivariatePoly.linear(self.q, 2))))
        data["components"][0]["zero"] = [["1", "0"]]
        with self.assertRaises(ValidationError):
            parse_triple(data)

    def test_components_must_be_objects(self):
        data = dump_triple(band_to_triple(BandDescriptor(1, (0,), 1, UnivariatePoly.linear(self.q, 2))))
        for key, value in (("components", [5]), ("components", 5), ("cycle", "1")):
            broken = dict(data, **{key: value})
            with self.assertRaises(ValidationError):
                parse_triple(broken)

    def test_field_is_required(self):
        data = dump_triple(cuspidal_line_bundle(1, self.q))
        del data["field"]
        with self.assertRaises(ValidationError):
            parse_triple(data)
        self.assertEqual(parse_triple(data, get_field("f5")).field, get_field("f5"))

    def test_laurent_matrix(self):
        m = parse_laurent_matrix([[{"1": 1}, {"0": "1/2"}], [{}, {"-1": 1}]], self.q)
        self.assertEqual(m.to_json()[0][1], {"0": "1/2"})
        with self.assertRaises(ValidationError):
            parse_laurent_matrix([[{"x": 1}]], self.q)
        with self.assertRaises(ValidationError):
            parse_laurent_matrix([], self.q)


if __name__ == '__main__':
    unittest.main()
