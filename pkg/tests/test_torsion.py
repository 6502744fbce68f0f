import os
import sys
import unittest

# Add the project path to sys.path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from sheafcalc.descriptors import StringDescriptor, rank_degree
from sheafcalc.errors import ValidationError
from sheafcalc.fields import UnivariatePoly, get_field
from sheafcalc.torsion import TorsionModuleDescriptor, fm_image, module_length


class TestFourierMukaiImages(unittest.TestCase):
    """Tests for images of torsion modules at the node."""

    def setUp(self):
        self.q = get_field("q")

    def test_band_images(self):
        image = fm_image(TorsionModuleDescriptor("M", 1, 1, 2, self.q))
        self.assertEqual(image.d, (1, -1))
        self.assertEqual(image.p, UnivariatePoly.linear(self.q, 2))
        image = fm_image(TorsionModuleDescriptor("M", 2, 1, 3, self.q))
        self.assertEqual(image.d, (1, -1, 0))
        self.assertEqual(image.p, UnivariatePoly.linear(self.q, -3))

    def test_string_images(self):
        self.assertEqual(fm_image(TorsionModuleDescriptor("N", 0, 0)), StringDescriptor(1, (-1,)))
        self.assertEqual(fm_image(TorsionModuleDescriptor("N", 1, 2)), StringDescriptor(1, (0, 0, -1, 0)))

    def test_images_have_degree_zero(self):
        for module in (TorsionModuleDescriptor("M", 3, 2, 5, self.q), TorsionModuleDescriptor("N", 2, 3)):
            self.assertEqual(rank_degree(fm_image(module)).degree, 0)

    def test_module_length(self):
        self.assertEqual(module_length(TorsionModuleDescriptor("M", 3, 2, 5, self.q)), 5)
        self.assertEqual(module_length(TorsionModuleDescriptor("N", 1, 2)), 4)

    def test_invalid_modules(self):
        with self.assertRaises(ValidationError):
            TorsionModuleDescriptor("M", 0, 1, 1, self.q)
        with self.assertRaises(ValidationError):
            TorsionModuleDescriptor("M", 1, 1, 0, self.q)
        with self.assertRaises(ValidationError):
            TorsionModuleDescriptor("N", -1, 0)
        with self.assertRaises(ValidationError):
            TorsionModuleDescriptor("K", 1, 1)


if __name__ == '__main__':
    unittest.main()
