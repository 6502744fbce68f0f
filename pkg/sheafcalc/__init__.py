"""
sheafcalc: exact computations with vector bundles and torsion-free sheaves on
cycles of projective lines (nodal degenerations of elliptic curves) and on the
cuspidal cubic.
"""
from .descriptors import BandDescriptor, Charge, StringDescriptor
from .errors import SheafCalcError
from .fields import BaseField, UnivariatePoly, get_field
from .triples import CuspidalTriple, NodalTriple

__version__ = "1.0.0"

__all__ = [
    "BandDescriptor",
    "BaseField",
    "Charge",
    "CuspidalTriple",
    "NodalTriple",
    "SheafCalcError",
    "StringDescriptor",
    "UnivariatePoly",
    "get_field",
]
