"""
One-generator torsion modules over k[[x, y]]/(xy) and their images under the
Fourier-Mukai transform on the nodal cubic E_1.

M((n, m), 1, lam) = R/(x^n + lam y^m) goes to the band
B((1, 0^(m-1), -1, 0^(n-1)), 1, t - (-1)^(n+m) lam) and N(0, (n, m), 0) =
R/(x^(n+1), y^(m+1)) goes to the string S((0^m, -1, 0^n)); both images have
degree zero.
"""
from dataclasses import dataclass
from typing import Any, Optional, Union

from .descriptors import BandDescriptor, StringDescriptor
from .errors import ValidationError
from .fields import BaseField, UnivariatePoly


@dataclass(frozen=True)
class TorsionModuleDescriptor:
    kind: str
    n: int
    m: int
    lam: Optional[Any] = None
    field: Optional[BaseField] = None

    def __post_init__(self):
        context = {"kind": self.kind, "n": self.n, "m": self.m}
        if self.kind == "M":
            if self.n < 1 or self.m < 1:
                raise ValidationError("M((n, m), 1, lambda) needs n, m >= 1", context)
            if self.field is None or self.lam is None or self.field.is_zero(self.field(self.lam)):
                raise ValidationError("M((n, m), 1, lambda) needs a nonzero lambda", context)
            object.__setattr__(self, "lam", self.field(self.lam))
        elif self.kind == "N":
            if self.n < 0 or self.m < 0:
                raise ValidationError("N(0, (n, m), 0) needs n, m >= 0", context)
        else:
            raise ValidationError(f"unknown torsion module kind {self.kind!r}", context)


def fm_image(t: TorsionModuleDescriptor) -> Union[BandDescriptor, StringDescriptor]:
    if t.kind == "M":
        word = (1,) + (0,) * (t.m - 1) + (-1,) + (0,) * (t.n - 1)
        sign = 1 if (t.n + t.m) % 2 == 0 else -1
        return BandDescriptor(1, word, 1, UnivariatePoly.linear(t.field, t.lam * t.field(sign)))
    return StringDescriptor(1, (0,) * t.m + (-1,) + (0,) * t.n)


def module_length(t: TorsionModuleDescriptor) -> int:
    """dim_k of the module."""
    if t.kind == "M":
        return t.n + t.m
    return t.n + t.m + 1
