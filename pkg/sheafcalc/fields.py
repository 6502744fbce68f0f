"""
Exact scalars and univariate polynomials over Q and prime fields F_p.

Scalars are plain elements of a sympy domain (``QQ`` or ``GF(p)``); a
``BaseField`` wraps the domain with parsing, formatting and sampling helpers.
Polynomials in t are ``UnivariatePoly`` values whose heavy operations
(irreducibility, factorization) are delegated to sympy's ``Poly``.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol, isprime
from sympy.polys.domains import GF, QQ

from .errors import ValidationError

logger = logging.getLogger("sheafcalc")

T = Symbol("t")

# Bound for random rationals; large enough for Schwartz-Zippel style sampling
RANDOM_RATIONAL_BOUND = 1000


class BaseField:
    """
    A base field: Q when ``characteristic`` is 0, otherwise F_p.

    Field elements are the sympy domain's own element type, so arithmetic
    (``+ - * /``) works directly on them.
    """

    def __init__(self, characteristic: int):
        if characteristic < 0:
            raise ValidationError("characteristic must be non-negative",
                                  {"characteristic": characteristic})
        if characteristic == 0:
            self.domain = QQ
            self.name = "q"
        else:
            if not isprime(characteristic) or characteristic >= 2 ** 61:
                raise ValidationError("F_p requires a prime p < 2^61", {"p": characteristic})
            self.domain = GF(characteristic, symmetric=False)
            self.name = f"f{characteristic}"
        self.characteristic = characteristic

    def __repr__(self) -> str:
        return f"BaseField({self.name})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BaseField) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("BaseField", self.characteristic))

    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    @property
    def size(self) -> Optional[int]:
        """Number of elements, or None for Q."""
        return self.characteristic or None

    def __call__(self, value: Any) -> Any:
        """Coerce an int, Fraction, string or domain element into the field."""
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.domain.convert(value)
        if isinstance(value, Fraction):
            return self.domain.convert(value.numerator) / self.domain.convert(value.denominator)
        if self.domain.of_type(value):
            return value
        try:
            return self.domain.convert(value)
        except Exception as e:
            raise ValidationError(f"cannot interpret {value!r} as an element of {self.name}",
                                  {"value": repr(value), "field": self.name}) from e

    def parse(self, text: str) -> Any:
        """Parse "3/4", "-2" or "2 mod 5" (the modulus must match this field)."""
        raw = text.strip()
        if " mod " in raw:
            value_text, modulus_text = raw.split(" mod ", 1)
            try:
                modulus = int(modulus_text)
            except ValueError as e:
                raise ValidationError(f"malformed modulus in {text!r}", {"value": text}) from e
            if modulus != self.characteristic:
                raise ValidationError(f"scalar {text!r} does not live in {self.name}",
                                      {"value": text, "field": self.name})
            raw = value_text.strip()
        try:
            fraction = Fraction(raw)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"malformed scalar {text!r}", {"value": text}) from e
        if self.characteristic and fraction.denominator % self.characteristic == 0:
            raise ValidationError(f"denominator of {text!r} vanishes in {self.name}",
                                  {"value": text, "field": self.name})
        return self(fraction)

    def format(self, a: Any) -> str:
        if self.characteristic:
            return f"{self.to_int(a)} mod {self.characteristic}"
        return str(self.to_fraction(a))

    def to_int(self, a: Any) -> int:
        """Representative in 0..p-1 (F_p only)."""
        return int(self.domain.to_sympy(a)) % self.characteristic

    def to_fraction(self, a: Any) -> Fraction:
        value = self.domain.to_sympy(a)
        return Fraction(int(value.p), int(value.q))

    def sort_key(self, a: Any) -> Any:
        return self.to_int(a) if self.characteristic else self.to_fraction(a)

    def is_zero(self, a: Any) -> bool:
        return a == self.domain.zero

    def inverse(self, a: Any) -> Any:
        if self.is_zero(a):
            raise ValidationError("zero has no inverse", {"field": self.name})
        return self.domain.one / a

    def elements(self) -> Iterator[Any]:
        """All elements of F_p in increasing order."""
        if not self.characteristic:
            raise ValidationError("Q cannot be enumerated")
        for value in range(self.characteristic):
            yield self.domain.convert(value)

    def random_element(self, rng: random.Random) -> Any:
        if self.characteristic:
            return self.domain.convert(rng.randrange(self.characteristic))
        return self.domain.convert(rng.randint(-RANDOM_RATIONAL_BOUND, RANDOM_RATIONAL_BOUND))

    def random_nonzero(self, rng: random.Random) -> Any:
        while True:
            value = self.random_element(rng)
            if not self.is_zero(value):
                return value


@lru_cache(maxsize=None)
def get_field(name: str) -> BaseField:
    """
    Look up a base field by its command-line name.

    Args:
        name: "q" for the rationals or "f<p>" for the prime field F_p

    Returns:
        The (cached) BaseField instance
    """
    key = name.strip().lower()
    if key in ("q", "qq"):
        return BaseField(0)
    if key.startswith("f") and key[1:].isdigit():
        return BaseField(int(key[1:]))
    raise ValidationError(f"unknown field {name!r}; use q or f<p>", {"field": name})


@dataclass(frozen=True)
class UnivariatePoly:
    """Polynomial in t; ``coefficients[i]`` multiplies t**i, highest one nonzero."""

    field: BaseField
    coefficients: Tuple[Any, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and self.field.is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_values(cls, field: BaseField, values: Sequence[Any]) -> "UnivariatePoly":
        return cls(field, tuple(field(v) for v in values))

    @classmethod
    def linear(cls, field: BaseField, lam: Any) -> "UnivariatePoly":
        """The monic polynomial t - lam."""
        return cls(field, (-field(lam), field.one))

    @classmethod
    def from_sympy(cls, field: BaseField, poly: Poly) -> "UnivariatePoly":
        coeffs = [field.domain.from_sympy(c) for c in reversed(poly.all_coeffs())]
        return cls(field, tuple(coeffs))

    def to_sympy(self) -> Poly:
        values = [self.field.domain.to_sympy(c) for c in reversed(self.coefficients)] or [0]
        return Poly.from_list(values, T, domain=self.field.domain)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Any:
        return self.coefficients[-1] if self.coefficients else self.field.zero

    @property
    def constant_term(self) -> Any:
        return self.coefficients[0] if self.coefficients else self.field.zero

    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.leading == self.field.one

    def monic(self) -> "UnivariatePoly":
        if self.is_zero():
            raise ValidationError("the zero polynomial has no monic normalization")
        inv = self.field.inverse(self.leading)
        return UnivariatePoly(self.field, tuple(c * inv for c in self.coefficients))

    def __mul__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return UnivariatePoly.from_sympy(self.field, self.to_sympy() * other.to_sympy())

    def __pow__(self, exponent: int) -> "UnivariatePoly":
        return UnivariatePoly.from_sympy(self.field, self.to_sympy() ** exponent)

    def evaluate(self, x: Any) -> Any:
        result = self.field.zero
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    def reciprocal(self) -> "UnivariatePoly":
        """Monic normalization of t^k p(1/t); sends t - lam to t - 1/lam."""
        if self.is_zero() or self.field.is_zero(self.constant_term):
            raise ValidationError("reciprocal needs p(0) != 0", {"p": self.to_json()})
        return UnivariatePoly(self.field, tuple(reversed(self.coefficients))).monic()

    def compose_power(self, s: int) -> "UnivariatePoly":
        """p(t^s)."""
        coeffs = [self.field.zero] * (self.degree * s + 1)
        for i, c in enumerate(self.coefficients):
            coeffs[i * s] = c
        return UnivariatePoly(self.field, tuple(coeffs))

    def linear_root(self) -> Any:
        """The root of a degree-one polynomial."""
        if self.degree != 1:
            raise ValidationError("polynomial is not linear", {"p": self.to_json()})
        return -self.coefficients[0] / self.coefficients[1]

    def sort_key(self) -> Tuple:
        return (self.degree, tuple(self.field.sort_key(c) for c in self.coefficients))

    def to_json(self) -> List[str]:
        return [self.field.format(c) for c in self.coefficients]

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


def _require_nonconstant(f: UnivariatePoly) -> None:
    if f.degree < 1:
        raise ValidationError("expected a polynomial of degree at least 1", {"p": f.to_json()})


def is_irreducible(f: UnivariatePoly) -> bool:
    """True iff f has no nontrivial factorization over its base field."""
    _require_nonconstant(f)
    return bool(f.to_sympy().is_irreducible)


def factor(f: UnivariatePoly) -> List[Tuple[UnivariatePoly, int]]:
    """
    Factor f into monic irreducibles.

    Args:
        f: Nonzero polynomial

    Returns:
        Pairs (factor, multiplicity) sorted by degree then coefficients; the
        product of the factors times the leading coefficient of f equals f
    """
    if f.is_zero():
        raise ValidationError("cannot factor the zero polynomial")
    if f.degree == 0:
        return []
    _, pairs = f.to_sympy().factor_list()
    merged = {}
    for poly, multiplicity in pairs:
        monic = UnivariatePoly.from_sympy(f.field, poly).monic()
        merged[monic] = merged.get(monic, 0) + multiplicity
    result = sorted(merged.items(), key=lambda item: item[0].sort_key())
    logger.debug(f"factor({f}) over {f.field.name}: {[(str(q), e) for q, e in result]}")
    return result
