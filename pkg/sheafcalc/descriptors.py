"""
Discrete classification data of torsion-free sheaves on cycles of projective lines.

A band B(d, m, p) is an indecomposable vector bundle on the cycle E_n: ``d`` is
the cyclic multidegree word of length r*n (r laps around the cycle), ``m`` the
multiplicity and ``p`` the continuous parameter. A string S(d, f) is the
pushforward of a line bundle on a chain of projective lines whose first
component lands on L_f.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ValidationError
from .fields import BaseField, UnivariatePoly, is_irreducible

logger = logging.getLogger("sheafcalc")


@dataclass(frozen=True)
class CurveShape:
    """A cycle E_n, a chain I_k or the cuspidal cubic."""

    kind: str
    size: int = 1

    KINDS = ("cycle", "chain", "cuspidal")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown curve kind {self.kind!r}", {"kind": self.kind})
        if self.size < 1:
            raise ValidationError("curve size must be positive", {"kind": self.kind, "size": self.size})

    @classmethod
    def cycle(cls, n: int) -> "CurveShape":
        return cls("cycle", n)

    @classmethod
    def chain(cls, k: int) -> "CurveShape":
        return cls("chain", k)

    @classmethod
    def cuspidal(cls) -> "CurveShape":
        return cls("cuspidal", 1)

    def to_json(self) -> Dict:
        if self.kind == "cuspidal":
            return {"cuspidal": True}
        return {self.kind: self.size}


@dataclass(frozen=True)
class Charge:
    """Rank and degree; ``profile`` lists the rank on each component of a cycle."""

    rank: int
    degree: int
    profile: Tuple[int, ...] = ()

    def __add__(self, other: "Charge") -> "Charge":
        if self.profile and other.profile:
            profile = tuple(a + b for a, b in zip(self.profile, other.profile))
        else:
            profile = ()
        return Charge(self.rank + other.rank, self.degree + other.degree, profile)

    def scaled(self, k: int) -> "Charge":
        return Charge(self.rank * k, self.degree * k, tuple(k * a for a in self.profile))

    def to_json(self) -> Dict:
        data = {"rank": self.rank, "degree": self.degree}
        if self.profile:
            data["profile"] = list(self.profile)
        return data


@dataclass(frozen=True)
class BandDescriptor:
    """
    B(d, m, p) on the cycle E_n.

    ``strict`` rejects periodic words; the periodic splitting rule builds
    periodic bands internally with ``strict=False``.
    """

    n: int
    d: Tuple[int, ...]
    m: int
    p: UnivariatePoly
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        context = {"n": self.n, "d": list(self.d), "m": self.m}
        if self.n < 1:
            raise ValidationError("cycle length must be positive", context)
        if not self.d or len(self.d) % self.n:
            raise ValidationError("band word length must be a positive multiple of n", context)
        if self.m < 1:
            raise ValidationError("band multiplicity must be positive", context)
        if self.p.degree < 1:
            raise ValidationError("band parameter must be non-constant", {**context, "p": self.p.to_json()})
        if not self.p.is_monic():
            raise ValidationError("band parameter must be monic", {**context, "p": self.p.to_json()})
        if self.p.field.is_zero(self.p.constant_term):
            raise ValidationError("band parameter must satisfy p(0) != 0", {**context, "p": self.p.to_json()})
        if self.p.degree > 1 and not is_irreducible(self.p):
            raise ValidationError("band parameter must be irreducible", {**context, "p": self.p.to_json()})
        if self.strict and is_periodic(self.d, self.n) is not None:
            raise ValidationError("band word must be non-periodic", context)

    @property
    def field(self) -> BaseField:
        return self.p.field

    @property
    def curve(self) -> CurveShape:
        return CurveShape.cycle(self.n)

    @property
    def laps(self) -> int:
        """r: how many times the word winds around the cycle."""
        return len(self.d) // self.n

    @property
    def k(self) -> int:
        return self.p.degree

    def is_line_parameter(self) -> bool:
        return self.p.degree == 1

    @property
    def lam(self):
        """The root of a linear parameter t - lambda."""
        return self.p.linear_root()


@dataclass(frozen=True)
class StringDescriptor:
    """S(d, f) on the cycle E_n; ``f`` is 1-based."""

    n: int
    d: Tuple[int, ...]
    f: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if self.n < 1:
            raise ValidationError("cycle length must be positive", {"n": self.n})
        if not self.d:
            raise ValidationError("string word must be non-empty", {"n": self.n})
        if not 1 <= self.f <= self.n:
            raise ValidationError("string start component out of range", {"n": self.n, "f": self.f})

    @property
    def curve(self) -> CurveShape:
        return CurveShape.cycle(self.n)

    def component_of(self, j: int) -> int:
        """0-based component carrying the j-th (0-based) letter."""
        return (self.f - 1 + j) % self.n


def unipotent(n: int, m: int, field: BaseField) -> BandDescriptor:
    """F_m on E_n: the band B((0,...,0), m, t - 1)."""
    return BandDescriptor(n, (0,) * n, m, UnivariatePoly.linear(field, 1))


def is_periodic(d: Sequence[int], n: int) -> Optional[Tuple[Tuple[int, ...], int]]:
    """
    Smallest period of a cyclic band word.

    Args:
        d: Word whose length is a multiple of n
        n: Cycle length

    Returns:
        (e, s) with d = e repeated s > 1 times and len(e) a multiple of n, or
        None when d is non-periodic
    """
    word = tuple(d)
    length = len(word)
    if n < 1 or length % n:
        raise ValidationError("word length must be a multiple of n", {"d": list(word), "n": n})
    for period in range(n, length, n):
        if length % period == 0 and word == word[:period] * (length // period):
            return word[:period], length // period
    return None


def _rotations(b: BandDescriptor) -> List[Tuple[int, ...]]:
    return [b.d[l * b.n:] + b.d[:l * b.n] for l in range(b.laps)]


def canonical_band(b: BandDescriptor) -> BandDescriptor:
    """
    Lexicographically least rotation of the word by whole laps.

    Reversal is not part of the orbit: in fixed coordinates it swaps the
    degrees at 0 and infinity of each component and sends the parameter to
    its reciprocal, so use reverse_band explicitly when that is wanted.
    """
    best = min(_rotations(b))
    if best == b.d:
        return b
    return BandDescriptor(b.n, best, b.m, b.p, strict=b.strict)


def reverse_band(b: BandDescriptor) -> BandDescriptor:
    """The reversed word d_rn ... d_1 with parameter monic(t^k p(1/t))."""
    return BandDescriptor(b.n, tuple(reversed(b.d)), b.m, b.p.reciprocal(), strict=b.strict)


def normalization(x) -> List[List[int]]:
    """Splitting degrees of the pullback to the normalization, per component, sorted."""
    if isinstance(x, BandDescriptor):
        block = x.m * x.k
        per_component = [[] for _ in range(x.n)]
        for i, degree in enumerate(x.d):
            per_component[i % x.n].extend([degree] * block)
    elif isinstance(x, StringDescriptor):
        per_component = [[] for _ in range(x.n)]
        for j, degree in enumerate(x.d):
            per_component[x.component_of(j)].append(degree)
    else:
        raise ValidationError(f"no normalization for {type(x).__name__}")
    return [sorted(degrees) for degrees in per_component]


def rank_profile(x) -> Tuple[int, ...]:
    return tuple(len(degrees) for degrees in normalization(x))


def rank_degree(x) -> Charge:
    """
    Charge of a band or string.

    Bands have rank r*m*k on every component and degree m*k*sum(d). Strings
    have degree sum(d) + 1 and their rank is the largest component rank.
    """
    if isinstance(x, BandDescriptor):
        rank = x.laps * x.m * x.k
        return Charge(rank, x.m * x.k * sum(x.d), (rank,) * x.n)
    if isinstance(x, StringDescriptor):
        profile = rank_profile(x)
        return Charge(max(profile), sum(x.d) + 1, profile)
    raise ValidationError(f"no charge for {type(x).__name__}")


def slope(charge: Charge) -> Fraction:
    if charge.rank == 0:
        raise ValidationError("slope of a rank-zero charge is undefined", charge.to_json())
    return Fraction(charge.degree, charge.rank)


def euler_form(a: Charge, b: Charge) -> int:
    """<a, b> = deg(b) rk(a) - deg(a) rk(b)."""
    return b.degree * a.rank - a.degree * b.rank


def string_chain(s: StringDescriptor) -> Tuple[CurveShape, Tuple[int, ...], int]:
    """The chain I_t, the line-bundle multidegree on it and the 0-based component its first link maps to."""
    return CurveShape.chain(len(s.d)), s.d, s.f - 1
