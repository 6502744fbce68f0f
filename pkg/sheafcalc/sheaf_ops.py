"""
Closed-form operations on band and string descriptors.

Every operation here has a triple-level counterpart in ``triples`` and is
checked against the oracle in the test suite and by ``verify``.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, List, Sequence, Tuple, Union

from . import linalg
from .descriptors import (BandDescriptor, Charge, StringDescriptor, canonical_band, is_periodic,
                          rank_degree)
from .errors import DecomposablePushforwardError, UnsupportedReductionError, ValidationError
from .fields import BaseField, UnivariatePoly, factor
from .triples import band_to_triple, direct_sum, string_to_triple

logger = logging.getLogger("sheafcalc")

Descriptor = Union[BandDescriptor, StringDescriptor]


def _descriptor_key(x: Descriptor) -> Tuple:
    if isinstance(x, BandDescriptor):
        return (0, x.n, x.d, x.m, x.p.sort_key())
    return (1, x.n, x.d, x.f)


@dataclass
class DecompositionResult:
    """A direct sum of indecomposables; equal summands are merged and the list is sorted."""

    summands: List[Tuple[Descriptor, int]] = field(default_factory=list)

    def __post_init__(self):
        merged: Dict[Descriptor, int] = {}
        for descriptor, multiplicity in self.summands:
            if isinstance(descriptor, BandDescriptor):
                descriptor = canonical_band(descriptor)
            merged[descriptor] = merged.get(descriptor, 0) + multiplicity
        self.summands = sorted(merged.items(), key=lambda item: _descriptor_key(item[0]))

    def __add__(self, other: "DecompositionResult") -> "DecompositionResult":
        return DecompositionResult(self.summands + other.summands)

    def total_charge(self) -> Charge:
        total = None
        for descriptor, multiplicity in self.summands:
            charge = rank_degree(descriptor).scaled(multiplicity)
            total = charge if total is None else total + charge
        return total if total is not None else Charge(0, 0)

    def to_triple(self, field: BaseField = None):
        triples = []
        for descriptor, multiplicity in self.summands:
            if isinstance(descriptor, BandDescriptor):
                triple = band_to_triple(descriptor)
            else:
                triple = string_to_triple(descriptor, field)
            triples.extend([triple] * multiplicity)
        return direct_sum(*triples)


def dual(x: Descriptor) -> Descriptor:
    """
    Dual sheaf.

    Bands: B(d, m, p) -> B(-d, m, monic(t^k p(1/t))). Strings: S(e, f) ->
    S(kappa - e, f) with kappa = (-1, 0, ..., 0, -1), or (-2) for one letter.
    """
    if isinstance(x, BandDescriptor):
        return BandDescriptor(x.n, tuple(-e for e in x.d), x.m, x.p.reciprocal(), strict=x.strict)
    if isinstance(x, StringDescriptor):
        if len(x.d) == 1:
            kappa = (-2,)
        else:
            kappa = (-1,) + (0,) * (len(x.d) - 2) + (-1,)
        return StringDescriptor(x.n, tuple(k - e for k, e in zip(kappa, x.d)), x.f)
    raise ValidationError(f"cannot dualize {type(x).__name__}")


def tensor_unipotent(e: int, f: int, characteristic: int = 0) -> List[int]:
    """
    Sizes h_i with F_e (x) F_f = sum of F_{h_i}, largest first.

    Characteristic zero uses the Clebsch-Gordan rule; in characteristic p the
    sizes are the Jordan type of t(x)1 + 1(x)t on k[t]/t^e (x) k[t]/t^f.
    """
    if e < 1 or f < 1:
        raise ValidationError("unipotent ranks must be positive", {"e": e, "f": f})
    e, f = max(e, f), min(e, f)
    if characteristic == 0:
        return [e + f - 2 * i - 1 for i in range(f)]

    fld = BaseField(characteristic)
    nilpotent = linalg.zeros(fld, e * f, e * f)
    shift_e = linalg.jordan_block(fld, fld.zero, e)
    shift_f = linalg.jordan_block(fld, fld.zero, f)
    left = linalg.kronecker(fld, shift_e, linalg.identity(fld, f))
    right = linalg.kronecker(fld, linalg.identity(fld, e), shift_f)
    for i in range(e * f):
        for j in range(e * f):
            nilpotent[i][j] = left[i][j] + right[i][j]

    ranks = [e * f]
    power = linalg.identity(fld, e * f)
    while ranks[-1] > 0:
        power = linalg.matmul(fld, power, nilpotent)
        ranks.append(linalg.rank(fld, power, e * f))
    # blocks of size >= k: ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes: List[int] = []
    for k in range(len(at_least), 0, -1):
        exactly = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exactly)
    return sizes


def periodic_split(d: Sequence[int], n: int, m: int, p: UnivariatePoly) -> DecompositionResult:
    """
    Split a possibly periodic band word.

    B(g^s, m, p) is the sum of B(g, e_i, q_i) over the factorization
    p(t^s)^m = prod q_i^e_i; a non-periodic word is returned unchanged.
    """
    period = is_periodic(d, n)
    if period is None:
        return DecompositionResult([(BandDescriptor(n, tuple(d), m, p), 1)])
    g, s = period
    summands = [(BandDescriptor(n, g, multiplicity, q), 1)
                for q, multiplicity in factor(p.compose_power(s) ** m)]
    logger.debug(f"periodic word {list(d)} = {list(g)}^{s}: {len(summands)} summands")
    return DecompositionResult(summands)


def _require_line_parameter(b: BandDescriptor, operation: str) -> None:
    if not b.is_line_parameter():
        raise ValidationError(f"{operation} needs a linear parameter t - lambda",
                              {"p": b.p.to_json()})


def _with_unipotent(result: DecompositionResult, sizes: Sequence[int], fld: BaseField) -> DecompositionResult:
    """Tensor every summand by F_h for h in ``sizes`` (characteristic zero only)."""
    if list(sizes) == [1]:
        return result
    summands = []
    for descriptor, multiplicity in result.summands:
        for h in sizes:
            for size in tensor_unipotent(descriptor.m, h, fld.characteristic):
                summands.append((BandDescriptor(descriptor.n, descriptor.d, size, descriptor.p), multiplicity))
    return DecompositionResult(summands)


def tensor_bands(a: BandDescriptor, b: BandDescriptor) -> DecompositionResult:
    """
    Decompose B(d, m, t - lam) (x) B(e, m', t - mu).

    With k and l laps, g = gcd(k, l) and D = lcm(k, l) the product is the sum
    over i < g of B(f_i, 1, t - lam^(l/g) mu^(k/g)), where f_i has D laps and
    f_i[j] = d[j mod kn] + e[(j + i n) mod ln]; periodic f_i are split.
    Multiplicities m > 1 factor through F_m (x) F_m' in characteristic zero.
    """
    if a.n != b.n:
        raise ValidationError("bands live on different cycles", {"cycles": [a.n, b.n]})
    if a.field != b.field:
        raise ValidationError("bands are defined over different fields")
    _require_line_parameter(a, "tensor")
    _require_line_parameter(b, "tensor")
    fld = a.field
    if (a.m > 1 or b.m > 1) and fld.characteristic:
        raise UnsupportedReductionError("tensor products with m > 1 need characteristic zero",
                                        {"m": [a.m, b.m], "field": fld.name})
    n = a.n
    k, l = a.laps, b.laps
    g = gcd(k, l)
    lcm = k * l // g
    lam, mu = a.lam, b.lam
    parameter = UnivariatePoly.linear(fld, lam ** (l // g) * mu ** (k // g))

    result = DecompositionResult()
    for i in range(g):
        word = tuple(a.d[j % (k * n)] + b.d[(j + i * n) % (l * n)] for j in range(lcm * n))
        result = result + periodic_split(word, n, 1, parameter)
    if a.m > 1 or b.m > 1:
        result = _with_unipotent(result, tensor_unipotent(a.m, b.m, 0), fld)
    logger.debug(f"tensor of {list(a.d)} and {list(b.d)}: {len(result.summands)} summands")
    return result


def pullback_etale(b: BandDescriptor, r: int) -> DecompositionResult:
    """pi_r^* B(d, 1, t - lam) = B(d^r, 1, t - lam^r) on E_{nr}, split when periodic."""
    if r < 1:
        raise ValidationError("covering degree must be positive", {"r": r})
    _require_line_parameter(b, "pullback")
    fld = b.field
    if b.m > 1 and fld.characteristic:
        raise UnsupportedReductionError("pullback with m > 1 needs characteristic zero",
                                        {"m": b.m, "field": fld.name})
    parameter = UnivariatePoly.linear(fld, b.lam ** r)
    result = periodic_split(b.d * r, b.n * r, 1, parameter)
    if b.m > 1:
        # pi_r^* F_m = F_m in characteristic zero
        result = DecompositionResult([(BandDescriptor(x.n, x.d, x.m * b.m, x.p), mult)
                                      for x, mult in result.summands])
    return result


def pushforward_decompose(d: Sequence[int], n: int, lam: Any, m: int, fld: BaseField) -> DecompositionResult:
    """Direct image of L(d, lam) (x) F_m along E_{len(d)} -> E_n, split into indecomposables."""
    return periodic_split(tuple(d), n, m, UnivariatePoly.linear(fld, lam))


def pushforward_line(d: Sequence[int], n: int, lam: Any, m: int, fld: BaseField) -> BandDescriptor:
    """
    The indecomposable direct image B(d, m, t - lam) on E_n.

    Raises:
        DecomposablePushforwardError: when d is periodic relative to n; the
            split is attached as ``decomposition``
    """
    if is_periodic(tuple(d), n) is not None:
        split = pushforward_decompose(d, n, lam, m, fld)
        raise DecomposablePushforwardError(
            "direct image of a periodic word is decomposable",
            {"n": n, "d": list(d), "summands": len(split.summands)}, decomposition=split)
    return BandDescriptor(n, tuple(d), m, UnivariatePoly.linear(fld, lam))


def _theta(d: Sequence[int]) -> int:
    """Sum over maximal cyclic runs of non-negative entries: length, plus one unless the run is all of d or all zero."""
    length = len(d)
    if all(x >= 0 for x in d):
        return length
    start = next(i for i in range(length) if d[i] < 0)
    total = 0
    run: List[int] = []
    for step in range(1, length + 1):
        value = d[(start + step) % length]
        if value >= 0:
            run.append(value)
            continue
        if run:
            total += len(run) + (0 if all(x == 0 for x in run) else 1)
        run = []
    return total


def cohomology_formula(b: BandDescriptor) -> Tuple[int, int]:
    """(h0, h1) of a band from its word: h0 = mk(sum (d_i + 1)^+ - theta(d)) + delta."""
    positive = sum(max(0, x + 1) for x in b.d)
    delta = 1 if all(x == 0 for x in b.d) and b.p == UnivariatePoly.linear(b.field, 1) else 0
    h0 = b.m * b.k * (positive - _theta(b.d)) + delta
    h1 = h0 - b.m * b.k * sum(b.d)
    return h0, h1


def twist(x: Descriptor, k: int) -> Descriptor:
    """Tensor with the line bundle of degree k on every component, B((k, ..., k), 1, t - 1)."""
    if isinstance(x, BandDescriptor):
        return BandDescriptor(x.n, tuple(e + k for e in x.d), x.m, x.p, strict=x.strict)
    if isinstance(x, StringDescriptor):
        return StringDescriptor(x.n, tuple(e + k for e in x.d), x.f)
    raise ValidationError(f"cannot twist {type(x).__name__}")
