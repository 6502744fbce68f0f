"""
Stable bundles on the nodal cubic E_1 and simple sheaves on the cuspidal cubic.

Both constructions run a Euclidean-type reduction on (rank, degree) and then
rebuild the answer by reversing it. Simplicity (End = k) is certified with the
triples oracle.
"""
import logging
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Any, List, Optional, Tuple

from . import config, linalg
from .descriptors import BandDescriptor
from .errors import InconclusiveError, NoStableObjectError, ValidationError
from .fields import BaseField, UnivariatePoly
from .oracle import end_dim
from .triples import CuspidalTriple, validate_triple

logger = logging.getLogger("sheafcalc")


def _require_coprime(r: int, d: int, what: str) -> None:
    if r < 1:
        raise ValidationError("rank must be positive", {"r": r})
    if gcd(r, d) != 1:
        raise NoStableObjectError(f"no {what} of rank {r} and degree {d}: rank and degree must be coprime",
                                  {"r": r, "d": d})


@dataclass
class StableSequence:
    """Bits of the multidegree word, the line-bundle twist and the reduction trace."""

    bits: List[int]
    twist: int
    chain: List[Tuple[int, int, str, int]] = field(default_factory=list)

    @property
    def word(self) -> Tuple[int, ...]:
        return tuple(bit + self.twist for bit in self.bits)


def stable_sequence(r: int, d: int) -> StableSequence:
    """
    Multidegree word of the stable bundle of rank r and degree d on E_1.

    Args:
        r: Rank
        d: Degree coprime to r; degrees outside 0 < d < r are handled by a
            twist d // r recorded in the result

    Returns:
        StableSequence whose ``bits`` sum to d mod r
    """
    _require_coprime(r, d, "stable bundle")
    twist, d = divmod(d, r)
    if r == 1:
        return StableSequence([0], twist)

    y, x = min(d, r - d), max(d, r - d)
    chain: List[Tuple[int, int, str, int]] = []
    if x == y:
        word = ["a", "b"]
    else:
        while y > 1:
            k, s = divmod(x, y)
            if s > y - s:
                chain.append((x, y, "A", k))
                x, y = s, y - s
            else:
                chain.append((x, y, "B", k))
                x, y = y - s, s
        word = ["a"] * x + ["b"]
        for _, _, kind, k in reversed(chain):
            expanded = []
            for letter in word:
                longer = (letter == "a") == (kind == "A")
                expanded.extend(["a"] * (k + 1 if longer else k) + ["b"])
            word = expanded

    majority = 1 if d > r - d else 0
    bits = [majority if letter == "a" else 1 - majority for letter in word]
    logger.debug(f"stable sequence ({r},{d}) via {chain}: {bits}")
    return StableSequence(bits, twist, chain)


def stable_band(r: int, d: int, lam: Any, fld: BaseField) -> BandDescriptor:
    """B(bits + twist, 1, t - lam) on E_1."""
    sequence = stable_sequence(r, d)
    return BandDescriptor(1, sequence.word, 1, UnivariatePoly.linear(fld, lam))


def euclidean_chain(r1: int, r2: int) -> List[Tuple[int, int]]:
    """Subtractive Euclid from (r1, r2) down to (1, 1) or (1, 0)."""
    chain = [(r1, r2)]
    while (r1, r2) not in ((1, 1), (1, 0)):
        if r1 > r2:
            r1 -= r2
        else:
            r2 -= r1
        chain.append((r1, r2))
    return chain


def _simple_block(fld: BaseField, r1: int, r2: int, lam: Any) -> List[List[Any]]:
    if (r1, r2) == (1, 0):
        return [[fld(lam)]]
    if (r1, r2) == (1, 1):
        return [[fld.zero, fld.one], [fld.zero, fld(lam)]]
    size = r1 + r2
    result = linalg.zeros(fld, size, size)
    if r1 > r2:
        inner = _simple_block(fld, r1 - r2, r2, lam)
        for i in range(r1):
            for j in range(r1):
                result[i][j] = inner[i][j]
        for i in range(r2):
            result[r1 - r2 + i][r1 + i] = fld.one
    else:
        inner = _simple_block(fld, r1, r2 - r1, lam)
        for i in range(r1):
            result[i][r1 + i] = fld.one
        for i in range(r2):
            for j in range(r2):
                result[r1 + i][r1 + j] = inner[i][j]
    return result


def cuspidal_simple_matrix(r: int, d: int, lam: Any, fld: BaseField) -> CuspidalTriple:
    """
    The simple vector bundle of rank r and degree d on the cuspidal cubic.

    With d = c r + r2 and r1 = r - r2 the normalization is O(c)^r1 + O(c+1)^r2,
    i(0) is the identity and i_eps(0) is built recursively along the
    Euclidean chain of (r1, r2).
    """
    _require_coprime(r, d, "simple vector bundle")
    c, r2 = divmod(d, r)
    r1 = r - r2
    degrees = [c] * r1 + [c + 1] * r2
    i_eps = _simple_block(fld, r1, r2, lam)
    logger.debug(f"cuspidal simple matrix ({r},{d}) chain {euclidean_chain(r1, r2)}")
    return CuspidalTriple(fld, degrees, r, linalg.identity(fld, r), i_eps)


def _shift_candidate(fld: BaseField, r: int, last_column: List[Any]) -> List[List[Any]]:
    result = linalg.zeros(fld, r, r + 1)
    for i in range(r - 1):
        result[i][i + 1] = fld.one
    for i in range(r):
        result[i][r] = last_column[i]
    return result


def _binary_columns(r: int):
    """Nonzero 0/1 vectors of length r by number of ones, then lexicographically."""
    vectors = []
    for mask in range(1, 2 ** r):
        bits = tuple((mask >> (r - 1 - i)) & 1 for i in range(r))
        vectors.append(bits)
    vectors.sort(key=lambda v: (sum(v), v))
    return vectors


def certify_simple(t) -> bool:
    """True iff End(t) is one-dimensional."""
    return end_dim(t) == 1


def _is_simple_sheaf(t: CuspidalTriple) -> bool:
    try:
        validate_triple(t)
    except ValidationError:
        return False
    return certify_simple(t)


def cuspidal_tf_nonlocallyfree(r: int, d: int, fld: BaseField, seed: Optional[int] = None) -> CuspidalTriple:
    """
    The simple torsion-free, not locally free sheaf of rank r and degree d on
    the cuspidal cubic: i(0) = (I_r | 0) with one extra fiber column.

    When r divides d - 1 the answer is i_eps = (N_r | e_r) with N_r the
    nilpotent shift. Otherwise candidates (N_r | y) over 0/1 columns y, then
    seeded random i_eps, are tried until the oracle certifies End = k.
    """
    _require_coprime(r, d, "simple torsion-free sheaf")
    c, r2 = divmod(d - 1, r)
    r1 = r - r2
    degrees = [c] * r1 + [c + 1] * r2
    i0 = linalg.zeros(fld, r, r + 1)
    for i in range(r):
        i0[i][i] = fld.one

    if r2 == 0:
        last = [fld.zero] * (r - 1) + [fld.one]
        return CuspidalTriple(fld, degrees, r + 1, i0, _shift_candidate(fld, r, last))

    for column in _binary_columns(r):
        candidate = CuspidalTriple(fld, degrees, r + 1, i0, _shift_candidate(fld, r, [fld(v) for v in column]))
        if _is_simple_sheaf(candidate):
            logger.debug(f"cuspidal torsion-free ({r},{d}) certified with column {column}")
            return candidate

    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    for _ in range(config.TF_SEARCH_LIMIT):
        i_eps = [[fld.random_element(rng) for _ in range(r + 1)] for _ in range(r)]
        candidate = CuspidalTriple(fld, degrees, r + 1, i0, i_eps)
        if _is_simple_sheaf(candidate):
            return candidate
    raise InconclusiveError("no simple torsion-free matrix found",
                            {"r": r, "d": d, "tries": config.TF_SEARCH_LIMIT})
