"""
Laurent polynomials in z, matrices over k[z, 1/z] and Birkhoff factorization.

A matrix M with unit determinant is brought to diagonal form
T^-1 M S = diag(z^d_1, ..., z^d_r) with S invertible over k[z] and T invertible
over k[1/z]:

1. column operations over k[z] make M lower triangular with monomial diagonal;
2. each nonzero subdiagonal entry is removed either directly (elementary row
   and column operations) or by the 2x2 completion step, which moves the two
   diagonal exponents closer together;
3. entries are visited in order of distance from the diagonal, then column.

The exponents d_i are those of the splitting type O(-d_1) + ... + O(-d_r).
"""
import logging
import random
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence, Tuple

from sympy import Poly, Symbol

from .errors import NotInvertibleError, ValidationError
from .fields import BaseField

logger = logging.getLogger("sheafcalc")

Z = Symbol("z")

# Guard against a reduction loop that fails to terminate
MAX_REDUCTION_STEPS = 100000


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c * z**e with integer (possibly negative) exponents."""

    field: BaseField
    terms: Tuple[Tuple[int, Any], ...] = ()

    def __post_init__(self):
        merged: Dict[int, Any] = {}
        for exponent, coeff in self.terms:
            merged[exponent] = merged.get(exponent, self.field.zero) + coeff
        cleaned = tuple(sorted((e, c) for e, c in merged.items() if not self.field.is_zero(c)))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, field: BaseField) -> "LaurentPoly":
        return cls(field)

    @classmethod
    def monomial(cls, field: BaseField, exponent: int, coeff: Any = None) -> "LaurentPoly":
        return cls(field, ((exponent, field.one if coeff is None else field(coeff)),))

    @classmethod
    def from_mapping(cls, field: BaseField, mapping: Dict[int, Any]) -> "LaurentPoly":
        return cls(field, tuple((int(e), field(c)) for e, c in mapping.items()))

    @classmethod
    def from_sympy(cls, field: BaseField, poly: Poly, shift: int = 0) -> "LaurentPoly":
        """z**shift * poly."""
        terms = [(monom[0] + shift, field.domain.from_sympy(c)) for monom, c in poly.terms()]
        return cls(field, tuple(terms))

    def to_sympy(self, shift: int = 0) -> Poly:
        """z**shift * self as a polynomial; the shift must clear every negative exponent."""
        if self.terms and self.terms[0][0] + shift < 0:
            raise ValidationError("shift does not clear denominators", {"shift": shift})
        mapping = {(e + shift,): self.field.domain.to_sympy(c) for e, c in self.terms}
        if not mapping:
            return Poly(0, Z, domain=self.field.domain)
        return Poly.from_dict(mapping, Z, domain=self.field.domain)

    def as_dict(self) -> Dict[int, Any]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def lowest(self) -> int:
        return self.terms[0][0]

    @property
    def highest(self) -> int:
        return self.terms[-1][0]

    def coefficient(self, exponent: int) -> Any:
        return dict(self.terms).get(exponent, self.field.zero)

    def is_polynomial(self) -> bool:
        """Lies in k[z]."""
        return not self.terms or self.lowest >= 0

    def is_polynomial_in_inverse(self) -> bool:
        """Lies in k[1/z]."""
        return not self.terms or self.highest <= 0

    def part(self, keep: Callable[[int], bool]) -> "LaurentPoly":
        return LaurentPoly(self.field, tuple((e, c) for e, c in self.terms if keep(e)))

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.field, tuple((e + k, c) for e, c in self.terms))

    def scale(self, c: Any) -> "LaurentPoly":
        return LaurentPoly(self.field, tuple((e, c * v) for e, v in self.terms))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self.field, self.terms + other.terms)

    def __neg__(self) -> "LaurentPoly":
        return self.scale(-self.field.one)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        products = [(e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms]
        return LaurentPoly(self.field, tuple(products))

    def to_json(self) -> Dict[str, str]:
        return {str(e): self.field.format(c) for e, c in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{self.field.format(c)}*z^{e}" for e, c in self.terms)


class LaurentMatrix:
    """Square matrix with LaurentPoly entries."""

    def __init__(self, field: BaseField, rows: Sequence[Sequence[LaurentPoly]]):
        self.field = field
        self.rows = [list(row) for row in rows]
        self.size = len(self.rows)
        if any(len(row) != self.size for row in self.rows):
            raise ValidationError("Laurent matrices must be square",
                                  {"shape": [len(row) for row in self.rows]})

    @classmethod
    def identity(cls, field: BaseField, size: int) -> "LaurentMatrix":
        return cls.diagonal(field, [0] * size)

    @classmethod
    def diagonal(cls, field: BaseField, exponents: Sequence[int]) -> "LaurentMatrix":
        size = len(exponents)
        rows = [[LaurentPoly.monomial(field, exponents[i]) if i == j else LaurentPoly.zero(field)
                 for j in range(size)] for i in range(size)]
        return cls(field, rows)

    @classmethod
    def from_mappings(cls, field: BaseField, entries: Sequence[Sequence[Dict[int, Any]]]) -> "LaurentMatrix":
        return cls(field, [[LaurentPoly.from_mapping(field, cell) for cell in row] for row in entries])

    def copy(self) -> "LaurentMatrix":
        return LaurentMatrix(self.field, self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> LaurentPoly:
        i, j = index
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentMatrix) and self.field == other.field and self.rows == other.rows

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        n = self.size
        zero = LaurentPoly.zero(self.field)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    if not self.rows[i][k].is_zero() and not other.rows[k][j].is_zero():
                        acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            rows.append(row)
        return LaurentMatrix(self.field, rows)

    def determinant(self) -> LaurentPoly:
        """Exact determinant by cofactor expansion along the sparsest row."""
        return _cofactor_determinant(self.field, self.rows)

    def is_over_polynomials(self) -> bool:
        return all(entry.is_polynomial() for row in self.rows for entry in row)

    def is_over_inverse_polynomials(self) -> bool:
        return all(entry.is_polynomial_in_inverse() for row in self.rows for entry in row)

    # Elementary operations, in place
    def add_column(self, target: int, source: int, factor: LaurentPoly) -> None:
        for row in self.rows:
            if not row[source].is_zero():
                row[target] = row[target] + factor * row[source]

    def add_row(self, target: int, source: int, factor: LaurentPoly) -> None:
        source_row = self.rows[source]
        target_row = self.rows[target]
        for j, entry in enumerate(source_row):
            if not entry.is_zero():
                target_row[j] = target_row[j] + factor * entry

    def swap_columns(self, a: int, b: int) -> None:
        for row in self.rows:
            row[a], row[b] = row[b], row[a]

    def swap_rows(self, a: int, b: int) -> None:
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]

    def scale_column(self, j: int, c: Any) -> None:
        for row in self.rows:
            row[j] = row[j].scale(c)

    def permute(self, order: Sequence[int]) -> "LaurentMatrix":
        """Columns reordered: new column k is old column order[k]."""
        return LaurentMatrix(self.field, [[row[k] for k in order] for row in self.rows])

    def to_json(self) -> List[List[Dict[str, str]]]:
        return [[entry.to_json() for entry in row] for row in self.rows]


def _cofactor_determinant(field: BaseField, rows: List[List[LaurentPoly]]) -> LaurentPoly:
    n = len(rows)
    if n == 0:
        return LaurentPoly.monomial(field, 0)
    if n == 1:
        return rows[0][0]
    pivot_row = min(range(n), key=lambda i: sum(not e.is_zero() for e in rows[i]))
    total = LaurentPoly.zero(field)
    for j, entry in enumerate(rows[pivot_row]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(rows) if i != pivot_row]
        term = entry * _cofactor_determinant(field, minor)
        total = total - term if (pivot_row + j) % 2 else total + term
    return total


@dataclass
class BirkhoffFactorization:
    """Result of ``birkhoff_factor``: T^-1 M S = diag(z^exponents)."""

    s: LaurentMatrix
    t: LaurentMatrix
    exponents: List[int]

    @property
    def diagonal(self) -> LaurentMatrix:
        return LaurentMatrix.diagonal(self.s.field, self.exponents)


class _Reducer:
    """Mutable working state: the current matrix plus the accumulated S and T."""

    def __init__(self, matrix: LaurentMatrix):
        self.field = matrix.field
        self.work = matrix.copy()
        self.s = LaurentMatrix.identity(self.field, matrix.size)
        self.t = LaurentMatrix.identity(self.field, matrix.size)

    # Column operations act on the right: work <- work E, S <- S E
    def column_add(self, target: int, source: int, factor: LaurentPoly) -> None:
        self.work.add_column(target, source, factor)
        self.s.add_column(target, source, factor)

    def column_swap(self, a: int, b: int) -> None:
        self.work.swap_columns(a, b)
        self.s.swap_columns(a, b)

    def column_scale(self, j: int, c: Any) -> None:
        self.work.scale_column(j, c)
        self.s.scale_column(j, c)

    # Row operations act on the left: work <- E work, T <- T E^-1
    def row_add(self, target: int, source: int, factor: LaurentPoly) -> None:
        self.work.add_row(target, source, factor)
        self.t.add_column(source, target, -factor)

    def row_swap(self, a: int, b: int) -> None:
        self.work.swap_rows(a, b)
        self.t.swap_columns(a, b)

    def columns_mix(self, a: int, b: int, e: Tuple[Tuple[LaurentPoly, LaurentPoly], Tuple[LaurentPoly, LaurentPoly]]) -> None:
        """Right-multiply columns (a, b) by the 2x2 matrix e."""
        for matrix in (self.work, self.s):
            for row in matrix.rows:
                left, right = row[a], row[b]
                row[a] = left * e[0][0] + right * e[1][0]
                row[b] = left * e[0][1] + right * e[1][1]


def _check_unit_determinant(matrix: LaurentMatrix) -> LaurentPoly:
    det = matrix.determinant()
    if not det.is_monomial():
        raise NotInvertibleError("determinant is not a unit of k[z, 1/z]",
                                 {"determinant": det.to_json()})
    return det


def _triangularize(reducer: _Reducer) -> List[int]:
    """Lower-triangularize with monomial diagonal via gcd column reduction."""
    work = reducer.work
    size = work.size
    for k in range(size):
        row = work.rows[k]
        while True:
            nonzero = [j for j in range(k, size) if not row[j].is_zero()]
            if not nonzero:
                raise NotInvertibleError("matrix is singular", {"row": k})
            shift = max(0, -min(row[j].lowest for j in nonzero))
            pivot = min(nonzero, key=lambda j: (row[j].highest, j))
            if len(nonzero) == 1:
                break
            pivot_poly = row[pivot].to_sympy(shift)
            for j in nonzero:
                if j == pivot:
                    continue
                quotient, _ = row[j].to_sympy(shift).div(pivot_poly)
                if not quotient.is_zero:
                    reducer.column_add(j, pivot, -LaurentPoly.from_sympy(reducer.field, quotient))
        if pivot != k:
            reducer.column_swap(pivot, k)
        if not row[k].is_monomial():
            raise NotInvertibleError("pivot is not a unit; determinant is not a unit",
                                     {"row": k, "pivot": row[k].to_json()})
    exponents = []
    for k in range(size):
        exponent, coeff = work.rows[k][k].terms[0]
        if coeff != reducer.field.one:
            reducer.column_scale(k, reducer.field.inverse(coeff))
        exponents.append(exponent)
    return exponents


def _first_subdiagonal(work: LaurentMatrix):
    """First nonzero entry below the diagonal: (2,1) < (3,2) < ... < (3,1) < ... < (r,1)."""
    size = work.size
    for distance in range(1, size):
        for j in range(size - distance):
            if not work.rows[j + distance][j].is_zero():
                return j + distance, j
    return None


def _diagonalize(reducer: _Reducer, exponents: List[int]) -> None:
    work = reducer.work
    field = reducer.field
    for step in range(MAX_REDUCTION_STEPS):
        position = _first_subdiagonal(work)
        if position is None:
            return
        i0, j0 = position
        m, n = exponents[j0], exponents[i0]

        # Terms of degree >= n die under a k[z] column operation, <= m under a k[1/z] row operation
        high = work.rows[i0][j0].part(lambda e: e >= n)
        if not high.is_zero():
            reducer.column_add(j0, i0, -high.shift(-n))
        low = work.rows[i0][j0].part(lambda e: e <= m)
        if not low.is_zero():
            reducer.row_add(i0, j0, -low.shift(-m))
        p = work.rows[i0][j0]
        if p.is_zero():
            continue

        # Here m < d <= deg p < n; complete (p, z^n) to a unimodular 2x2 matrix
        d = p.lowest
        p0 = p.shift(-d)
        s_poly, t_poly, gcd = p0.to_sympy().gcdex(LaurentPoly.monomial(field, n - d).to_sympy())
        if gcd.degree() != 0:
            raise NotInvertibleError("completion step found a non-unit gcd",
                                     {"p": p.to_json(), "n": n})
        inv = field.inverse(field.domain.from_sympy(gcd.LC()))
        a = LaurentPoly.from_sympy(field, s_poly).scale(inv)
        b = LaurentPoly.from_sympy(field, t_poly).scale(inv)
        completion = ((a, -LaurentPoly.monomial(field, n - d)), (b, p0))
        reducer.columns_mix(j0, i0, completion)
        reducer.row_swap(j0, i0)
        reducer.column_scale(i0, -field.one)
        exponents[j0], exponents[i0] = d, m + n - d
        logger.debug(f"completion at ({i0},{j0}): exponents ({m},{n}) -> ({d},{m + n - d})")
    raise NotInvertibleError("Birkhoff reduction did not terminate", {"steps": MAX_REDUCTION_STEPS})


def birkhoff_factor(matrix: LaurentMatrix) -> BirkhoffFactorization:
    """
    Factor M as T diag(z^d_1..z^d_r) S^-1.

    Args:
        matrix: Square Laurent matrix with unit determinant

    Returns:
        S (over k[z]), T (over k[1/z]) and the exponents sorted ascending
    """
    det = _check_unit_determinant(matrix)
    reducer = _Reducer(matrix)
    exponents = _triangularize(reducer)
    _diagonalize(reducer, exponents)

    order = sorted(range(matrix.size), key=lambda k: (exponents[k], k))
    s = reducer.s.permute(order)
    t = reducer.t.permute(order)
    sorted_exponents = [exponents[k] for k in order]

    result = BirkhoffFactorization(s=s, t=t, exponents=sorted_exponents)
    if matrix * s != t * result.diagonal:
        raise NotInvertibleError("factorization failed the multiply-back check")
    if sum(sorted_exponents) != det.lowest:
        raise NotInvertibleError("exponent sum differs from the determinant degree",
                                 {"exponents": sorted_exponents, "determinant": det.to_json()})
    logger.debug(f"Birkhoff exponents {sorted_exponents} for a {matrix.size}x{matrix.size} matrix")
    return result


def splitting_type(matrix: LaurentMatrix) -> List[int]:
    """Multidegree {-d_i} of the bundle on P^1 glued by M, sorted ascending."""
    return sorted(-d for d in birkhoff_factor(matrix).exponents)


def _random_elementary(field: BaseField, size: int, rng: random.Random, sign: int, span: int) -> LaurentMatrix:
    matrix = LaurentMatrix.identity(field, size)
    if size < 2:
        matrix.scale_column(0, field.random_nonzero(rng))
        return matrix
    i, j = rng.sample(range(size), 2)
    terms = tuple((sign * rng.randint(0, span), field.random_element(rng)) for _ in range(2))
    matrix.add_column(j, i, LaurentPoly(field, terms))
    return matrix


def random_unimodular(field: BaseField, size: int, rng: random.Random, over_inverse: bool = False,
                      steps: int = 4, span: int = 2) -> LaurentMatrix:
    """
    Random product of elementary matrices.

    Args:
        field: Base field
        size: Matrix size
        rng: Source of randomness
        over_inverse: Build an element of GL(k[1/z]) instead of GL(k[z])
        steps: Number of elementary factors
        span: Largest exponent (in absolute value) of the entries of each factor

    Returns:
        A matrix invertible over k[z] (or k[1/z])
    """
    sign = -1 if over_inverse else 1
    result = LaurentMatrix.identity(field, size)
    for _ in range(steps):
        result = result * _random_elementary(field, size, rng, sign, span)
    return result


def random_plus_unimodular(field: BaseField, size: int, rng: random.Random, steps: int = 4,
                           span: int = 2) -> LaurentMatrix:
    return random_unimodular(field, size, rng, False, steps, span)


def random_minus_unimodular(field: BaseField, size: int, rng: random.Random, steps: int = 4,
                            span: int = 2) -> LaurentMatrix:
    return random_unimodular(field, size, rng, True, steps, span)
