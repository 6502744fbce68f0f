"""
Triples: the matrix normal form of a torsion-free sheaf.

On the cycle E_n every component L_c is a projective line carrying the node c
at 0 = (0:1) and the node c+1 (mod n) at infinity = (1:0). A ``NodalTriple``
stores, per component, the splitting degrees of the pullback to L_c (one row
per line summand, sorted ascending) and the two gluing matrices ``zero`` and
``infinity``; the columns of ``zero`` on L_c and of ``infinity`` on L_{c-1}
both index the fiber of the sheaf at node c, of dimension ``columns[c]``.

On the cuspidal cubic the conductor is a double point, so the gluing map is
i(0) + eps i_eps(0) with both matrices sharing rows and columns.
"""
import logging
from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

from . import linalg
from .descriptors import BandDescriptor, Charge, StringDescriptor
from .errors import ValidationError
from .fields import BaseField

logger = logging.getLogger("sheafcalc")

Matrix = List[List[Any]]


@dataclass
class ComponentGluing:
    degrees: List[int]
    zero: Matrix
    infinity: Matrix

    @property
    def rank(self) -> int:
        return len(self.degrees)


@dataclass
class NodalTriple:
    field: BaseField
    components: List[ComponentGluing]
    columns: List[int]

    @property
    def n(self) -> int:
        return len(self.components)

    def is_locally_free(self) -> bool:
        return all(self.columns[c] == comp.rank for c, comp in enumerate(self.components))


@dataclass
class CuspidalTriple:
    field: BaseField
    degrees: List[int]
    columns: int
    i0: Matrix
    i_eps: Matrix

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def is_locally_free(self) -> bool:
        return self.columns == self.rank


def _sorted_rows(degrees: Sequence[int], *matrices: Matrix) -> Tuple[List[int], ...]:
    order = sorted(range(len(degrees)), key=lambda i: (degrees[i], i))
    result = [[degrees[i] for i in order]]
    for matrix in matrices:
        result.append([list(matrix[i]) for i in order])
    return tuple(result)


def _frobenius_block(b: BandDescriptor) -> Matrix:
    field = b.field
    if b.p.degree == 1:
        return linalg.jordan_block(field, b.lam, b.m)
    return linalg.companion(field, (b.p ** b.m).coefficients)


def band_to_triple(b: BandDescriptor) -> NodalTriple:
    """
    Gluing matrices of B(d, m, p).

    Letter i of the word lives on component i mod n in lap i // n. At an inner
    node both letters of a lap share the column of that lap; at node 0 the end
    of lap l meets the start of lap l + 1, and the end of the last lap closes
    the cycle through the Frobenius block J_m(p).
    """
    field = b.field
    n, r = b.n, b.laps
    block = b.m * b.k
    size = r * block
    identity = linalg.identity(field, block)
    frobenius = _frobenius_block(b)

    components = []
    for c in range(n):
        letters = [i for i in range(len(b.d)) if i % n == c]
        letters.sort(key=lambda i: (b.d[i], i))
        zero = linalg.zeros(field, size, size)
        infinity = linalg.zeros(field, size, size)
        degrees = []
        for row_block, i in enumerate(letters):
            lap = i // n
            zero_col = lap
            if c == n - 1:
                inf_col = (lap + 1) % r
                inf_block = frobenius if lap == r - 1 else identity
            else:
                inf_col = lap
                inf_block = identity
            for a in range(block):
                for e in range(block):
                    zero[row_block * block + a][zero_col * block + e] = identity[a][e]
                    infinity[row_block * block + a][inf_col * block + e] = inf_block[a][e]
            degrees.extend([b.d[i]] * block)
        components.append(ComponentGluing(degrees, zero, infinity))
    logger.debug(f"band triple for d={list(b.d)} m={b.m} p={b.p}: size {size} on E_{n}")
    return NodalTriple(field, components, [size] * n)


def string_to_triple(s: StringDescriptor, field: BaseField) -> NodalTriple:
    """Gluing matrices of S(d, f); fiber columns are numbered by first appearance along the word."""
    n = s.n
    next_column = [0] * n
    zero_entry = []
    inf_entry = []
    previous_inf = None
    for j in range(len(s.d)):
        c = s.component_of(j)
        if previous_inf is None:
            zero_entry.append(next_column[c])
            next_column[c] += 1
        else:
            zero_entry.append(previous_inf)
        node = (c + 1) % n
        previous_inf = next_column[node]
        next_column[node] += 1
        inf_entry.append(previous_inf)

    components = []
    for c in range(n):
        letters = [j for j in range(len(s.d)) if s.component_of(j) == c]
        letters.sort(key=lambda j: (s.d[j], j))
        zero = linalg.zeros(field, len(letters), next_column[c])
        infinity = linalg.zeros(field, len(letters), next_column[(c + 1) % n])
        for row, j in enumerate(letters):
            zero[row][zero_entry[j]] = field.one
            infinity[row][inf_entry[j]] = field.one
        components.append(ComponentGluing([s.d[j] for j in letters], zero, infinity))
    return NodalTriple(field, components, list(next_column))


def structure_sheaf(n: int, field: BaseField) -> NodalTriple:
    one = [[field.one]]
    return NodalTriple(field, [ComponentGluing([0], one, one) for _ in range(n)], [1] * n)


def cuspidal_line_bundle(lam: Any, field: BaseField, degree: int = 0) -> CuspidalTriple:
    """The line bundle 1 + eps*lam on the cuspidal cubic, twisted to the given degree."""
    return CuspidalTriple(field, [degree], 1, [[field.one]], [[field(lam)]])


def validate_triple(t) -> None:
    """
    Check shapes, full row rank of every gluing matrix and injectivity of the
    stacked fiber maps; raises ValidationError on the first violation.
    """
    field = t.field
    if isinstance(t, CuspidalTriple):
        shapes = [(t.i0, "i0"), (t.i_eps, "i_eps")]
        for matrix, name in shapes:
            if len(matrix) != t.rank or any(len(row) != t.columns for row in matrix):
                raise ValidationError(f"{name} must be {t.rank}x{t.columns}")
        if t.columns < t.rank or linalg.rank(field, t.i0, t.columns) != t.rank:
            raise ValidationError("i0 must have full row rank")
        if linalg.rank(field, t.i0 + t.i_eps, t.columns) != t.columns:
            raise ValidationError("gluing map is not injective on the fiber")
        return

    n = t.n
    if len(t.columns) != n:
        raise ValidationError("one column count per node is required", {"n": n, "columns": t.columns})
    for c, comp in enumerate(t.components):
        for matrix, cols, name in ((comp.zero, t.columns[c], "zero"),
                                   (comp.infinity, t.columns[(c + 1) % n], "infinity")):
            if len(matrix) != comp.rank or any(len(row) != cols for row in matrix):
                raise ValidationError(f"{name} matrix on component {c} must be {comp.rank}x{cols}",
                                      {"component": c})
            if linalg.rank(field, matrix, cols) != comp.rank:
                raise ValidationError(f"{name} matrix on component {c} lacks full row rank",
                                      {"component": c})
    for node in range(n):
        stacked = t.components[node].zero + t.components[(node - 1) % n].infinity
        if linalg.rank(field, stacked, t.columns[node]) != t.columns[node]:
            raise ValidationError(f"fiber map at node {node} is not injective", {"node": node})


def euler_characteristic(t) -> int:
    """chi(F~) + dim M - total fiber dimension, with chi(O(e)) = e + 1."""
    if isinstance(t, CuspidalTriple):
        return sum(e + 1 for e in t.degrees) + t.columns - 2 * t.rank
    sections = sum(e + 1 for comp in t.components for e in comp.degrees)
    return sections + sum(t.columns) - 2 * sum(comp.rank for comp in t.components)


def triple_charge(t) -> Charge:
    """Rank profile and degree (chi, since the dualizing sheaf is trivial)."""
    if isinstance(t, CuspidalTriple):
        return Charge(t.rank, euler_characteristic(t), (t.rank,))
    profile = tuple(comp.rank for comp in t.components)
    return Charge(max(profile), euler_characteristic(t), profile)


def _require_nodal_match(a: NodalTriple, b: NodalTriple) -> None:
    if a.n != b.n or a.field != b.field:
        raise ValidationError("triples live on different curves or fields",
                              {"cycles": [a.n, b.n], "fields": [a.field.name, b.field.name]})


def direct_sum(*triples):
    """Block direct sum, rows re-sorted by degree."""
    if not triples:
        raise ValidationError("direct_sum needs at least one triple")
    first = triples[0]
    field = first.field
    if isinstance(first, CuspidalTriple):
        degrees, i0_blocks, eps_blocks = [], [], []
        for t in triples:
            if not isinstance(t, CuspidalTriple) or t.field != field:
                raise ValidationError("cannot mix cuspidal triples with other kinds")
            degrees.extend(t.degrees)
            i0_blocks.append((t.i0, t.rank, t.columns))
            eps_blocks.append((t.i_eps, t.rank, t.columns))
        degrees, i0, i_eps = _sorted_rows(degrees, linalg.block_diagonal(field, i0_blocks),
                                          linalg.block_diagonal(field, eps_blocks))
        return CuspidalTriple(field, degrees, sum(t.columns for t in triples), i0, i_eps)

    for t in triples[1:]:
        if not isinstance(t, NodalTriple):
            raise ValidationError("cannot mix nodal triples with other kinds")
        _require_nodal_match(first, t)
    n = first.n
    components = []
    for c in range(n):
        degrees = [e for t in triples for e in t.components[c].degrees]
        zero = linalg.block_diagonal(field, [(t.components[c].zero, t.components[c].rank, t.columns[c])
                                             for t in triples])
        infinity = linalg.block_diagonal(field, [(t.components[c].infinity, t.components[c].rank,
                                                  t.columns[(c + 1) % n]) for t in triples])
        degrees, zero, infinity = _sorted_rows(degrees, zero, infinity)
        components.append(ComponentGluing(degrees, zero, infinity))
    columns = [sum(t.columns[c] for t in triples) for c in range(n)]
    return NodalTriple(field, components, columns)


def _require_vector_bundle(t: NodalTriple, operation: str) -> None:
    if not t.is_locally_free():
        raise ValidationError(f"{operation} is only defined for vector bundles here",
                              {"columns": t.columns})


def tensor_triples(a: NodalTriple, b: NodalTriple) -> NodalTriple:
    """Component-wise Kronecker product of gluing data of two vector bundles."""
    _require_nodal_match(a, b)
    _require_vector_bundle(a, "tensor")
    _require_vector_bundle(b, "tensor")
    field = a.field
    components = []
    for ca, cb in zip(a.components, b.components):
        degrees = [x + y for x in ca.degrees for y in cb.degrees]
        zero = linalg.kronecker(field, ca.zero, cb.zero)
        infinity = linalg.kronecker(field, ca.infinity, cb.infinity)
        degrees, zero, infinity = _sorted_rows(degrees, zero, infinity)
        components.append(ComponentGluing(degrees, zero, infinity))
    return NodalTriple(field, components, [x * y for x, y in zip(a.columns, b.columns)])


def _inverse_transpose(field: BaseField, matrix: Matrix) -> Matrix:
    return linalg.transpose(linalg.inverse(field, matrix), len(matrix))


def dual_triple(t):
    """Dual vector bundle: degrees negated, gluing matrices inverse-transposed."""
    field = t.field
    if isinstance(t, CuspidalTriple):
        if not t.is_locally_free():
            raise ValidationError("dual is only defined for vector bundles here")
        # (i0 + eps B)^-1 = i0^-1 - eps i0^-1 B i0^-1
        inv = linalg.inverse(field, t.i0)
        correction = linalg.matmul(field, linalg.matmul(field, inv, t.i_eps), inv)
        i0 = linalg.transpose(inv, t.rank)
        i_eps = [[-x for x in row] for row in linalg.transpose(correction, t.rank)]
        degrees, i0, i_eps = _sorted_rows([-e for e in t.degrees], i0, i_eps)
        return CuspidalTriple(field, degrees, t.columns, i0, i_eps)

    _require_vector_bundle(t, "dual")
    components = []
    for comp in t.components:
        degrees, zero, infinity = _sorted_rows([-e for e in comp.degrees],
                                               _inverse_transpose(field, comp.zero),
                                               _inverse_transpose(field, comp.infinity))
        components.append(ComponentGluing(degrees, zero, infinity))
    return NodalTriple(field, components, list(t.columns))


def pushforward_triple(t: NodalTriple, n: int) -> NodalTriple:
    """
    Direct image along the etale covering E_{nr} -> E_n.

    Component c + n*j of the cover maps to L_c and the node c + n*j to node c,
    so rows and fiber columns are concatenated over the r sheets.
    """
    total = t.n
    if n < 1 or total % n:
        raise ValidationError("cover size must be a multiple of the base cycle length",
                              {"cover": total, "base": n})
    r = total // n
    field = t.field
    columns = [sum(t.columns[c + n * j] for j in range(r)) for c in range(n)]
    components = []
    for c in range(n):
        target_node = (c + 1) % n
        target_offsets = []
        offset = 0
        for j in range(r):
            target_offsets.append(offset)
            offset += t.columns[target_node + n * j]

        degrees: List[int] = []
        zero_blocks = []
        infinity = []
        for j in range(r):
            comp = t.components[c + n * j]
            degrees.extend(comp.degrees)
            zero_blocks.append((comp.zero, comp.rank, t.columns[c + n * j]))
            upstairs_node = (c + n * j + 1) % total
            sheet = upstairs_node // n
            start = target_offsets[sheet]
            for row in comp.infinity:
                padded = [field.zero] * columns[target_node]
                padded[start:start + len(row)] = row
                infinity.append(padded)
        zero = linalg.block_diagonal(field, zero_blocks)
        degrees, zero, infinity = _sorted_rows(degrees, zero, infinity)
        components.append(ComponentGluing(degrees, zero, infinity))
    return NodalTriple(field, components, columns)


def pullback_triple(t: NodalTriple, r: int) -> NodalTriple:
    """Inverse image along E_{nr} -> E_n: every sheet copies the gluing data."""
    if r < 1:
        raise ValidationError("covering degree must be positive", {"r": r})
    components = [ComponentGluing(list(comp.degrees), [list(row) for row in comp.zero],
                                  [list(row) for row in comp.infinity])
                  for _ in range(r) for comp in t.components]
    return NodalTriple(t.field, components, list(t.columns) * r)
