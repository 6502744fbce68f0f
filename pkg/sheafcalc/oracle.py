"""
Exact linear-algebra oracle over the category of triples.

A morphism of triples (F, f) consists of a matrix F of homogeneous forms on
each component (the entry from a summand O(b) to O(a) has degree a - b and
vanishes when that is negative) and a linear map f between fiber spaces at
every node, subject to F(point) * i_source = i_target * f at every
node-preimage. Hom spaces, sections and isomorphism tests all reduce to
kernels of sparse linear systems over the base field.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from sympy import symbols
from sympy.polys.matrices import DomainMatrix

from . import config, linalg
from .errors import InconclusiveError, SheafCalcError, ValidationError
from .triples import CuspidalTriple, NodalTriple, euler_characteristic

logger = logging.getLogger("sheafcalc")

Matrix = List[List[Any]]


class _System:
    """Sparse linear system assembled entry by entry."""

    def __init__(self, field):
        self.field = field
        self.entries: Dict[Tuple[int, int], Any] = {}
        self.equations = 0
        self.unknowns = 0

    def allocate(self, count: int) -> int:
        start = self.unknowns
        self.unknowns += count
        return start

    def new_equation(self) -> int:
        self.equations += 1
        return self.equations - 1

    def add(self, equation: int, unknown: int, value: Any) -> None:
        if self.field.is_zero(value):
            return
        key = (equation, unknown)
        self.entries[key] = self.entries.get(key, self.field.zero) + value

    def matrix(self):
        return linalg.sparse_matrix(self.field, self.equations, self.unknowns, self.entries)


@dataclass
class HomSpace:
    """
    Basis of Hom(source, target) as solution vectors, plus the decoding data
    needed to evaluate the fiber-level matrices of a morphism.
    """

    source: Any
    target: Any
    basis: List[List[Any]]
    unknowns: int
    forms: Dict[Tuple[int, int, int], Tuple[int, int]] = field(default_factory=dict)
    fibers: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def square_blocks(self, vector: List[Any]) -> List[Matrix]:
        """
        The matrices whose joint invertibility makes ``vector`` an isomorphism:
        the constant value of F on each component and every fiber map f.
        """
        fld = self.source.field
        blocks = []
        if isinstance(self.source, CuspidalTriple):
            row_counts = [(self.target.rank, self.source.rank)]
        else:
            row_counts = [(t.rank, s.rank) for t, s in zip(self.target.components, self.source.components)]
        for c, (rows, cols) in enumerate(row_counts):
            value = linalg.zeros(fld, rows, cols)
            for (comp, a, b), (start, _) in self.forms.items():
                if comp == c:
                    value[a][b] = vector[start]
            blocks.append(value)
        for start, rows, cols in self.fibers:
            blocks.append([[vector[start + k * cols + col] for col in range(cols)] for k in range(rows)])
        return blocks


def _allocate_forms(system: _System, forms: Dict, c: int, target_degrees, source_degrees) -> None:
    for a, deg_a in enumerate(target_degrees):
        for b, deg_b in enumerate(source_degrees):
            e = deg_a - deg_b
            if e >= 0:
                forms[(c, a, b)] = (system.allocate(e + 1), e)


def _require_same_kind(t1, t2) -> None:
    if type(t1) is not type(t2):
        raise ValidationError("cannot compare a nodal triple with a cuspidal one")
    if t1.field != t2.field:
        raise ValidationError("triples are defined over different fields",
                              {"fields": [t1.field.name, t2.field.name]})
    if isinstance(t1, NodalTriple) and t1.n != t2.n:
        raise ValidationError("triples live on different cycles", {"cycles": [t1.n, t2.n]})


def _nodal_system(t1: NodalTriple, t2: NodalTriple) -> Tuple[_System, HomSpace]:
    fld = t1.field
    n = t1.n
    system = _System(fld)
    space = HomSpace(t1, t2, [], 0)
    for c in range(n):
        _allocate_forms(system, space.forms, c, t2.components[c].degrees, t1.components[c].degrees)
    fiber_start = []
    for node in range(n):
        rows, cols = t2.columns[node], t1.columns[node]
        start = system.allocate(rows * cols)
        fiber_start.append(start)
        space.fibers.append((start, rows, cols))

    for c in range(n):
        source, target = t1.components[c], t2.components[c]
        for node, use_infinity in ((c, False), ((c + 1) % n, True)):
            source_matrix = source.infinity if use_infinity else source.zero
            target_matrix = target.infinity if use_infinity else target.zero
            cols1 = t1.columns[node]
            cols2 = t2.columns[node]
            for a in range(target.rank):
                for col in range(cols1):
                    eq = system.new_equation()
                    for b in range(source.rank):
                        entry = space.forms.get((c, a, b))
                        if entry is None:
                            continue
                        start, e = entry
                        system.add(eq, start + (e if use_infinity else 0), source_matrix[b][col])
                    for k in range(cols2):
                        system.add(eq, fiber_start[node] + k * cols1 + col, -target_matrix[a][k])
    space.unknowns = system.unknowns
    return system, space


def _cuspidal_system(t1: CuspidalTriple, t2: CuspidalTriple) -> Tuple[_System, HomSpace]:
    system = _System(t1.field)
    space = HomSpace(t1, t2, [], 0)
    _allocate_forms(system, space.forms, 0, t2.degrees, t1.degrees)
    fiber = system.allocate(t2.columns * t1.columns)
    space.fibers.append((fiber, t2.columns, t1.columns))

    for a in range(t2.rank):
        for col in range(t1.columns):
            constant = system.new_equation()
            linear = system.new_equation()
            for b in range(t1.rank):
                entry = space.forms.get((0, a, b))
                if entry is None:
                    continue
                start, e = entry
                system.add(constant, start, t1.i0[b][col])
                system.add(linear, start, t1.i_eps[b][col])
                if e >= 1:
                    system.add(linear, start + 1, t1.i0[b][col])
            for k in range(t2.columns):
                system.add(constant, fiber + k * t1.columns + col, -t2.i0[a][k])
                system.add(linear, fiber + k * t1.columns + col, -t2.i_eps[a][k])
    space.unknowns = system.unknowns
    return system, space


def hom_space(t1, t2) -> HomSpace:
    """
    Explicit basis of Hom(t1, t2).

    Args:
        t1: Source triple
        t2: Target triple of the same kind, field and curve

    Returns:
        HomSpace holding one solution vector per basis element
    """
    _require_same_kind(t1, t2)
    if isinstance(t1, CuspidalTriple):
        system, space = _cuspidal_system(t1, t2)
    else:
        system, space = _nodal_system(t1, t2)
    space.basis = linalg.kernel(system.matrix())
    logger.debug(f"hom system {system.equations}x{system.unknowns}: dimension {space.dimension}")
    return space


def hom_dim(t1: NodalTriple, t2: NodalTriple) -> int:
    _require_same_kind(t1, t2)
    system, _ = _nodal_system(t1, t2)
    return system.unknowns - linalg.sparse_rank(system.matrix())


def hom_dim_cuspidal(t1: CuspidalTriple, t2: CuspidalTriple) -> int:
    _require_same_kind(t1, t2)
    system, _ = _cuspidal_system(t1, t2)
    return system.unknowns - linalg.sparse_rank(system.matrix())


def end_dim(t) -> int:
    if isinstance(t, CuspidalTriple):
        return hom_dim_cuspidal(t, t)
    return hom_dim(t, t)


@dataclass(frozen=True)
class Cohomology:
    h0: int
    h1: int

    @property
    def euler_characteristic(self) -> int:
        return self.h0 - self.h1

    def to_json(self) -> Dict[str, int]:
        return {"h0": self.h0, "h1": self.h1}


def _section_map(t) -> Tuple[_System, int]:
    """The map H0(F~) + M -> fibers; returns the system and the total fiber dimension."""
    fld = t.field
    system = _System(fld)
    if isinstance(t, CuspidalTriple):
        sections = [system.allocate(e + 1) if e >= 0 else None for e in t.degrees]
        fiber = system.allocate(t.columns)
        for a, e in enumerate(t.degrees):
            constant = system.new_equation()
            linear = system.new_equation()
            if sections[a] is not None:
                system.add(constant, sections[a], fld.one)
                if e >= 1:
                    system.add(linear, sections[a] + 1, fld.one)
            for k in range(t.columns):
                system.add(constant, fiber + k, -t.i0[a][k])
                system.add(linear, fiber + k, -t.i_eps[a][k])
        return system, 2 * t.rank

    n = t.n
    sections = [[system.allocate(e + 1) if e >= 0 else None for e in comp.degrees] for comp in t.components]
    fibers = [system.allocate(t.columns[node]) for node in range(n)]
    for c, comp in enumerate(t.components):
        for node, use_infinity in ((c, False), ((c + 1) % n, True)):
            matrix = comp.infinity if use_infinity else comp.zero
            for a, e in enumerate(comp.degrees):
                eq = system.new_equation()
                if sections[c][a] is not None:
                    system.add(eq, sections[c][a] + (e if use_infinity else 0), fld.one)
                for k in range(t.columns[node]):
                    system.add(eq, fibers[node] + k, -matrix[a][k])
    return system, 2 * sum(comp.rank for comp in t.components)


def _degrees_of(t) -> List[int]:
    if isinstance(t, CuspidalTriple):
        return list(t.degrees)
    return [e for comp in t.components for e in comp.degrees]


def cohomology(t) -> Cohomology:
    """
    Dimensions of H0 and H1 of the sheaf described by a triple.

    H0 is the kernel of H0(F~) + M -> fibers; H1 follows from chi and is
    cross-checked against the long exact sequence.
    """
    system, fiber_dim = _section_map(t)
    rank = linalg.sparse_rank(system.matrix())
    h0 = system.unknowns - rank
    h1 = h0 - euler_characteristic(t)
    h1_sequence = fiber_dim - rank + sum(max(0, -e - 1) for e in _degrees_of(t))
    if h1 != h1_sequence:
        logger.error(f"cohomology mismatch: chi gives h1={h1}, exact sequence gives {h1_sequence}")
        raise SheafCalcError("inconsistent cohomology computation", {"h1": h1, "h1_sequence": h1_sequence})
    return Cohomology(h0, h1)


def _same_shape(t1, t2) -> bool:
    if isinstance(t1, CuspidalTriple):
        return sorted(t1.degrees) == sorted(t2.degrees) and t1.columns == t2.columns
    return (t1.columns == t2.columns and
            all(sorted(a.degrees) == sorted(b.degrees) for a, b in zip(t1.components, t2.components)))


def _combine(fld, blocks_per_basis: List[List[Matrix]], coefficients: List[Any]) -> List[Matrix]:
    combined = []
    for index in range(len(blocks_per_basis[0])):
        template = blocks_per_basis[0][index]
        rows = len(template)
        cols = len(template[0]) if rows else 0
        value = linalg.zeros(fld, rows, cols)
        for coeff, blocks in zip(coefficients, blocks_per_basis):
            if fld.is_zero(coeff):
                continue
            block = blocks[index]
            for i in range(rows):
                for j in range(cols):
                    value[i][j] = value[i][j] + coeff * block[i][j]
        combined.append(value)
    return combined


def _all_invertible(fld, blocks: List[Matrix]) -> bool:
    return all(not fld.is_zero(linalg.determinant(fld, block)) for block in blocks)


def _generic_determinants_vanish(fld, blocks_per_basis: List[List[Matrix]]) -> bool:
    """True when some block of the generic morphism sum x_i phi_i has identically zero determinant."""
    xs = symbols(f"x0:{len(blocks_per_basis)}")
    ring = fld.domain.poly_ring(*xs)
    gens = ring.gens
    for index in range(len(blocks_per_basis[0])):
        template = blocks_per_basis[0][index]
        size = len(template)
        if size == 0:
            continue
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                entry = ring.zero
                for gen, blocks in zip(gens, blocks_per_basis):
                    value = blocks[index][i][j]
                    if not fld.is_zero(value):
                        entry += ring.ring.ground_new(value) * gen
                row.append(entry)
            rows.append(row)
        if DomainMatrix(rows, (size, size), ring).det() == ring.zero:
            return True
    return False


def is_isomorphic(t1, t2, seed: Optional[int] = None) -> bool:
    """
    Decide whether two triples describe isomorphic sheaves.

    Args:
        t1: First triple
        t2: Second triple of the same kind
        seed: Seed for the randomized search (defaults to the configured seed)

    Returns:
        True iff an invertible morphism t1 -> t2 exists

    Raises:
        InconclusiveError: if the Hom space over a finite field is too large to
            enumerate and random sampling found no invertible element
    """
    _require_same_kind(t1, t2)
    if not _same_shape(t1, t2):
        return False
    forward = hom_dimension(t1, t2)
    dims = {forward, hom_dimension(t2, t1), end_dim(t1), end_dim(t2)}
    if len(dims) != 1 or forward == 0:
        return False

    space = hom_space(t1, t2)
    fld = t1.field
    blocks_per_basis = [space.square_blocks(vector) for vector in space.basis]
    dimension = space.dimension

    if fld.size is not None and fld.size ** dimension <= config.EXHAUSTIVE_LIMIT:
        for coefficients in itertools.product(list(fld.elements()), repeat=dimension):
            if all(fld.is_zero(c) for c in coefficients):
                continue
            if _all_invertible(fld, _combine(fld, blocks_per_basis, list(coefficients))):
                return True
        return False

    rng = random.Random(config.DEFAULT_SEED if seed is None else seed)
    for attempt in range(config.ISO_RETRIES):
        coefficients = [fld.random_element(rng) for _ in range(dimension)]
        if _all_invertible(fld, _combine(fld, blocks_per_basis, coefficients)):
            logger.debug(f"invertible morphism found after {attempt + 1} samples")
            return True

    if _generic_determinants_vanish(fld, blocks_per_basis):
        return False
    if fld.size is None:
        # A nonzero polynomial over an infinite field has a non-root
        return True
    raise InconclusiveError("no invertible morphism found by sampling",
                            {"hom_dim": dimension, "field": fld.name, "retries": config.ISO_RETRIES})


def hom_dimension(t1, t2) -> int:
    if isinstance(t1, CuspidalTriple):
        return hom_dim_cuspidal(t1, t2)
    return hom_dim(t1, t2)


def fingerprint(probes: List, t) -> Tuple[int, ...]:
    """Vector of dim Hom(probe, t) over a probe family."""
    return tuple(hom_dimension(probe, t) for probe in probes)
