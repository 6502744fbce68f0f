"""Thin helpers over sympy's DomainMatrix for the exact kernels used by the oracle."""
from typing import Any, Dict, List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .fields import BaseField

Matrix = List[List[Any]]


def zeros(field: BaseField, rows: int, cols: int) -> Matrix:
    return [[field.zero] * cols for _ in range(rows)]


def identity(field: BaseField, size: int) -> Matrix:
    result = zeros(field, size, size)
    for i in range(size):
        result[i][i] = field.one
    return result


def to_domain_matrix(field: BaseField, rows: Sequence[Sequence[Any]], ncols: int = None) -> DomainMatrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([list(row) for row in rows], (len(rows), ncols), field.domain)


def sparse_matrix(field: BaseField, nrows: int, ncols: int, entries: Dict[Tuple[int, int], Any]) -> DomainMatrix:
    """Sparse DomainMatrix from {(row, col): value}; zero values are dropped."""
    data: Dict[int, Dict[int, Any]] = {}
    for (i, j), value in entries.items():
        if not field.is_zero(value):
            data.setdefault(i, {})[j] = value
    return DomainMatrix(data, (nrows, ncols), field.domain)


def rank(field: BaseField, rows: Sequence[Sequence[Any]], ncols: int = None) -> int:
    if not rows:
        return 0
    matrix = to_domain_matrix(field, rows, ncols)
    if matrix.shape[1] == 0:
        return 0
    return matrix.rank()


def sparse_rank(matrix: DomainMatrix) -> int:
    if 0 in matrix.shape:
        return 0
    return matrix.rank()


def kernel(matrix: DomainMatrix) -> Matrix:
    """Basis of the right kernel {x : A x = 0}, one basis vector per row."""
    nrows, ncols = matrix.shape
    if ncols == 0:
        return []
    if nrows == 0:
        domain = matrix.domain
        return [[domain.one if i == j else domain.zero for j in range(ncols)] for i in range(ncols)]
    return matrix.to_field().nullspace().to_list()


def determinant(field: BaseField, rows: Sequence[Sequence[Any]]) -> Any:
    if not rows:
        return field.one
    return to_domain_matrix(field, rows).det()


def inverse(field: BaseField, rows: Sequence[Sequence[Any]]) -> Matrix:
    if not rows:
        return []
    return to_domain_matrix(field, rows).inv().to_list()


def matmul(field: BaseField, a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]], inner: int = None) -> Matrix:
    """Plain product; ``inner`` is needed only when ``a`` has no rows or columns."""
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    result = zeros(field, len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            value = row[k]
            if field.is_zero(value):
                continue
            b_row = b[k]
            target = result[i]
            for j in range(cols):
                target[j] = target[j] + value * b_row[j]
    return result


def transpose(rows: Sequence[Sequence[Any]], ncols: int = None) -> Matrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return [[row[j] for row in rows] for j in range(ncols)]


def kronecker(field: BaseField, a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    rows_b = len(b)
    cols_b = len(b[0]) if b else 0
    cols_a = len(a[0]) if a else 0
    result = zeros(field, len(a) * rows_b, cols_a * cols_b)
    for i, row_a in enumerate(a):
        for j, value in enumerate(row_a):
            if field.is_zero(value):
                continue
            for k in range(rows_b):
                for l in range(cols_b):
                    result[i * rows_b + k][j * cols_b + l] = value * b[k][l]
    return result


def block_diagonal(field: BaseField, blocks: Sequence[Tuple[Matrix, int, int]]) -> Matrix:
    """Block diagonal of (matrix, rows, cols) triples; explicit shapes allow empty blocks."""
    total_rows = sum(r for _, r, _ in blocks)
    total_cols = sum(c for _, _, c in blocks)
    result = zeros(field, total_rows, total_cols)
    row_offset = col_offset = 0
    for block, r, c in blocks:
        for i in range(r):
            for j in range(c):
                result[row_offset + i][col_offset + j] = block[i][j]
        row_offset += r
        col_offset += c
    return result


def companion(field: BaseField, coefficients: Sequence[Any]) -> Matrix:
    """Companion matrix of the monic polynomial with the given low-to-high coefficients."""
    size = len(coefficients) - 1
    result = zeros(field, size, size)
    for i in range(1, size):
        result[i][i - 1] = field.one
    for i in range(size):
        result[i][size - 1] = -coefficients[i]
    return result


def jordan_block(field: BaseField, eigenvalue: Any, size: int) -> Matrix:
    result = zeros(field, size, size)
    for i in range(size):
        result[i][i] = eigenvalue
        if i + 1 < size:
            result[i][i + 1] = field.one
    return result
