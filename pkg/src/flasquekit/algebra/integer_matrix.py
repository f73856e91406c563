"""Dense integer matrices: exact products, Smith decompositions, determinants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from flasquekit.algebra.sparse import SparseVector
from flasquekit.utils.errors import ConstructionError, InvalidInputError

_INT64_SAFE = 2**62


def as_int_matrix(data, shape: tuple[int, int] | None = None) -> np.ndarray:
    """A 2-D integer array: int64 when every entry fits, object dtype otherwise."""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.zeros(shape, dtype=np.int64)
    arr = np.array(data, dtype=object)
    if arr.ndim != 2:
        if shape is None:
            raise InvalidInputError(f"expected a 2-D integer matrix, got {arr.ndim} dimensions")
        arr = arr.reshape(shape)
    if shape is not None and arr.shape != shape:
        raise InvalidInputError(f"matrix has shape {arr.shape}, expected {shape}")
    flat = arr.ravel()
    for x in flat:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            raise InvalidInputError(f"matrix entries must be integers, got {x!r}")
    if flat.size == 0 or max(abs(int(x)) for x in flat) < _INT64_SAFE:
        return arr.astype(np.int64)
    return np.vectorize(int, otypes=[object])(arr)


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; falls back to Python integers when int64 could overflow."""
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"cannot multiply {a.shape} by {b.shape}")
    if a.dtype == np.int64 and b.dtype == np.int64:
        if _max_abs(a) * _max_abs(b) * max(1, a.shape[1]) < _INT64_SAFE:
            return a @ b
    product = a.astype(object) @ b.astype(object)
    return as_int_matrix(product, product.shape)


def to_domain_matrix(matrix: np.ndarray) -> DomainMatrix:
    rows, cols = matrix.shape
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix.tolist()], (rows, cols), ZZ)


def from_domain_matrix(dm: DomainMatrix) -> np.ndarray:
    rows, cols = dm.shape
    return as_int_matrix([[int(x) for x in row] for row in dm.to_list()], (rows, cols))


@dataclass(frozen=True)
class SmithDecomposition:
    """``left · A · right == D`` with ``D`` diagonal, nonzero entries first as a divisibility chain."""

    diagonal: tuple[int, ...]
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_decomposition(matrix: np.ndarray) -> SmithDecomposition:
    """Smith decomposition of an m×n matrix.

    ``left`` is m×m and ``right`` is n×n, both unimodular; diagonal entries
    are made non-negative by flipping rows of ``left``. The result is
    checked against the input before it is returned.
    """
    m, n = matrix.shape
    if m == 0 or n == 0:
        return SmithDecomposition((), np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64))
    smith, s, t = smith_normal_decomp(to_domain_matrix(matrix))
    d = from_domain_matrix(smith).astype(object)
    left = from_domain_matrix(s).astype(object)
    right = from_domain_matrix(t).astype(object)
    diagonal = [int(d[i, i]) for i in range(min(m, n))]
    for i, value in enumerate(diagonal):
        if value < 0:
            diagonal[i] = -value
            left[i, :] = -left[i, :]
    nonzero = [x for x in diagonal if x]
    if diagonal[: len(nonzero)] != nonzero or any(b % a for a, b in zip(nonzero, nonzero[1:])):
        raise ConstructionError(f"Smith diagonal {diagonal} is not a divisibility chain")
    result = SmithDecomposition(tuple(diagonal), as_int_matrix(left, (m, m)), as_int_matrix(right, (n, n)))
    check = int_matmul(int_matmul(result.left, matrix), result.right)
    expected = np.zeros((m, n), dtype=object)
    for i, value in enumerate(result.diagonal):
        expected[i, i] = value
    if not np.array_equal(check.astype(object), expected):
        raise ConstructionError("Smith decomposition does not reproduce the diagonal form")
    return result


def elementary_divisors(matrix: np.ndarray) -> tuple[int, ...]:
    """Nonzero invariant factors of the matrix."""
    if matrix.size == 0:
        return ()
    return tuple(d for d in smith_decomposition(matrix).diagonal if d)


def determinant(matrix: np.ndarray) -> int:
    rows, cols = matrix.shape
    if rows != cols:
        raise InvalidInputError(f"determinant of a non-square {rows}x{cols} matrix")
    if rows == 0:
        return 1
    return int(to_domain_matrix(matrix).det())


def unimodular_inverse(matrix: np.ndarray) -> np.ndarray:
    rows, cols = matrix.shape
    if rows != cols:
        raise InvalidInputError("only square matrices are invertible")
    if rows == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if abs(determinant(matrix)) != 1:
        raise InvalidInputError("matrix is not unimodular")
    # A · num == den · I, with den not necessarily ±1.
    numerator, denominator = to_domain_matrix(matrix).inv_den()
    den = int(denominator)
    entries = from_domain_matrix(numerator).astype(object)
    if any(int(x) % den for x in entries.ravel()):
        raise ConstructionError("inverse of a unimodular matrix is not integral")
    return as_int_matrix(entries // den, (rows, cols))


def sparse_columns(matrix: np.ndarray) -> list[SparseVector]:
    columns: list[SparseVector] = [{} for _ in range(matrix.shape[1])]
    for i, j in zip(*np.nonzero(matrix)):
        columns[int(j)][int(i)] = int(matrix[i, j])
    return columns


def matrix_from_rows(rows: Sequence[SparseVector], width: int) -> np.ndarray:
    dense = [[row.get(j, 0) for j in range(width)] for row in rows]
    return as_int_matrix(dense, (len(rows), width))


__all__ = [
    "SmithDecomposition",
    "as_int_matrix",
    "determinant",
    "elementary_divisors",
    "from_domain_matrix",
    "int_matmul",
    "matrix_from_rows",
    "smith_decomposition",
    "sparse_columns",
    "to_domain_matrix",
    "unimodular_inverse",
]
