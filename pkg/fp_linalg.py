"""
Dense linear algebra over GF(p).

Matrices are numpy int64 arrays with entries in [0, p). Row reduction is
plain Gaussian elimination with modular inverses; every routine returns
canonical (reduced row-echelon) output so results are reproducible.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np


def as_fp(values, p: int) -> np.ndarray:
    """Copy ``values`` into an int64 array reduced mod p."""
    return np.asarray(values, dtype=np.int64) % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def rref(matrix, p: int) -> Tuple[np.ndarray, List[int]]:
    """Row-reduce a matrix over GF(p).

    Args:
        matrix: (m x n) array-like.
        p: Prime modulus.

    Returns:
        (R, pivot_cols): R is the reduced row-echelon form, pivot_cols the
        pivot column of each nonzero row (length = rank).
    """
    R = as_fp(matrix, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-dimensional array")
    m, n = R.shape
    pivots: List[int] = []
    row = 0

    for col in range(n):
        if row == m:
            break
        nonzero = np.nonzero(R[row:, col])[0]
        if nonzero.size == 0:
            continue
        found = row + int(nonzero[0])
        if found != row:
            R[[row, found]] = R[[found, row]]

        R[row] = (R[row] * pow(int(R[row, col]), -1, p)) % p
        factors = R[:, col].copy()
        factors[row] = 0
        R = (R - np.outer(factors, R[row])) % p

        pivots.append(col)
        row += 1

    return R, pivots


def rank(matrix, p: int) -> int:
    arr = np.asarray(matrix)
    if arr.size == 0:
        return 0
    return len(rref(arr, p)[1])


def row_space(vectors, p: int, width: Optional[int] = None) -> np.ndarray:
    """Canonical basis (RREF rows) of the span of the given row vectors."""
    arr = np.asarray(vectors, dtype=np.int64)
    if arr.size == 0:
        n = width if width is not None else (arr.shape[-1] if arr.ndim == 2 else 0)
        return np.zeros((0, n), dtype=np.int64)
    R, pivots = rref(arr, p)
    return R[: len(pivots)]


def column_space(matrix, p: int) -> np.ndarray:
    """Basis of the column space, returned as columns (n x r)."""
    arr = np.asarray(matrix, dtype=np.int64)
    return row_space(arr.T, p, width=arr.shape[0]).T


def nullspace(matrix, p: int) -> np.ndarray:
    """Reduced row-echelon basis of {x : M x = 0}, one basis vector per row."""
    arr = np.asarray(matrix, dtype=np.int64)
    n = arr.shape[1]
    if arr.shape[0] == 0:
        return identity(n)
    R, pivots = rref(arr, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return row_space(basis, p, width=n)


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """Solve A X = B over GF(p).

    B may be a vector or a matrix of right-hand sides. Returns one solution
    (free variables set to zero) or None when the system is inconsistent.
    """
    A = as_fp(a, p)
    B = as_fp(b, p)
    vector = B.ndim == 1
    if vector:
        B = B.reshape(-1, 1)
    m, n = A.shape
    k = B.shape[1]
    if m == 0:
        X = np.zeros((n, k), dtype=np.int64)
        return X[:, 0] if vector else X

    R, pivots = rref(np.hstack([A, B]), p)
    if any(pc >= n for pc in pivots):
        return None
    X = np.zeros((n, k), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, n:]
    return X[:, 0] if vector else X


def inverse(a, p: int) -> np.ndarray:
    A = as_fp(a, p)
    n = A.shape[0]
    if A.shape != (n, n) or rank(A, p) != n:
        raise ValueError("matrix is not invertible over GF(%d)" % p)
    return solve(A, identity(n), p)


def in_span(basis_rows, vector, p: int) -> bool:
    """True iff ``vector`` lies in the span of the given rows."""
    rows = np.asarray(basis_rows, dtype=np.int64)
    v = as_fp(vector, p)
    if rows.size == 0:
        return not v.any()
    return rank(np.vstack([rows, v]), p) == rank(rows, p)


def same_span(rows_a, rows_b, p: int, width: int) -> bool:
    return np.array_equal(row_space(rows_a, p, width), row_space(rows_b, p, width))


@dataclass(frozen=True)
class FpMatrix:
    """A matrix over GF(p) with entries kept reduced"""

    p: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", as_fp(self.entries, self.p))
        self.entries.setflags(write=False)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, matmul(self.entries, other.entries, self.p))

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, self.entries - other.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.entries, identity(self.rows))

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def kernel(self) -> np.ndarray:
        return nullspace(self.entries, self.p)

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()
