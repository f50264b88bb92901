"""Exact dense linear algebra over prime fields F_p.

Everything above this module (algebras, Cartier structures, complexes)
reduces to the kernels here: row reduction, null spaces, linear solves.
All arithmetic is integer arithmetic mod p; there is no floating point
anywhere.  Pivoting is deterministic (first nonzero entry in column
order) so results are reproducible bit for bit.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

MAX_PRIME = 251


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The field F_p for a small prime p (p <= 251)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int):
            raise ValueError(f"modulus must be an int, got {type(p).__name__}")
        if p > MAX_PRIME:
            raise ValueError(f"modulus {p} exceeds supported bound {MAX_PRIME}")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def inverse(self, a: int) -> int:
        a = a % self.p
        if a == 0:
            raise ZeroDivisionError("0 is not invertible")
        return pow(a, -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"F{self.p}"


class PrimeFieldMatrix:
    """Immutable dense matrix over a prime field.

    Entries are stored as canonical residues in [0, p).  Zero-row and
    zero-column shapes are fully supported; empty matrices show up as
    soon as kernels and cokernels of honest maps are taken.
    """

    __slots__ = ("field", "array")

    def __init__(self, field: PrimeField, entries):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix entries must be 2-dimensional, got shape {arr.shape}")
        arr = np.mod(arr, field.p)
        arr.flags.writeable = False
        self.field = field
        self.array = arr

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "PrimeFieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "PrimeFieldMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]]) -> "PrimeFieldMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        arr = np.array(rows, dtype=np.int64).reshape(n_rows, n_cols)
        return cls(field, arr)

    @classmethod
    def column(cls, field: PrimeField, entries: Sequence[int]) -> "PrimeFieldMatrix":
        return cls(field, np.array(entries, dtype=np.int64).reshape(-1, 1))

    # -- shape ----------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def is_zero(self) -> bool:
        return not self.array.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic -----------------------------------------------------------

    def _check_same_field(self, other: "PrimeFieldMatrix") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check_same_field(other)
        if self.array.shape != other.array.shape:
            raise ValueError(f"shape mismatch for add: {self.array.shape} vs {other.array.shape}")
        return PrimeFieldMatrix(self.field, self.array + other.array)

    def __sub__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check_same_field(other)
        if self.array.shape != other.array.shape:
            raise ValueError(f"shape mismatch for sub: {self.array.shape} vs {other.array.shape}")
        return PrimeFieldMatrix(self.field, self.array - other.array)

    def __neg__(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, -self.array)

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch for multiply: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        return PrimeFieldMatrix(self.field, self.array @ other.array)

    def scale(self, c: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array * (c % self.field.p))

    def transpose(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array.T)

    def kronecker(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check_same_field(other)
        return PrimeFieldMatrix(self.field, np.kron(self.array, other.array))

    def direct_sum(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check_same_field(other)
        out = np.zeros((self.rows + other.rows, self.cols + other.cols), dtype=np.int64)
        out[: self.rows, : self.cols] = self.array
        out[self.rows :, self.cols :] = other.array
        return PrimeFieldMatrix(self.field, out)

    def power(self, n: int) -> "PrimeFieldMatrix":
        if not self.is_square():
            raise ValueError("matrix power needs a square matrix")
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = PrimeFieldMatrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    # -- slicing --------------------------------------------------------------

    def col(self, j: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array[:, j : j + 1])

    def take_columns(self, indices: Sequence[int]) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array[:, list(indices)].reshape(self.rows, len(indices)))

    def take_rows(self, indices: Sequence[int]) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array[list(indices), :].reshape(len(indices), self.cols))

    def flatten(self) -> "PrimeFieldMatrix":
        """Row-major vectorization as a column matrix."""
        return PrimeFieldMatrix(self.field, self.array.reshape(-1, 1))

    def reshape(self, rows: int, cols: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.field, self.array.reshape(rows, cols))

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimeFieldMatrix)
            and other.field == self.field
            and other.array.shape == self.array.shape
            and bool(np.array_equal(other.array, self.array))
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.array.shape, self.array.tobytes()))

    def __repr__(self) -> str:
        return f"PrimeFieldMatrix({self.field}, {self.array.tolist()})"


def hstack(mats: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix:
    if not mats:
        raise ValueError("hstack needs at least one matrix")
    field = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.field != field or m.rows != rows:
            raise ValueError("hstack needs matching fields and row counts")
    return PrimeFieldMatrix(field, np.concatenate([m.array for m in mats], axis=1))


def vstack(mats: Sequence[PrimeFieldMatrix]) -> PrimeFieldMatrix:
    if not mats:
        raise ValueError("vstack needs at least one matrix")
    field = mats[0].field
    cols = mats[0].cols
    for m in mats:
        if m.field != field or m.cols != cols:
            raise ValueError("vstack needs matching fields and column counts")
    return PrimeFieldMatrix(field, np.concatenate([m.array for m in mats], axis=0))


def rref(m: PrimeFieldMatrix) -> tuple[PrimeFieldMatrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns, and rank.

    Pivot choice is the first nonzero entry in column order, so the
    output is canonical for a given input.
    """
    p = m.field.p
    a = m.array.copy()
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        pr = r + int(nonzero[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        other = a[:, c].copy()
        other[r] = 0
        a = (a - np.outer(other, a[r])) % p
        pivots.append(c)
        r += 1
    return PrimeFieldMatrix(m.field, a), tuple(pivots), len(pivots)


def rank(m: PrimeFieldMatrix) -> int:
    return rref(m)[2]


def kernel_basis(m: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Columns form a basis of the null space {x : m x = 0}."""
    reduced, pivots, rk = rref(m)
    p = m.field.p
    n_cols = m.cols
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = np.zeros((n_cols, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        basis[f, idx] = 1
        for row, pc in enumerate(pivots):
            basis[pc, idx] = (-int(reduced.array[row, f])) % p
    return PrimeFieldMatrix(m.field, basis)


def solve(a: PrimeFieldMatrix, b: PrimeFieldMatrix) -> Optional[PrimeFieldMatrix]:
    """Solve a x = b exactly; None when the system is inconsistent.

    b may have several columns (one solve per column).  Free variables
    are set to zero, so for a fixed consistent a the solution depends
    linearly on b.
    """
    a._check_same_field(b)
    if a.rows != b.rows:
        raise ValueError(f"row mismatch in solve: {a.rows} vs {b.rows}")
    augmented = hstack([a, b])
    reduced, pivots, _ = rref(augmented)
    if any(pc >= a.cols for pc in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc, :] = reduced.array[row, a.cols :]
    return PrimeFieldMatrix(a.field, x)


def inverse(m: PrimeFieldMatrix) -> Optional[PrimeFieldMatrix]:
    """Two-sided inverse of a square matrix, or None if singular."""
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    return solve(m, PrimeFieldMatrix.identity(m.field, m.rows))


def is_invertible(m: PrimeFieldMatrix) -> bool:
    return m.is_square() and rank(m) == m.rows


def column_space_basis(m: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Basis of the column span: the pivot columns of m, in order."""
    _, pivots, _ = rref(m)
    return m.take_columns(pivots)


def in_column_span(basis: PrimeFieldMatrix, vectors: PrimeFieldMatrix) -> bool:
    return solve(basis, vectors) is not None


def same_column_span(a: PrimeFieldMatrix, b: PrimeFieldMatrix) -> bool:
    ra = rank(a)
    rb = rank(b)
    return ra == rb and rank(hstack([a, b])) == ra


def extend_to_basis(cols: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Complete linearly independent columns to a basis of the ambient space.

    Completion columns are taken greedily from the standard basis, so
    the result is deterministic.
    """
    n = cols.rows
    candidate = hstack([cols, PrimeFieldMatrix.identity(cols.field, n)])
    _, pivots, rk = rref(candidate)
    if rk != n:
        raise ValueError("extend_to_basis: ambient space not spanned")
    if any(pc >= cols.cols for pc in pivots[: cols.cols]) or len(
        [pc for pc in pivots if pc < cols.cols]
    ) != cols.cols:
        raise ValueError("extend_to_basis: given columns are dependent")
    return candidate.take_columns(pivots)
