"""Exact integer linear algebra.

Matrices act on column vectors and lattices are column spans.  All entries
are Python ints, so there is no overflow; the price is speed, which is fine
at the sizes this package works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        ncols = len(columns)
        return cls(nrows, ncols, (columns[j][i] for i in range(nrows) for j in range(ncols)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(n, n, (entries[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def column_vector(cls, v: Sequence[int]) -> "IntMatrix":
        return cls(len(v), 1, v)

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self._data[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list[int]:
        return list(self._data[j::self.cols]) if self.cols else []

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def to_columns(self) -> list[list[int]]:
        if self.cols == 0:
            return []
        return [list(self._data[j::self.cols]) for j in range(self.cols)]

    def entries(self) -> tuple[int, ...]:
        return self._data

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        _check_same_shape(self, other)
        return IntMatrix(self.rows, self.cols, (a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        _check_same_shape(self, other)
        return IntMatrix(self.rows, self.cols, (a - b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (-a for a in self._data))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (c * a for a in self._data))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.to_columns()
        out = []
        for i in range(self.rows):
            r = self._data[i * self.cols:(i + 1) * self.cols]
            nz = [(k, a) for k, a in enumerate(r) if a]
            for c in ocols:
                out.append(sum(a * c[k] for k, a in nz))
        return IntMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence[int]) -> list[int]:
        """Matrix times a column vector, returned as a list."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.cols} columns")
        nzv = [(k, x) for k, x in enumerate(v) if x]
        c = self.cols
        return [sum(self._data[i * c + k] * x for k, x in nzv) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         (self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def select_columns(self, cols: Sequence[int]) -> "IntMatrix":
        return self.submatrix(range(self.rows), cols)

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        return hstack(self, *others)

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        return vstack(self, *others)


def _check_same_shape(a: IntMatrix, b: IntMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def hstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    rows = mats[0].rows
    cols = []
    for m in mats:
        if m.rows != rows:
            raise ValueError("row count mismatch in hstack")
        cols.extend(m.to_columns())
    return IntMatrix.from_columns(cols, rows)


def vstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("nothing to stack")
    ncols = mats[0].cols
    data: list[int] = []
    rows = 0
    for m in mats:
        if m.cols != ncols:
            raise ValueError("column count mismatch in vstack")
        data.extend(m.entries())
        rows += m.rows
    return IntMatrix(rows, ncols, data)


def block_diag(*mats: IntMatrix) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return IntMatrix(rows, cols, (x for r in out for x in r))


# ---------------------------------------------------------------------------
# Hermite form


@dataclass(frozen=True)
class HermiteBasis:
    """Canonical basis of a sublattice of Z^N, one basis vector per column.

    Pivot rows strictly increase from left to right; a column is zero above
    its pivot, the pivot is positive, and the entries of earlier columns in a
    pivot row lie in ``[0, pivot)``.
    """

    basis: IntMatrix
    pivots: tuple[int, ...]

    @property
    def ambient(self) -> int:
        return self.basis.rows

    @property
    def rank(self) -> int:
        return self.basis.cols

    def reduce(self, v: Sequence[int]) -> list[int]:
        """Canonical representative of ``v`` modulo the lattice."""
        v = list(v)
        cols = _columns(self.basis)
        for col, p in zip(cols, self.pivots):
            q = v[p] // col[p]
            if q:
                for i in range(p, len(v)):
                    v[i] -= q * col[i]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: "HermiteBasis | IntMatrix") -> bool:
        m = other.basis if isinstance(other, HermiteBasis) else other
        return all(self.contains(c) for c in m.to_columns())

    def coordinates(self, v: Sequence[int]) -> Optional[list[int]]:
        """Coefficients of ``v`` in this basis, or None if ``v`` is outside."""
        v = list(v)
        cols = _columns(self.basis)
        coeffs = []
        for col, p in zip(cols, self.pivots):
            q, r = divmod(v[p], col[p])
            if r:
                return None
            coeffs.append(q)
            if q:
                for i in range(p, len(v)):
                    v[i] -= q * col[i]
        if any(v):
            return None
        return coeffs


@lru_cache(maxsize=4096)
def _columns(m: IntMatrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(c) for c in m.to_columns())


def _echelon(M: IntMatrix):
    """Column-reduce ``M`` to Hermite form, tracking the transform.

    Returns ``(E, T, pivots)`` as column lists with ``E = M T`` and ``T``
    unimodular.  The first ``len(pivots)`` columns of ``E`` are the Hermite
    basis of the column lattice; the remaining columns of ``E`` are zero and
    the matching columns of ``T`` span the kernel.
    """
    m, n = M.rows, M.cols
    E = M.to_columns()
    T = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivots: list[int] = []
    r = 0
    for i in range(m):
        if r == n:
            break
        while True:
            nz = [j for j in range(r, n) if E[j][i]]
            if not nz:
                break
            p = min(nz, key=lambda j: (abs(E[j][i]), j))
            if p != r:
                E[p], E[r] = E[r], E[p]
                T[p], T[r] = T[r], T[p]
            piv = E[r][i]
            clean = True
            for j in range(r + 1, n):
                a = E[j][i]
                if a:
                    q = a // piv
                    Ej, Er = E[j], E[r]
                    for k in range(i, m):
                        Ej[k] -= q * Er[k]
                    Tj, Tr = T[j], T[r]
                    for k in range(n):
                        Tj[k] -= q * Tr[k]
                    if Ej[i]:
                        clean = False
            if clean:
                break
        if r < n and E[r][i]:
            if E[r][i] < 0:
                E[r] = [-x for x in E[r]]
                T[r] = [-x for x in T[r]]
            d = E[r][i]
            # keep earlier pivot columns reduced in this row
            for j in range(r):
                q = E[j][i] // d
                if q:
                    Ej, Er = E[j], E[r]
                    for k in range(i, m):
                        Ej[k] -= q * Er[k]
                    Tj, Tr = T[j], T[r]
                    for k in range(n):
                        Tj[k] -= q * Tr[k]
            pivots.append(i)
            r += 1
    return E, T, pivots


@lru_cache(maxsize=4096)
def _echelon_cached(M: IntMatrix):
    E, T, pivots = _echelon(M)
    return tuple(map(tuple, E)), tuple(map(tuple, T)), tuple(pivots)


def hnf(M: IntMatrix) -> HermiteBasis:
    """Hermite basis of the column lattice of ``M``."""
    E, _, pivots = _echelon_cached(M)
    r = len(pivots)
    return HermiteBasis(IntMatrix.from_columns(E[:r], M.rows), pivots)


def rank(M: IntMatrix) -> int:
    return len(_echelon_cached(M)[2])


def kernel_basis(M: IntMatrix) -> HermiteBasis:
    """Hermite basis of ``{x : M x = 0}`` inside Z^cols."""
    _, T, pivots = _echelon_cached(M)
    r = len(pivots)
    return hnf(IntMatrix.from_columns(T[r:], M.cols))


def solve(M: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """Some integer ``x`` with ``M x = b``, or None.

    The answer is reduced modulo the Hermite basis of the kernel, so it does
    not depend on how ``M`` happened to be reduced.
    """
    b = list(b)
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    E, T, pivots = _echelon_cached(M)
    r = len(pivots)
    y = [0] * M.cols
    resid = b[:]
    for k, p in enumerate(pivots):
        q, rem = divmod(resid[p], E[k][p])
        if rem:
            return None
        y[k] = q
        if q:
            col = E[k]
            for i in range(p, M.rows):
                resid[i] -= q * col[i]
    if any(resid):
        return None
    x = [0] * M.cols
    for k in range(r):
        if y[k]:
            tk = T[k]
            for i in range(M.cols):
                x[i] += y[k] * tk[i]
    if r < M.cols:
        x = kernel_basis(M).reduce(x)
    return x


def image_intersection(M1: IntMatrix, M2: IntMatrix) -> HermiteBasis:
    """Hermite basis of ``colspan(M1) ∩ colspan(M2)``."""
    if M1.rows != M2.rows:
        raise ValueError(f"ambient mismatch: {M1.rows} vs {M2.rows}")
    K = kernel_basis(hstack(M1, -M2))
    top = K.basis.submatrix(range(M1.cols), range(K.basis.cols))
    return hnf(M1 @ top)


def same_lattice(M1: "IntMatrix | HermiteBasis", M2: "IntMatrix | HermiteBasis") -> bool:
    h1 = M1 if isinstance(M1, HermiteBasis) else hnf(M1)
    h2 = M2 if isinstance(M2, HermiteBasis) else hnf(M2)
    return h1.basis == h2.basis


def kronecker(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    rows = A.rows * B.rows
    cols = A.cols * B.cols
    out = []
    for i in range(A.rows):
        for k in range(B.rows):
            for j in range(A.cols):
                a = A[i, j]
                for l in range(B.cols):
                    out.append(a * B[k, l])
    return IntMatrix(rows, cols, out)


# ---------------------------------------------------------------------------
# Smith form


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith form ``D = U M V`` by elementary operations.

    Pivots are chosen by minimal absolute value; a pivot that fails to divide
    the rest of the active block pulls the offending row into its own row and
    the elimination restarts.
    """
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        changed = True
            if changed:
                # move the smallest leftover in row/column t onto the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, bi, bj = min(cands)
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return SmithDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(A, n), IntMatrix.from_rows(V, n)
    )


def _monomial_entries(M: IntMatrix) -> Optional[list[int]]:
    """Nonzero entries if ``M`` has at most one per row and per column."""
    seen_rows = set()
    out = []
    for j, col in enumerate(_columns(M)):
        nz = [i for i, a in enumerate(col) if a]
        if len(nz) > 1 or (nz and nz[0] in seen_rows):
            return None
        if nz:
            seen_rows.add(nz[0])
            out.append(abs(col[nz[0]]))
    return out


@lru_cache(maxsize=None)
def _factor(d: int) -> tuple[tuple[int, int], ...]:
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if d > 1:
        out.append((d, 1))
    return tuple(out)


def _invariants_of_diagonal(entries: Sequence[int]) -> list[int]:
    """Smith diagonal of ``diag(entries)`` by sorting prime-power exponents."""
    k = len(entries)
    exps: dict[int, list[int]] = {}
    for d in entries:
        for p, e in _factor(d):
            exps.setdefault(p, []).append(e)
    out = [1] * k
    for p, es in exps.items():
        es.sort()
        # largest exponents go to the last invariant factors
        for i, e in enumerate(es):
            out[k - len(es) + i] *= p ** e
    return out


def invariant_diagonal(M: IntMatrix) -> list[int]:
    """Nonzero Smith diagonal entries of ``M``."""
    mono = _monomial_entries(M)
    if mono is not None:
        return _invariants_of_diagonal(mono)
    return [d for d in snf(M).diagonal() if d]


def determinant(M: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    if not M.is_square():
        raise ValueError("determinant of non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Integer inverse of a square matrix with determinant ±1."""
    if not M.is_square():
        raise ValueError("inverse of non-square matrix")
    n = M.rows
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve(M, e)
        if x is None:
            raise ValueError("matrix is not unimodular")
        cols.append(x)
    return IntMatrix.from_columns(cols, n)
