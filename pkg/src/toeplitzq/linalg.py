"""Exact sparse linear algebra over Q(i).

Matrices are stored column-wise as dicts ``row -> Scalar``; vectors are dicts
``index -> Scalar``. Zero entries are never stored.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .scalar import ONE, ZERO, Scalar

Vector = dict  # index -> Scalar


def add_into(acc: dict, key, c: Scalar) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def axpy(acc: dict, c: Scalar, x: Mapping) -> None:
    """acc += c * x, in place."""
    for k, v in x.items():
        add_into(acc, k, c * v)


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[Mapping[int, Scalar]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            self.cols = [{} for _ in range(ncols)]
        else:
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
            self.cols = [{r: v for r, v in c.items() if v} for c in cols]

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, [{j: ONE} for j in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = Scalar.coerce(v)
                if v:
                    cols[j][i] = v
        return cls(nrows, ncols, cols)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.cols[j].get(i, ZERO)

    def dense(self) -> list[list[Scalar]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def apply(self, x: Mapping[int, Scalar]) -> Vector:
        acc: Vector = {}
        for j, c in x.items():
            axpy(acc, c, self.cols[j])
        return acc

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            axpy(c, ONE, b)
            cols.append(c)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(-ONE)

    def scale(self, c: Scalar) -> "SparseMatrix":
        c = Scalar.coerce(c)
        if not c:
            return SparseMatrix(self.nrows, self.ncols)
        return SparseMatrix(self.nrows, self.ncols, [{i: c * v for i, v in col.items()} for col in self.cols])

    def conj_transpose(self) -> "SparseMatrix":
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v.conj()
        return SparseMatrix(self.ncols, self.nrows, cols)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        """Submatrix on the given row and column index lists (re-indexed from 0)."""
        where = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({where[i]: v for i, v in self.cols[j].items() if i in where})
        return SparseMatrix(len(rows), len(cols), out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.cols == other.cols

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.cols))})"


class RowEchelon:
    """Incrementally maintained reduced row-echelon basis of a row space.

    ``order`` ranks column indices; the pivot of a row is its nonzero column
    of highest rank, and every stored row has pivot coefficient 1 and no
    entries in other rows' pivot columns.
    """

    def __init__(self, order: Callable | None = None):
        self.order = order if order is not None else (lambda k: k)
        self.rows: dict = {}  # pivot -> row

    def __len__(self) -> int:
        return len(self.rows)

    def pivot_of(self, row: Mapping):
        return max(row, key=self.order)

    def reduce(self, vec: Mapping) -> Vector:
        """Remainder of ``vec`` after eliminating every stored pivot."""
        r = dict(vec)
        # stored rows carry no other pivots, so one pass suffices
        for p in [k for k in r if k in self.rows]:
            c = r.get(p)
            if c:
                axpy(r, -c, self.rows[p])
        return r

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; returns False if it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = self.pivot_of(r)
        inv = r[p].inverse()
        r = {k: v * inv for k, v in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                axpy(row, -c, r)
        self.rows[p] = r
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[Vector]:
        """Rows sorted by descending pivot rank."""
        return [self.rows[p] for p in sorted(self.rows, key=self.order, reverse=True)]


def rank(vectors: Iterable[Mapping]) -> int:
    ech = RowEchelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def nullspace(rows: Iterable[Mapping[int, Scalar]], ncols: int) -> list[Vector]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column.

    Gauss-Jordan over Q(i) with leftmost pivots; each basis vector has a 1
    in its free column and zeros in the other free columns.
    """
    ech = RowEchelon(order=lambda k: -k)
    for row in rows:
        if row:
            ech.add(row)
    pivots = set(ech.rows)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: ONE}
        for p, row in ech.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def span_intersection(a: Sequence[Mapping], b_rows: Iterable[Mapping]) -> list[Vector]:
    """Vectors in span(a) annihilated by every row in ``b_rows``."""
    a = list(a)
    if not a:
        return []
    images = []
    for row in b_rows:
        img = {}
        for k, v in enumerate(a):
            s = ZERO
            for idx, c in row.items():
                x = v.get(idx)
                if x:
                    s = s + c * x
            if s:
                img[k] = s
        if img:
            images.append(img)
    out = []
    for coeffs in nullspace(images, len(a)):
        acc: Vector = {}
        for k, c in coeffs.items():
            axpy(acc, c, a[k])
        out.append(acc)
    return out


def inverse(block: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Exact inverse of a square matrix by Gauss-Jordan elimination."""
    n = len(block)
    aug = [[Scalar.coerce(x) for x in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(block)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def determinant(block: Sequence[Sequence[Scalar]]) -> Scalar:
    """Fraction-free (Bareiss) determinant; exact division at every step."""
    n = len(block)
    if n == 0:
        return ONE
    m = [[Scalar.coerce(x) for x in row] for row in block]
    sign = ONE
    prev = ONE
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_hermitian(block: Sequence[Sequence[Scalar]]) -> bool:
    n = len(block)
    return all(len(row) == n for row in block) and all(
        Scalar.coerce(block[i][j]) == Scalar.coerce(block[j][i]).conj() for i in range(n) for j in range(n)
    )


def is_positive_definite(block: Sequence[Sequence[Scalar]]) -> bool:
    """Sylvester's criterion on a Hermitian matrix: all leading principal minors > 0."""
    if not is_hermitian(block):
        return False
    for k in range(1, len(block) + 1):
        d = determinant([row[:k] for row in block[:k]])
        if d.im or d.re <= 0:
            return False
    return True
