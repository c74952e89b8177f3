"""Exact dense linear algebra over the rationals and prime fields.

Matrices wrap python-flint's ``fmpq_mat`` / ``nmod_mat``; this module adds the
field tag, mismatch checks and the handful of reductions the homological
code needs (rref with pivots, null spaces, solving, complements).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import DimensionMismatch, FieldMismatch


@dataclass(frozen=True)
class Field:
    """Base field: ``p == 0`` is the rationals, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or (self.p and not flint.fmpz(self.p).is_prime()):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(int(p))

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __repr__(self):
        return f"Field({self.name})"

    def __call__(self, x):
        """Coerce ``x`` into a scalar of this field."""
        p = self.p
        if isinstance(x, flint.nmod):
            if p == 0 or x.modulus() != p:
                raise FieldMismatch(f"residue mod {x.modulus()} used over {self.name}")
            return x
        if p == 0:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, (int, flint.fmpz)):
                return flint.fmpq(x)
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, str):
                f = Fraction(x)
                return flint.fmpq(f.numerator, f.denominator)
            raise TypeError(f"cannot coerce {x!r} to Q")
        if isinstance(x, (int, flint.fmpz)):
            return flint.nmod(int(x) % p, p)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            x = flint.fmpq(x.numerator, x.denominator)
        if isinstance(x, flint.fmpq):
            num, den = int(x.p), int(x.q)
            if den % p == 0:
                raise ZeroDivisionError(f"{x} has no image in F{p}")
            return flint.nmod(num, p) / flint.nmod(den, p)
        raise TypeError(f"cannot coerce {x!r} to F{p}")

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_int_or_frac(self, x):
        """Plain Python value of a scalar (int for F_p and integral rationals)."""
        if self.p:
            return int(x)
        x = flint.fmpq(x)
        if x.q == 1:
            return int(x.p)
        return Fraction(int(x.p), int(x.q))

    def format(self, x) -> str:
        v = self.to_int_or_frac(x)
        return str(v)

    def _raw(self, rows, nrows, ncols):
        if self.p == 0:
            if nrows == 0 or ncols == 0:
                return flint.fmpq_mat(nrows, ncols)
            return flint.fmpq_mat(rows)
        if nrows == 0 or ncols == 0:
            return flint.nmod_mat(nrows, ncols, self.p)
        return flint.nmod_mat([[int(v) for v in r] for r in rows], self.p)

    def check(self, x):
        """Raise FieldMismatch if ``x`` is a scalar belonging to another field."""
        if self.p == 0:
            if isinstance(x, flint.nmod):
                raise FieldMismatch(f"residue mod {x.modulus()} used over Q")
        elif isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise FieldMismatch(f"residue mod {x.modulus()} used over {self.name}")
        elif isinstance(x, flint.fmpq) and x.q % self.p == 0:
            raise FieldMismatch(f"rational {x} has no image in {self.name}")


QQ = Field(0)


class Matrix:
    """Immutable-by-convention exact matrix tagged with its field."""

    __slots__ = ("field", "_m")

    def __init__(self, field: Field, raw):
        self.field = field
        self._m = raw

    # -- construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        conv = [[field(v) for v in r] for r in rows]
        return cls(field, field._raw(conv, nrows, ncols))

    @classmethod
    def _trusted(cls, field: Field, rows, nrows: int, ncols: int) -> "Matrix":
        # rows hold ints or scalars already in ``field``
        return cls(field, field._raw(rows, nrows, ncols))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        if field.p == 0:
            return cls(field, flint.fmpq_mat(nrows, ncols))
        return cls(field, flint.nmod_mat(nrows, ncols, field.p))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return cls._trusted(field, rows, n, n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        cols = [list(c) for c in columns]
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls._trusted(field, rows, nrows, len(cols))

    @classmethod
    def from_dict(cls, field: Field, entries: dict, nrows: int, ncols: int) -> "Matrix":
        rows = [[0] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls._trusted(field, rows, nrows, ncols)

    # -- shape & access -----------------------------------------------------
    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        return self._m[ij]

    def tolist(self) -> list[list]:
        if self.rows == 0 or self.cols == 0:
            return [[] for _ in range(self.rows)]
        return self._m.tolist()

    def column(self, j: int) -> list:
        return [self._m[i, j] for i in range(self.rows)]

    def columns(self) -> list[list]:
        rows = self.tolist()
        return [[r[j] for r in rows] for j in range(self.cols)]

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in r) for r in self.tolist())
        return f"Matrix<{self.field.name} {self.rows}x{self.cols}>[{body}]"

    # -- arithmetic ---------------------------------------------------------
    def _same(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self._m * other._m)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self._m + other._m)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self._m - other._m)

    def __neg__(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, -self._m)

    def scale(self, s) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return self
        return Matrix(self.field, self.field(s) * self._m)

    @property
    def T(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.cols, self.rows)
        return Matrix(self.field, self._m.transpose())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.rows == 0 or self.cols == 0:
            return True
        return self._m == other._m

    __hash__ = None

    def is_zero(self) -> bool:
        return self == Matrix.zeros(self.field, self.rows, self.cols)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        src = self.tolist()
        out = [[src[i][j] for j in cols] for i in rows]
        return Matrix._trusted(self.field, out, len(rows), len(cols))

    def vector_apply(self, v: Sequence) -> list:
        """Matrix times a plain list column."""
        col = Matrix._trusted(self.field, [[x] for x in v], len(v), 1)
        return (self @ col).column(0)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of non-square matrix")
        if self.rows == 0:
            return self
        return Matrix(self.field, self._m.inv())

    @staticmethod
    def hstack(mats: Sequence["Matrix"], field: Field | None = None, nrows: int | None = None) -> "Matrix":
        mats = list(mats)
        if not mats:
            return Matrix.zeros(field, nrows or 0, 0)
        f = mats[0].field
        r = mats[0].rows
        rows = [[] for _ in range(r)]
        for m in mats:
            m0 = mats[0]
            m0._same(m)
            if m.rows != r:
                raise DimensionMismatch("hstack row mismatch")
            for i, row in enumerate(m.tolist()):
                rows[i].extend(row)
        return Matrix._trusted(f, rows, r, sum(m.cols for m in mats))

    @staticmethod
    def vstack(mats: Sequence["Matrix"], field: Field | None = None, ncols: int | None = None) -> "Matrix":
        mats = list(mats)
        if not mats:
            return Matrix.zeros(field, 0, ncols or 0)
        f = mats[0].field
        c = mats[0].cols
        rows = []
        for m in mats:
            mats[0]._same(m)
            if m.cols != c:
                raise DimensionMismatch("vstack column mismatch")
            rows.extend(m.tolist())
        return Matrix._trusted(f, rows, len(rows), c)

    @staticmethod
    def block_diag(mats: Sequence["Matrix"], field: Field) -> "Matrix":
        nr = sum(m.rows for m in mats)
        nc = sum(m.cols for m in mats)
        rows = [[0] * nc for _ in range(nr)]
        r0 = c0 = 0
        for m in mats:
            for i, row in enumerate(m.tolist()):
                rows[r0 + i][c0:c0 + m.cols] = row
            r0 += m.rows
            c0 += m.cols
        return Matrix._trusted(field, rows, nr, nc)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with row index (i, k) -> i * b.rows + k."""
    a._same(b)
    al, bl = a.tolist(), b.tolist()
    br, bc = b.rows, b.cols
    rows = [[0] * (a.cols * bc) for _ in range(a.rows * br)]
    bnz = [[(l, v) for l, v in enumerate(brow) if v != 0] for brow in bl]
    for i, arow in enumerate(al):
        for j, x in enumerate(arow):
            if x == 0:
                continue
            for k in range(br):
                out = rows[i * br + k]
                base = j * bc
                for l, v in bnz[k]:
                    out[base + l] = x * v
    return Matrix._trusted(a.field, rows, a.rows * br, a.cols * bc)


def rref(m: Matrix) -> tuple[int, list[int], Matrix]:
    """Reduced row echelon form: ``(rank, pivot columns, reduced matrix)``."""
    if m.rows == 0 or m.cols == 0:
        return 0, [], m
    red, rank = m._m.rref()
    rank = int(rank)
    reduced = Matrix(m.field, red)
    pivots = []
    rows = reduced.tolist()
    c = 0
    for r in range(rank):
        row = rows[r]
        while row[c] == 0:
            c += 1
        pivots.append(c)
        c += 1
    return rank, pivots, reduced


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(m._m.rank())


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space ``{x : m x = 0}``.

    The basis is the canonical one read off the rref: restricted to the free
    (non-pivot) coordinates it is the identity matrix.
    """
    return kernel_data(m)[0]


def kernel_data(m: Matrix) -> tuple[Matrix, list[int]]:
    """``(kernel_basis(m), free columns)``; the basis is the identity on the free columns."""
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(m.field, n), list(range(n))
    r, pivots, red = rref(m)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    rows = red.tolist()
    out = [[0] * len(free) for _ in range(n)]
    for k, f in enumerate(free):
        out[f][k] = 1
        for i, pc in enumerate(pivots):
            v = rows[i][f]
            if v != 0:
                out[pc][k] = -v
    return Matrix._trusted(m.field, out, n, len(free)), free


def free_columns(m: Matrix) -> list[int]:
    """Non-pivot columns of ``m`` (the coordinates indexing ``kernel_basis``)."""
    _, pivots, _ = rref(m)
    ps = set(pivots)
    return [j for j in range(m.cols) if j not in ps]


def solve_matrix(m: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``m @ x == b`` (all right-hand columns at once), or None."""
    m._same(b)
    if b.rows != m.rows:
        raise DimensionMismatch(f"rhs has {b.rows} rows, matrix has {m.rows}")
    n, k = m.cols, b.cols
    if m.rows == 0:
        return Matrix.zeros(m.field, n, k)
    aug = Matrix.hstack([m, b])
    r, pivots, red = rref(aug)
    if any(p >= n for p in pivots):
        return None
    rows = red.tolist()
    out = [[0] * k for _ in range(n)]
    for i, pc in enumerate(pivots):
        out[pc] = rows[i][n:]
    return Matrix._trusted(m.field, out, n, k)


def solve(m: Matrix, b) -> list | None:
    """Some ``x`` with ``m x = b`` (b a list or an n-by-1 Matrix), or None."""
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise DimensionMismatch("solve expects a single column")
        bm = b
    else:
        b = list(b)
        if len(b) != m.rows:
            raise DimensionMismatch(f"rhs has length {len(b)}, matrix has {m.rows} rows")
        bm = Matrix.from_rows(m.field, [[x] for x in b], 1)
    x = solve_matrix(m, bm)
    return None if x is None else x.column(0)


def column_basis(m: Matrix) -> Matrix:
    """A basis of the column space, chosen among the columns of ``m``."""
    _, pivots, _ = rref(m)
    return m.submatrix(range(m.rows), pivots)


def extend_to_complement(sub: Matrix, ambient_dim: int) -> list[int]:
    """Standard basis indices whose vectors complete ``sub``'s columns to a basis."""
    f = sub.field
    aug = Matrix.hstack([sub, Matrix.identity(f, ambient_dim)]) if sub.cols else Matrix.identity(f, ambient_dim)
    _, pivots, _ = rref(aug)
    return [p - sub.cols for p in pivots if p >= sub.cols]


def left_inverse_rows(basis: Matrix) -> list[int]:
    """Row indices on which the full-column-rank ``basis`` is invertible."""
    _, pivots, _ = rref(basis.T)
    return pivots


def coerce_vector(field: Field, v: Iterable) -> list:
    return [field(x) for x in v]
