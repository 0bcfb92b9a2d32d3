"""Exact scalar fields and dense linear algebra over them.

Two kinds of ground field are supported: the rationals (``fractions.Fraction``
scalars) and prime fields F_p (plain ``int`` scalars kept in ``[0, p)``).
Everything is exact; there is no floating point anywhere in the package.

Row reduction has two interchangeable backends. Small matrices go through a
pure-Python Gauss-Jordan; large ones are handed to FLINT (``python-flint``).
Both produce the unique reduced row echelon form, so every result below is
independent of which backend ran.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

__all__ = [
    "Field", "QQ", "GF", "Matrix", "SparseMatrix",
    "rref", "rank", "kernel_basis", "solve", "image_basis", "quotient_basis",
    "MalformedInputError",
]

# entry count above which row reduction is delegated to FLINT
FLINT_THRESHOLD = 4096


class MalformedInputError(ValueError):
    """Raised when tables or matrices have inconsistent shapes or bad scalars."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: ``kind`` is ``"rationals"`` or ``"prime-field"``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise MalformedInputError("rationals take no modulus")
        elif self.kind == "prime-field":
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise MalformedInputError(f"modulus {self.p!r} is not a prime")
        else:
            raise MalformedInputError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime-field"

    @property
    def characteristic(self) -> int:
        return self.p if self.is_prime else 0

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or scalar string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.is_prime:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(x, -1, self.p)
        return 1 / x

    def reduce(self, x):
        return x % self.p if self.is_prime else x

    def parse(self, s: str):
        s = s.strip()
        try:
            if self.is_prime:
                v = int(s)
                if not 0 <= v < self.p:
                    raise MalformedInputError(f"scalar {s!r} not in [0, {self.p})")
                return v
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, MalformedInputError):
                raise
            raise MalformedInputError(f"cannot parse scalar {s!r}") from exc

    def format(self, x) -> str:
        return str(x)

    def __str__(self):
        return "QQ" if not self.is_prime else f"GF({self.p})"


QQ = Field("rationals")


def GF(p: int) -> Field:
    return Field("prime-field", p)


class Matrix:
    """Dense matrix over a :class:`Field`, stored row-major as lists."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = [[field(x) if not _native(field, x) else x for x in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise MalformedInputError("column count needed for a matrix without rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise MalformedInputError(f"ragged matrix: row of length {len(r)}, expected {ncols}")

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Sequence]) -> "Matrix":
        cols = list(columns)
        return cls(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.nrows else
                      [[] for _ in range(self.ncols)], self.nrows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols}, {self.rows!r})"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        red = self.field.reduce
        return Matrix(self.field, [[red(a + b) for a, b in zip(r, s)]
                                   for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        red = self.field.reduce
        return Matrix(self.field, [[red(a - b) for a, b in zip(r, s)]
                                   for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c) -> "Matrix":
        red = self.field.reduce
        return Matrix(self.field, [[red(c * a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
            red = self.field.reduce
            zero = self.field.zero
            out = []
            ocols = other.ncols
            orows = other.rows
            for r in self.rows:
                acc = [zero] * ocols
                for k, a in enumerate(r):
                    if a:
                        ok = orows[k]
                        for j in range(ocols):
                            b = ok[j]
                            if b:
                                acc[j] += a * b
                out.append([red(x) for x in acc])
            return Matrix(self.field, out, ocols)
        return self.apply(other)

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise MalformedInputError(f"vector of length {len(v)} for {self.shape} matrix")
        red = self.field.reduce
        nz = [(j, x) for j, x in enumerate(v) if x]
        return [red(sum((r[j] * x for j, x in nz), self.field.zero)) for r in self.rows]

    def select_columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise MalformedInputError("hstack needs equal row counts")
        return Matrix(self.field, [r + s for r, s in zip(self.rows, other.rows)],
                      self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise MalformedInputError("vstack needs equal column counts")
        return Matrix(self.field, self.rows + other.rows, self.ncols)


def _native(field: Field, x) -> bool:
    if field.is_prime:
        return type(x) is int and 0 <= x < field.p
    return type(x) is Fraction


def _same_shape(a: Matrix, b: Matrix):
    if a.shape != b.shape:
        raise MalformedInputError(f"shape mismatch {a.shape} vs {b.shape}")


class SparseMatrix:
    """Dictionary-of-rows sparse matrix, used for large complexes.

    ``data[i][j]`` holds the nonzero entry at row ``i``, column ``j``.
    """

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: Field, nrows: int, ncols: int, data: dict | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.data: dict[int, dict[int, object]] = data if data is not None else {}

    @property
    def shape(self):
        return self.nrows, self.ncols

    def add(self, i: int, j: int, x):
        row = self.data.setdefault(i, {})
        v = self.field.reduce(row.get(j, 0) + x)
        if v:
            row[j] = v
        else:
            row.pop(j, None)

    def prune(self) -> "SparseMatrix":
        self.data = {i: r for i, r in self.data.items() if r}
        return self

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not any(self.data.values())

    def to_dense(self) -> Matrix:
        m = Matrix.zeros(self.field, self.nrows, self.ncols)
        for i, r in self.data.items():
            for j, x in r.items():
                m.rows[i][j] = x
        return m

    @classmethod
    def from_dense(cls, m: Matrix) -> "SparseMatrix":
        data = {}
        for i, r in enumerate(m.rows):
            row = {j: x for j, x in enumerate(r) if x}
            if row:
                data[i] = row
        return cls(m.field, m.nrows, m.ncols, data)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
        red = self.field.reduce
        out = {}
        odata = other.data
        for i, r in self.data.items():
            acc: dict[int, object] = {}
            for k, a in r.items():
                ok = odata.get(k)
                if ok:
                    for j, b in ok.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: red(x) for j, x in acc.items()}
            acc = {j: x for j, x in acc.items() if x}
            if acc:
                out[i] = acc
        return SparseMatrix(self.field, self.nrows, other.ncols, out)

    def rank(self) -> int:
        return _rank_sparse(self)


# ---------------------------------------------------------------- elimination

def _rref_python(field: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    red = field.reduce
    inv = field.inv
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        s = inv(pr[c])
        if s != 1:
            pr = rows[r] = [red(x * s) for x in pr]
        nzc = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                ri = rows[i]
                f = ri[c]
                if f:
                    for j in nzc:
                        ri[j] = red(ri[j] - f * pr[j])
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _to_flint(field: Field, nrows: int, ncols: int, flat: list):
    if field.is_prime:
        return flint.nmod_mat(nrows, ncols, flat, field.p)
    if all(x.denominator == 1 for x in flat if x):
        return flint.fmpq_mat(flint.fmpz_mat(nrows, ncols, [int(x) for x in flat]))
    return flint.fmpq_mat(nrows, ncols, [flint.fmpq(x.numerator, x.denominator) for x in flat])


def _from_flint_scalar(field: Field, x):
    if field.is_prime:
        return int(x)
    return Fraction(int(x.p), int(x.q))


def _rref_flint(field: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    nrows = len(rows)
    fm = _to_flint(field, nrows, ncols, [x for r in rows for x in r])
    R, rk = fm.rref()
    out, pivots = [], []
    for i in range(rk):
        row = [_from_flint_scalar(field, R[i, j]) for j in range(ncols)]
        pivots.append(next(j for j, x in enumerate(row) if x))
        out.append(row)
    return out, pivots


def rref(m: Matrix, backend: str = "auto") -> tuple[list[list], list[int]]:
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    if m.nrows == 0 or m.ncols == 0:
        return [], []
    if backend == "auto":
        backend = "flint" if m.nrows * m.ncols > FLINT_THRESHOLD else "python"
    if backend == "flint":
        return _rref_flint(m.field, m.rows, m.ncols)
    return _rref_python(m.field, m.rows, m.ncols)


def _rank_sparse(s: SparseMatrix) -> int:
    s.prune()
    if not s.data:
        return 0
    # drop empty columns and rows before going dense
    used_cols = sorted({j for r in s.data.values() for j in r})
    cidx = {j: k for k, j in enumerate(used_cols)}
    nr, nc = len(s.data), len(used_cols)
    if nr * nc <= FLINT_THRESHOLD:
        rows = []
        for r in s.data.values():
            row = [s.field.zero] * nc
            for j, x in r.items():
                row[cidx[j]] = x
            rows.append(row)
        return len(_rref_python(s.field, rows, nc)[1])
    if nr < nc:
        # flint is faster on tall matrices; rank is transpose invariant
        t: dict[int, dict[int, object]] = {}
        for i, r in s.data.items():
            for j, x in r.items():
                t.setdefault(j, {})[i] = x
        s = SparseMatrix(s.field, s.ncols, s.nrows, t)
        used_cols = sorted({j for r in s.data.values() for j in r})
        cidx = {j: k for k, j in enumerate(used_cols)}
        nr, nc = len(s.data), len(used_cols)
    zero = 0 if s.field.is_prime else Fraction(0)
    flat = [zero] * (nr * nc)
    for k, r in enumerate(s.data.values()):
        base = k * nc
        for j, x in r.items():
            flat[base + cidx[j]] = x
    return _to_flint(s.field, nr, nc, flat).rank()


def rank(m: Matrix | SparseMatrix) -> int:
    """Rank over the matrix's field."""
    if isinstance(m, SparseMatrix):
        return _rank_sparse(m)
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the null space, one per non-pivot column."""
    field = m.field
    R, pivots = rref(m)
    pset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pset]
    cols = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for row, p in zip(R, pivots):
            if row[f]:
                v[p] = field.reduce(-row[f])
        cols.append(v)
    return Matrix.from_columns(field, m.ncols, cols)


def solve(m: Matrix, v: Sequence):
    """Some x with ``m @ x == v`` (free variables set to zero), or None."""
    if len(v) != m.nrows:
        raise MalformedInputError(f"right-hand side of length {len(v)} for {m.nrows} rows")
    field = m.field
    if m.ncols == 0:
        return [] if all(x == 0 for x in v) else None
    aug = Matrix(field, [list(r) + [field(x)] for r, x in zip(m.rows, v)], m.ncols + 1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [field.zero] * m.ncols
    for row, p in zip(R, pivots):
        x[p] = row[-1]
    return x


def solve_many(m: Matrix, rhs: Matrix) -> Matrix | None:
    """Solve ``m @ X == rhs`` column by column with one elimination; None if any column fails."""
    if rhs.nrows != m.nrows:
        raise MalformedInputError("right-hand side row count mismatch")
    field = m.field
    aug = m.hstack(rhs)
    R, pivots = rref(aug)
    if any(p >= m.ncols for p in pivots):
        return None
    X = Matrix.zeros(field, m.ncols, rhs.ncols)
    for row, p in zip(R, pivots):
        X.rows[p] = row[m.ncols:]
    return X


def image_basis(m: Matrix) -> Matrix:
    """Basis of the column space, as the pivot columns of ``m``."""
    _, pivots = rref(m)
    return m.select_columns(pivots)


def quotient_basis(ambient_dim: int, spanning: Matrix) -> tuple[list[int], Matrix]:
    """Basis of ``k^ambient_dim / span(columns of spanning)``.

    Returns ``(representatives, projection)``: the standard basis vectors
    indexed by ``representatives`` map to a basis of the quotient, and
    ``projection`` sends ambient coordinates to coordinates in that basis.
    """
    field = spanning.field
    if spanning.nrows != ambient_dim:
        raise MalformedInputError(f"spanning set has {spanning.nrows} rows, ambient is {ambient_dim}")
    if spanning.ncols:
        R, pivots = rref(spanning.transpose())
    else:
        R, pivots = [], []
    pset = set(pivots)
    reps = [i for i in range(ambient_dim) if i not in pset]
    pos = {i: k for k, i in enumerate(reps)}
    proj = Matrix.zeros(field, len(reps), ambient_dim)
    for i in reps:
        proj.rows[pos[i]][i] = field.one
    # e_p == -(rest of its rref row) modulo the subspace
    for row, p in zip(R, pivots):
        for i in reps:
            if row[i]:
                proj.rows[pos[i]][p] = field.reduce(-row[i])
    return reps, proj
