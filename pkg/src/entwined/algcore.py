"""Algebras, coalgebras and bimodules given by structure constants.

Tensor basis convention, used everywhere in the package: the pair ``(i, j)``
of basis indices of ``V`` and ``W`` is the flat index ``i * dim(W) + j`` of
``V (x) W``; longer tensors associate left to right, so ``(i, j, k)`` in
``U (x) V (x) W`` is ``(i * dim(V) + j) * dim(W) + k``.

Action matrices act on column vectors: ``left[i] @ x`` is ``e_i . x`` and
``right[i] @ x`` is ``x . e_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .exactlin import Field, Matrix, MalformedInputError, rank, solve_many

__all__ = [
    "Algebra", "Coalgebra", "Bimodule", "AxiomReport",
    "flatten", "unflatten", "check_algebra", "check_coalgebra", "check_bimodule",
    "subalgebra", "restrict_bimodule", "regular_bimodule", "opposite", "enveloping",
    "InvalidSubalgebraError", "MAX_WITNESSES",
]

MAX_WITNESSES = 5


class InvalidSubalgebraError(ValueError):
    pass


def flatten(idx: Sequence[int], dims: Sequence[int]) -> int:
    """Flat index of a basis tuple in an iterated tensor product."""
    if len(idx) != len(dims):
        raise ValueError("index and dims differ in length")
    k = 0
    for i, d in zip(idx, dims):
        if not 0 <= i < d:
            raise IndexError(f"index {i} out of range for dimension {d}")
        k = k * d + i
    return k


def unflatten(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        k, r = divmod(k, d)
        out.append(r)
    if k:
        raise IndexError("flat index out of range")
    return tuple(reversed(out))


@dataclass
class AxiomReport:
    """Outcome of an axiom check: one flag per axiom, with failing witnesses."""

    flags: dict[str, bool] = dc_field(default_factory=dict)
    witnesses: dict[str, list] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def record(self, name: str, passed: bool, witness=None, limit: int = MAX_WITNESSES):
        self.flags[name] = self.flags.get(name, True) and passed
        ws = self.witnesses.setdefault(name, [])
        if not passed and witness is not None and len(ws) < limit:
            ws.append(witness)

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "flags": dict(self.flags),
                "witnesses": {k: [list(w) if isinstance(w, tuple) else w for w in v]
                              for k, v in self.witnesses.items() if v}}


def _vec(field: Field, v, n: int, what: str) -> list:
    if len(v) != n:
        raise MalformedInputError(f"{what}: expected length {n}, got {len(v)}")
    return [field(x) for x in v]


class Algebra:
    """Finite-dimensional unital associative algebra.

    ``mult[i][j]`` is the coefficient vector of ``e_i * e_j`` and ``unit`` the
    coefficient vector of 1. The axioms are not enforced at construction; see
    :func:`check_algebra`.
    """

    def __init__(self, field: Field, dim: int, mult, unit, name: str | None = None):
        self.field = field
        self.dim = dim
        if len(mult) != dim or any(len(row) != dim for row in mult):
            raise MalformedInputError(f"multiplication table must be {dim}x{dim}")
        self.mult = [[_vec(field, v, dim, f"mult[{i}][{j}]") for j, v in enumerate(row)]
                     for i, row in enumerate(mult)]
        self.unit = _vec(field, unit, dim, "unit")
        self.name = name

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.field == other.field
                and self.mult == other.mult and self.unit == other.unit)

    __hash__ = None

    def basis_vector(self, i: int) -> list:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def multiply(self, u: Sequence, v: Sequence) -> list:
        red = self.field.reduce
        acc = [self.field.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            mi = self.mult[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(mi[j]):
                    if c:
                        acc[k] += ab * c
        return [red(x) for x in acc]

    @cached_property
    def left_matrices(self) -> list[Matrix]:
        """``L[i]``: left multiplication by ``e_i``."""
        n = self.dim
        return [Matrix(self.field, [[self.mult[i][j][k] for j in range(n)] for k in range(n)], n)
                for i in range(n)]

    @cached_property
    def right_matrices(self) -> list[Matrix]:
        """``R[j]``: right multiplication by ``e_j``."""
        n = self.dim
        return [Matrix(self.field, [[self.mult[i][j][k] for i in range(n)] for k in range(n)], n)
                for j in range(n)]

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i]
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    @cached_property
    def sparse_mult(self) -> list[list[list[tuple[int, object]]]]:
        """``mult`` with zero coefficients dropped, for inner loops."""
        return [[[(k, c) for k, c in enumerate(v) if c] for v in row] for row in self.mult]

    @cached_property
    def sparse_unit(self) -> list[tuple[int, object]]:
        return [(k, c) for k, c in enumerate(self.unit) if c]


class Coalgebra:
    """Finite-dimensional coalgebra; ``comult[i][j][k]`` is the coefficient
    of ``c_j (x) c_k`` in the coproduct of ``c_i``."""

    def __init__(self, field: Field, dim: int, comult, counit, name: str | None = None):
        self.field = field
        self.dim = dim
        if len(comult) != dim:
            raise MalformedInputError(f"comultiplication table needs {dim} matrices")
        self.comult = []
        for i, d in enumerate(comult):
            if len(d) != dim or any(len(r) != dim for r in d):
                raise MalformedInputError(f"comult[{i}] must be {dim}x{dim}")
            self.comult.append([[field(x) for x in r] for r in d])
        self.counit = _vec(field, counit, dim, "counit")
        self.name = name

    def __repr__(self):
        return f"Coalgebra({self.name or '?'}, dim={self.dim}, {self.field})"

    def __eq__(self, other):
        return (isinstance(other, Coalgebra) and self.field == other.field
                and self.comult == other.comult and self.counit == other.counit)

    __hash__ = None

    @cached_property
    def delta_matrix(self) -> Matrix:
        """Coproduct as a ``dim^2 x dim`` matrix into ``C (x) C``."""
        n = self.dim
        return Matrix(self.field, [[self.comult[i][j][k] for i in range(n)]
                                   for j in range(n) for k in range(n)], n)


class Bimodule:
    """A bimodule over ``algebra`` given by left and right action matrices."""

    def __init__(self, algebra: Algebra, dim: int, left: Sequence[Matrix], right: Sequence[Matrix],
                 name: str | None = None):
        self.algebra = algebra
        self.dim = dim
        if len(left) != algebra.dim or len(right) != algebra.dim:
            raise MalformedInputError(f"need {algebra.dim} left and right action matrices")
        for m in list(left) + list(right):
            if m.shape != (dim, dim):
                raise MalformedInputError(f"action matrix of shape {m.shape}, expected {(dim, dim)}")
        self.left = list(left)
        self.right = list(right)
        self.name = name

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim}, over {self.algebra!r})"

    def __eq__(self, other):
        return (isinstance(other, Bimodule) and self.algebra == other.algebra
                and self.left == other.left and self.right == other.right)

    __hash__ = None

    def combine_left(self, v: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.left, v)

    def combine_right(self, v: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.right, v)

    def direct_sum(self, other: "Bimodule") -> "Bimodule":
        return Bimodule(self.algebra, self.dim + other.dim,
                        [_block(a, b) for a, b in zip(self.left, other.left)],
                        [_block(a, b) for a, b in zip(self.right, other.right)])

    def change_basis(self, t: Matrix, t_inv: Matrix) -> "Bimodule":
        """Same bimodule in the basis given by the columns of ``t``."""
        return Bimodule(self.algebra, self.dim, [t_inv @ m @ t for m in self.left],
                        [t_inv @ m @ t for m in self.right], self.name)


def _combine(field: Field, dim: int, mats: Sequence[Matrix], v: Sequence) -> Matrix:
    out = Matrix.zeros(field, dim, dim)
    for c, m in zip(v, mats):
        if c:
            out = out + m.scale(c)
    return out


def _block(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    z = f.zero
    rows = [r + [z] * b.ncols for r in a.rows] + [[z] * a.ncols + r for r in b.rows]
    return Matrix(f, rows, a.ncols + b.ncols)


# ------------------------------------------------------------------ checkers

def check_algebra(a: Algebra, limit: int = MAX_WITNESSES) -> AxiomReport:
    rep = AxiomReport()
    n = a.dim
    for i in range(n):
        for j in range(n):
            eij = a.mult[i][j]
            for k in range(n):
                lhs = a.multiply(eij, a.basis_vector(k))
                rhs = a.multiply(a.basis_vector(i), a.mult[j][k])
                rep.record("associativity", lhs == rhs, (i, j, k), limit)
    rep.flags.setdefault("associativity", True)
    for i in range(n):
        e = a.basis_vector(i)
        ok = a.multiply(a.unit, e) == e and a.multiply(e, a.unit) == e
        rep.record("unit", ok, i, limit)
    rep.flags.setdefault("unit", True)
    return rep


def check_coalgebra(c: Coalgebra, limit: int = MAX_WITNESSES) -> AxiomReport:
    rep = AxiomReport()
    n = c.dim
    f = c.field
    red = f.reduce
    for i in range(n):
        d = c.comult[i]
        # (Delta (x) id) Delta and (id (x) Delta) Delta as n^3 coefficient arrays
        lhs = [f.zero] * n ** 3
        rhs = [f.zero] * n ** 3
        for j in range(n):
            for k in range(n):
                x = d[j][k]
                if not x:
                    continue
                dj = c.comult[j]
                dk = c.comult[k]
                for p in range(n):
                    for q in range(n):
                        if dj[p][q]:
                            lhs[(p * n + q) * n + k] += x * dj[p][q]
                        if dk[p][q]:
                            rhs[(j * n + p) * n + q] += x * dk[p][q]
        ok = [red(v) for v in lhs] == [red(v) for v in rhs]
        rep.record("coassociativity", ok, i, limit)
        left = [red(sum((c.counit[j] * d[j][k] for j in range(n)), f.zero)) for k in range(n)]
        right = [red(sum((d[j][k] * c.counit[k] for k in range(n)), f.zero)) for j in range(n)]
        e = [f.one if t == i else f.zero for t in range(n)]
        rep.record("counit", left == e and right == e, i, limit)
    rep.flags.setdefault("coassociativity", True)
    rep.flags.setdefault("counit", True)
    return rep


def check_bimodule(m: Bimodule, limit: int = MAX_WITNESSES) -> AxiomReport:
    a = m.algebra
    n = a.dim
    rep = AxiomReport()
    ident = Matrix.identity(m.field, m.dim)
    rep.record("left_unit", m.combine_left(a.unit) == ident, "unit", limit)
    rep.record("right_unit", m.combine_right(a.unit) == ident, "unit", limit)
    for i in range(n):
        for j in range(n):
            e = a.mult[i][j]
            rep.record("left_associativity", m.combine_left(e) == m.left[i] @ m.left[j], (i, j), limit)
            rep.record("right_associativity", m.combine_right(e) == m.right[j] @ m.right[i],
                       (i, j), limit)
            rep.record("commuting", m.left[i] @ m.right[j] == m.right[j] @ m.left[i], (i, j), limit)
    for k in ("left_associativity", "right_associativity", "commuting"):
        rep.flags.setdefault(k, True)
    return rep


# ------------------------------------------------------------ constructions

def regular_bimodule(a: Algebra) -> Bimodule:
    return Bimodule(a, a.dim, a.left_matrices, a.right_matrices, name="regular")


def opposite(a: Algebra) -> Algebra:
    n = a.dim
    return Algebra(a.field, n, [[a.mult[j][i] for j in range(n)] for i in range(n)], a.unit,
                   name=f"{a.name}^op" if a.name else None)


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    f = a.field
    n, m = a.dim, b.dim
    mult = []
    for i1 in range(n):
        for j1 in range(m):
            row = []
            for i2 in range(n):
                for j2 in range(m):
                    u, v = a.mult[i1][i2], b.mult[j1][j2]
                    row.append([f.reduce(x * y) for x in u for y in v])
            mult.append(row)
    unit = [f.reduce(x * y) for x in a.unit for y in b.unit]
    return Algebra(f, n * m, mult, unit)


def enveloping(a: Algebra) -> Algebra:
    """``A (x) A^op``; its left modules are the A-bimodules."""
    return tensor_algebra(a, opposite(a))


def subalgebra(a: Algebra, basis: Matrix) -> Algebra:
    """The subalgebra spanned by the columns of ``basis``, with its own
    structure constants. Closure under products and the unit are validated."""
    if basis.nrows != a.dim:
        raise MalformedInputError(f"inclusion has {basis.nrows} rows, algebra has dim {a.dim}")
    k = basis.ncols
    if rank(basis) != k:
        raise InvalidSubalgebraError("inclusion columns are not independent")
    cols = basis.columns()
    prods = [a.multiply(cols[i], cols[j]) for i in range(k) for j in range(k)]
    rhs = Matrix.from_columns(a.field, a.dim, prods + [a.unit])
    coords = solve_many(basis, rhs)
    if coords is None:
        raise InvalidSubalgebraError("span is not closed under multiplication or misses the unit")
    cc = coords.columns()
    mult = [[cc[i * k + j] for j in range(k)] for i in range(k)]
    return Algebra(a.field, k, mult, cc[-1])


def restrict_bimodule(m: Bimodule, inclusion: Matrix) -> Bimodule:
    """View an A-bimodule as a bimodule over the subalgebra spanned by the
    columns of ``inclusion``."""
    b = subalgebra(m.algebra, inclusion)
    cols = inclusion.columns()
    return Bimodule(b, m.dim, [m.combine_left(c) for c in cols],
                    [m.combine_right(c) for c in cols], name=m.name)
