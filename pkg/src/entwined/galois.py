"""Comodule algebras and coalgebra-Galois extensions.

A right coaction ``delta: A -> A (x) C`` is stored as a ``dim A * dim C`` by
``dim A`` matrix. From it :func:`galois_extension` derives the coinvariant
subalgebra B, the space ``A (x)_B A`` as a quotient of ``A (x) A``, the
Galois map beta, and (when beta is bijective) the translation map gamma and
the canonical entwining.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algcore import (Algebra, AxiomReport, Coalgebra, MAX_WITNESSES, InvalidSubalgebraError,
                      subalgebra)
from .entwine import Entwining, ac_bimodule
from .exactlin import Matrix, MalformedInputError, kernel_basis, quotient_basis, rank, solve_many

__all__ = [
    "ComoduleAlgebra", "GaloisExtension", "AbaSpace", "check_coaction", "coinvariants",
    "tensor_over_B", "galois_beta", "translation_gamma", "canonical_psi", "galois_extension",
    "check_beta_bimodule", "check_translation_identity", "NotGaloisError", "ConsistencyError",
]


class NotGaloisError(ValueError):
    """The Galois map is not bijective, so gamma and psi do not exist."""


class ConsistencyError(RuntimeError):
    """An identity that holds by construction failed; signals a bug upstream."""


@dataclass(eq=False)
class ComoduleAlgebra:
    a: Algebra
    c: Coalgebra
    coaction: Matrix

    def __post_init__(self):
        if self.a.field != self.c.field:
            raise MalformedInputError("algebra and coalgebra live over different fields")
        want = (self.a.dim * self.c.dim, self.a.dim)
        if self.coaction.shape != want:
            raise MalformedInputError(f"coaction must be {want[0]}x{want[1]}, got {self.coaction.shape}")

    @property
    def field(self):
        return self.a.field


def check_coaction(ca: ComoduleAlgebra, limit: int = MAX_WITNESSES) -> AxiomReport:
    """Right comodule axioms: counitality and coassociativity, per basis element."""
    A, C, d = ca.a, ca.c, ca.coaction
    f = ca.field
    red = f.reduce
    dA, dC = A.dim, C.dim
    rep = AxiomReport()
    rep.flags.update(counit=True, coassociativity=True)
    for a in range(dA):
        col = d.column(a)
        got = [f.zero] * dA
        for k in range(dA):
            for c in range(dC):
                got[k] += col[k * dC + c] * C.counit[c]
        want = [f.zero] * dA
        want[a] = f.one
        rep.record("counit", [red(x) for x in got] == want, a, limit)

        lhs = [f.zero] * (dA * dC * dC)  # (delta (x) id) delta
        rhs = [f.zero] * (dA * dC * dC)  # (id (x) Delta) delta
        for k in range(dA):
            for c in range(dC):
                x = col[k * dC + c]
                if not x:
                    continue
                inner = d.column(k)
                for k2 in range(dA):
                    for c2 in range(dC):
                        y = inner[k2 * dC + c2]
                        if y:
                            lhs[(k2 * dC + c2) * dC + c] += x * y
                dc = C.comult[c]
                for p in range(dC):
                    for q in range(dC):
                        if dc[p][q]:
                            rhs[(k * dC + p) * dC + q] += x * dc[p][q]
        rep.record("coassociativity", [red(x) for x in lhs] == [red(x) for x in rhs], a, limit)
    return rep


def _left_on_ac(A: Algebra, dC: int, avec, v) -> list:
    """``(a (x) 1) . v`` for ``v`` in A (x) C."""
    f = A.field
    acc = [f.zero] * (A.dim * dC)
    for i, x in enumerate(avec):
        if not x:
            continue
        for k in range(A.dim):
            for c in range(dC):
                y = v[k * dC + c]
                if y:
                    for t, z in A.sparse_mult[i][k]:
                        acc[t * dC + c] += x * y * z
    return [f.reduce(x) for x in acc]


def coinvariants(ca: ComoduleAlgebra) -> Matrix:
    """Basis (as columns) of ``{b : delta(b a) = b . delta(a) for all a}``."""
    A = ca.a
    f = ca.field
    dA, dC = A.dim, ca.c.dim
    d = ca.coaction
    # unknown b = sum x_i e_i; one block of dA*dC equations per basis element e_j
    rows = []
    for j in range(dA):
        dj = d.column(j)
        cols = []
        for i in range(dA):
            lhs = d.apply(A.mult[i][j])
            rhs = _left_on_ac(A, dC, A.basis_vector(i), dj)
            cols.append([f.reduce(x - y) for x, y in zip(lhs, rhs)])
        rows.extend(Matrix.from_columns(f, dA * dC, cols).rows)
    system = Matrix(f, rows, dA)
    basis = kernel_basis(system)
    try:
        subalgebra(A, basis)
    except InvalidSubalgebraError as exc:
        raise ConsistencyError(f"coinvariants are not a unital subalgebra: {exc}") from exc
    return basis


@dataclass(eq=False)
class AbaSpace:
    """``A (x)_B A`` as a quotient of ``A (x) A``.

    ``projection`` maps A (x) A coordinates to quotient coordinates and
    ``section`` includes the representative basis vectors back.
    """

    dim: int
    representatives: list[int]
    projection: Matrix
    section: Matrix
    relations: Matrix


def tensor_over_B(ca: ComoduleAlgebra, b_basis: Matrix) -> AbaSpace:
    """Quotient of A (x) A by the span of ``a b (x) a' - a (x) b a'``."""
    A = ca.a
    f = ca.field
    n = A.dim
    bvecs = b_basis.columns()
    rels = []
    for a in range(n):
        for b in bvecs:
            ab = A.multiply(A.basis_vector(a), b)
            for a2 in range(n):
                ba2 = A.multiply(b, A.basis_vector(a2))
                v = [f.zero] * (n * n)
                for k, x in enumerate(ab):
                    if x:
                        v[k * n + a2] += x
                for k, x in enumerate(ba2):
                    if x:
                        v[a * n + k] -= x
                v = [f.reduce(x) for x in v]
                if any(v):
                    rels.append(v)
    relations = Matrix.from_columns(f, n * n, rels) if rels else Matrix.zeros(f, n * n, 0)
    reps, proj = quotient_basis(n * n, relations)
    section = Matrix.zeros(f, n * n, len(reps))
    for k, i in enumerate(reps):
        section.rows[i][k] = f.one
    return AbaSpace(len(reps), reps, proj, section, relations)


def _beta_lift(ca: ComoduleAlgebra) -> Matrix:
    """``a (x) a' -> a a'_0 (x) a'_1`` on A (x) A."""
    A = ca.a
    f = ca.field
    dA, dC = A.dim, ca.c.dim
    cols = []
    for i in range(dA):
        for j in range(dA):
            cols.append(_left_on_ac(A, dC, A.basis_vector(i), ca.coaction.column(j)))
    return Matrix.from_columns(f, dA * dC, cols)


def galois_beta(ca: ComoduleAlgebra, b_basis: Matrix, aba: AbaSpace) -> tuple[Matrix, bool]:
    """The Galois map on ``A (x)_B A`` and whether it is bijective."""
    lift = _beta_lift(ca)
    if aba.relations.ncols and not (lift @ aba.relations).is_zero():
        raise ConsistencyError("Galois map does not vanish on the relations of A (x)_B A")
    beta = lift @ aba.section
    n = ca.a.dim * ca.c.dim
    is_galois = beta.ncols == n and rank(beta) == n
    return beta, is_galois


def _unit_tensor(ca: ComoduleAlgebra) -> Matrix:
    """``eta (x) id: C -> A (x) C``, ``c -> 1 (x) c``."""
    A = ca.a
    dA, dC = A.dim, ca.c.dim
    m = Matrix.zeros(ca.field, dA * dC, dC)
    for c in range(dC):
        for k, u in A.sparse_unit:
            m.rows[k * dC + c][c] = u
    return m


@dataclass(eq=False)
class GaloisExtension:
    base: ComoduleAlgebra
    b_basis: Matrix
    aba: AbaSpace
    beta: Matrix
    is_galois: bool

    @property
    def a(self) -> Algebra:
        return self.base.a

    @property
    def c(self) -> Coalgebra:
        return self.base.c

    @property
    def field(self):
        return self.base.field

    @cached_property
    def b_algebra(self) -> Algebra:
        return subalgebra(self.a, self.b_basis)

    @cached_property
    def gamma(self) -> Matrix:
        return translation_gamma(self)

    @cached_property
    def entwining(self) -> Entwining:
        return canonical_psi(self)

    def right_mult(self, j: int) -> Matrix:
        """Right multiplication by ``e_j`` on the second leg, on ``A (x)_B A``."""
        return self.aba.projection @ _second_leg_right(self.a, j) @ self.aba.section

    def left_mult(self, j: int) -> Matrix:
        return self.aba.projection @ _first_leg_left(self.a, j) @ self.aba.section

    def tensor_class(self, u, v) -> list:
        """Class of ``u (x) v`` in ``A (x)_B A``."""
        f = self.field
        w = [f.reduce(x * y) for x in u for y in v]
        return self.aba.projection.apply(w)


def _second_leg_right(A: Algebra, j: int) -> Matrix:
    n = A.dim
    m = Matrix.zeros(A.field, n * n, n * n)
    for k in range(n):
        for l in range(n):
            for t, x in A.sparse_mult[l][j]:
                m.rows[k * n + t][k * n + l] = x
    return m


def _first_leg_left(A: Algebra, j: int) -> Matrix:
    n = A.dim
    m = Matrix.zeros(A.field, n * n, n * n)
    for k in range(n):
        for l in range(n):
            for t, x in A.sparse_mult[j][k]:
                m.rows[t * n + l][k * n + l] = x
    return m


def galois_extension(ca: ComoduleAlgebra) -> GaloisExtension:
    """Run the pipeline: coinvariants, ``A (x)_B A``, beta, bijectivity."""
    rep = check_coaction(ca)
    if not rep.ok:
        raise MalformedInputError(f"coaction fails the comodule axioms: {rep.flags}")
    b = coinvariants(ca)
    aba = tensor_over_B(ca, b)
    beta, ok = galois_beta(ca, b, aba)
    return GaloisExtension(ca, b, aba, beta, ok)


def translation_gamma(ext: GaloisExtension) -> Matrix:
    """``gamma = beta^{-1} (eta (x) id)``: C -> A (x)_B A, in quotient coordinates."""
    if not ext.is_galois:
        raise NotGaloisError("translation map needs a bijective Galois map")
    gamma = solve_many(ext.beta, _unit_tensor(ext.base))
    if gamma is None:
        raise ConsistencyError("beta is bijective but eta (x) id is not in its image")
    return gamma


def canonical_psi(ext: GaloisExtension) -> Entwining:
    """``psi(c (x) a) = beta(gamma(c) a)``."""
    if not ext.is_galois:
        raise NotGaloisError("canonical entwining needs a bijective Galois map")
    A = ext.a
    f = ext.field
    dA, dC = A.dim, ext.c.dim
    aba = ext.aba
    gamma = ext.gamma
    cols: list[list] = [None] * (dA * dC)
    for j in range(dA):
        rm = _second_leg_right(A, j)
        if aba.relations.ncols and not (aba.projection @ (rm @ aba.relations)).is_zero():
            raise ConsistencyError("right multiplication does not preserve the relations")
        op = ext.beta @ aba.projection @ rm @ aba.section
        for c in range(dC):
            cols[c * dA + j] = op.apply(gamma.column(c))
    return Entwining(A, ext.c, Matrix.from_columns(f, dA * dC, cols))


def check_beta_bimodule(ext: GaloisExtension) -> bool:
    """beta commutes with both actions; A (x) C carries the psi-twisted right action."""
    if not ext.is_galois:
        raise NotGaloisError("bimodule check needs a Galois extension")
    ac = ac_bimodule(ext.entwining)
    for j in range(ext.a.dim):
        if ext.beta @ ext.right_mult(j) != ac.right[j] @ ext.beta:
            return False
        if ext.beta @ ext.left_mult(j) != ac.left[j] @ ext.beta:
            return False
    return True


def check_translation_identity(ext: GaloisExtension) -> bool:
    """``a_0 l(a_1) (x) r(a_1) == 1 (x) a`` for every basis element a."""
    if not ext.is_galois:
        raise NotGaloisError("translation identity needs a Galois extension")
    A = ext.a
    f = ext.field
    dA, dC = A.dim, ext.c.dim
    gamma = ext.gamma
    lefts = [ext.left_mult(k) for k in range(dA)]
    for a in range(dA):
        col = ext.base.coaction.column(a)
        acc = [f.zero] * ext.aba.dim
        for k in range(dA):
            for c in range(dC):
                x = col[k * dC + c]
                if x:
                    v = lefts[k].apply(gamma.column(c))
                    acc = [f.reduce(s + x * t) for s, t in zip(acc, v)]
        if acc != ext.tensor_class(A.unit, A.basis_vector(a)):
            return False
    return True
