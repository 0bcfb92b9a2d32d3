"""Entwining structures (A, C, psi) and the induced bimodule A (x) C.

``psi`` is a matrix from ``C (x) A`` (columns, index ``c * dim A + a``) to
``A (x) C`` (rows, index ``a * dim C + c``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algcore import Algebra, AxiomReport, Bimodule, Coalgebra, MAX_WITNESSES
from .exactlin import Matrix, MalformedInputError

__all__ = ["Entwining", "check_entwining", "ac_bimodule", "flip_entwining", "ENTWINING_AXIOMS"]

ENTWINING_AXIOMS = ("multiplicativity", "unit", "comultiplicativity", "counit")


@dataclass(eq=False)
class Entwining:
    a: Algebra
    c: Coalgebra
    psi: Matrix

    def __post_init__(self):
        if self.a.field != self.c.field:
            raise MalformedInputError("algebra and coalgebra live over different fields")
        n = self.a.dim * self.c.dim
        if self.psi.shape != (n, n):
            raise MalformedInputError(f"psi must be {n}x{n}, got {self.psi.shape}")

    @property
    def field(self):
        return self.a.field

    @cached_property
    def terms(self) -> list[list[list[tuple[int, int, object]]]]:
        """``terms[c][a]``: nonzero ``(a', c', coeff)`` of ``psi(c (x) a)``."""
        dA, dC = self.a.dim, self.c.dim
        rows = self.psi.rows
        out = []
        for c in range(dC):
            per_a = []
            for a in range(dA):
                col = c * dA + a
                per_a.append([(r // dC, r % dC, rows[r][col]) for r in range(dA * dC) if rows[r][col]])
            out.append(per_a)
        return out

    def apply(self, c: int, avec) -> list:
        """``psi(c_c (x) a)`` for a coefficient vector ``a``, as an A (x) C vector."""
        f = self.field
        dC = self.c.dim
        acc = [f.zero] * (self.a.dim * dC)
        for k, x in enumerate(avec):
            if x:
                for a2, c2, y in self.terms[c][k]:
                    acc[a2 * dC + c2] += x * y
        return [f.reduce(v) for v in acc]


def flip_entwining(a: Algebra, c: Coalgebra) -> Entwining:
    """``c (x) a -> a (x) c``; an entwining for every A and C."""
    dA, dC = a.dim, c.dim
    psi = Matrix.zeros(a.field, dA * dC, dA * dC)
    for ci in range(dC):
        for ai in range(dA):
            psi.rows[ai * dC + ci][ci * dA + ai] = a.field.one
    return Entwining(a, c, psi)


def check_entwining(e: Entwining, limit: int = MAX_WITNESSES) -> AxiomReport:
    """Check the four compatibility conditions on all basis elements.

    Witnesses are ``(c, i, j)`` for multiplicativity and ``(c, a)`` otherwise.
    """
    A, C = e.a, e.c
    f = e.field
    red = f.reduce
    dA, dC = A.dim, C.dim
    T = e.terms
    rep = AxiomReport()
    for name in ENTWINING_AXIOMS:
        rep.flags[name] = True

    # psi(c (x) a a') == a_alpha a'_beta (x) c^{alpha beta}
    for c in range(dC):
        for i in range(dA):
            for j in range(dA):
                lhs = e.apply(c, A.mult[i][j])
                rhs = [f.zero] * (dA * dC)
                for a1, c1, x in T[c][i]:
                    for a2, c2, y in T[c1][j]:
                        for k, z in A.sparse_mult[a1][a2]:
                            rhs[k * dC + c2] += x * y * z
                rep.record("multiplicativity", lhs == [red(v) for v in rhs], (c, i, j), limit)

    # psi(c (x) 1) == 1 (x) c
    for c in range(dC):
        want = [f.zero] * (dA * dC)
        for k, u in A.sparse_unit:
            want[k * dC + c] = u
        rep.record("unit", e.apply(c, A.unit) == want, (c,), limit)

    dd = C.comult
    for c in range(dC):
        for a in range(dA):
            # (id (x) Delta) psi(c (x) a), indexed (a', c1, c2)
            lhs = [f.zero] * (dA * dC * dC)
            for a1, c1, x in T[c][a]:
                d = dd[c1]
                for p in range(dC):
                    for q in range(dC):
                        if d[p][q]:
                            lhs[(a1 * dC + p) * dC + q] += x * d[p][q]
            # a_{beta alpha} (x) c1^alpha (x) c2^beta
            rhs = [f.zero] * (dA * dC * dC)
            d = dd[c]
            for p in range(dC):
                for q in range(dC):
                    w = d[p][q]
                    if not w:
                        continue
                    for a1, cq, y in T[q][a]:
                        for a2, cp, z in T[p][a1]:
                            rhs[(a2 * dC + cp) * dC + cq] += w * y * z
            rep.record("comultiplicativity", [red(v) for v in lhs] == [red(v) for v in rhs],
                       (c, a), limit)

            # a_alpha eps(c^alpha) == a eps(c)
            got = [f.zero] * dA
            for a1, c1, x in T[c][a]:
                got[a1] += x * C.counit[c1]
            want = [f.zero] * dA
            want[a] = C.counit[c]
            rep.record("counit", [red(v) for v in got] == want, (c, a), limit)
    return rep


def ac_bimodule(e: Entwining) -> Bimodule:
    """``A (x) C`` with ``l.(a (x) c) = la (x) c`` and ``(a (x) c).r = a psi(c (x) r)``.

    The axioms are not required here; compose with ``check_bimodule``.
    """
    A = e.a
    f = e.field
    dA, dC = A.dim, e.c.dim
    n = dA * dC
    left = []
    for lam in range(dA):
        m = Matrix.zeros(f, n, n)
        for a in range(dA):
            for k, x in A.sparse_mult[lam][a]:
                for c in range(dC):
                    m.rows[k * dC + c][a * dC + c] = x
        left.append(m)
    right = []
    for rho in range(dA):
        m = Matrix.zeros(f, n, n)
        for a in range(dA):
            for c in range(dC):
                col = a * dC + c
                for a1, c1, x in e.terms[c][rho]:
                    for k, y in A.sparse_mult[a][a1]:
                        r = k * dC + c1
                        m.rows[r][col] = f.reduce(m.rows[r][col] + x * y)
        right.append(m)
    return Bimodule(A, n, left, right, name="A(x)C")
