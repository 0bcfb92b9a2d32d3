"""Seeded random search for counterexamples to the Galois-pipeline properties.

Every trial builds a comodule algebra from a small :class:`Case` record:
an algebra family (cyclic group algebra, truncated polynomials, or a product
of copies of the field), a grading by group-like elements, and optional
random changes of basis on A, on the grading, and on C. Cases that turn out
Galois are checked for the entwining axioms of the canonical psi, the
bimodule property of beta, the translation identity, and degree-0 agreement
of the two cohomologies on a random bimodule. A failing case is shrunk by
dropping ingredients while it keeps failing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Callable

from .algcore import (Algebra, Bimodule, Coalgebra, check_bimodule, regular_bimodule,
                      restrict_bimodule)
from .entwine import Entwining, ac_bimodule, check_entwining
from .exactlin import Field, Matrix, QQ, image_basis, quotient_basis, solve_many
from .fileformat import StructureFile, emit_structure
from .galois import (ComoduleAlgebra, GaloisExtension, check_beta_bimodule,
                     check_translation_identity, galois_extension)
from .homology import entwined_cohomology, invariants_dim
from .zoo import cyclic_group, group_algebra, grouplike_coalgebra, truncated_polynomial

__all__ = ["Case", "FuzzReport", "fuzz", "random_case", "build_case", "case_bimodule",
           "shrink", "random_bimodule", "random_invertible", "check_case", "PROPERTIES"]

PROPERTIES = ("entwining_axioms", "ac_bimodule", "beta_bimodule", "translation_identity",
              "h0_agreement")


def random_invertible(rng: random.Random, n: int, field: Field) -> Matrix:
    """Product of random unit lower and unit upper triangular matrices (determinant 1)."""
    lo = Matrix.identity(field, n)
    up = Matrix.identity(field, n)
    for i in range(n):
        for j in range(i):
            lo.rows[i][j] = field(rng.randint(-2, 2))
            up.rows[j][i] = field(rng.randint(-2, 2))
    return lo @ up


def _inverse(m: Matrix) -> Matrix:
    inv = solve_many(m, Matrix.identity(m.field, m.nrows))
    assert inv is not None
    return inv


def _kron(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([f.reduce(x * y) for x in ra for y in rb])
    return Matrix(f, rows, a.ncols * b.ncols)


# ---------------------------------------------------------------- structures

def diagonal_algebra(field: Field, n: int) -> Algebra:
    """``k x ... x k``: orthogonal idempotents."""
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i == j:
                v[i] = 1
            row.append(v)
        mult.append(row)
    return Algebra(field, n, mult, [1] * n, name=f"k^{n}")


def change_algebra_basis(a: Algebra, t: Matrix) -> Algebra:
    """Structure constants in the basis given by the columns of ``t``."""
    ti = _inverse(t)
    cols = t.columns()
    n = a.dim
    mult = [[ti.apply(a.multiply(cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return Algebra(a.field, n, mult, ti.apply(a.unit), name=a.name)


def change_coalgebra_basis(c: Coalgebra, u: Matrix) -> Coalgebra:
    f = c.field
    ui = _inverse(u)
    n = c.dim
    big = _kron(ui, ui)
    delta = big @ c.delta_matrix @ u
    comult = [[[delta.rows[j * n + k][i] for k in range(n)] for j in range(n)] for i in range(n)]
    counit = Matrix(f, [c.counit], n) @ u
    return Coalgebra(f, n, comult, counit.rows[0], name=c.name)


@dataclass(frozen=True)
class Case:
    family: str  # "group", "poly" or "diag"
    dim_a: int
    dim_c: int
    grading: tuple[int, ...]  # degree of each grading-basis vector
    grading_seed: int | None = None  # random grading basis; None is the standard basis
    algebra_seed: int | None = None  # random change of basis on A
    coalgebra_seed: int | None = None  # random change of basis on C
    bimodule_seed: int | None = None  # random bimodule; None is the regular one


def random_case(rng: random.Random, dim_a: int, dim_c: int, prefer_hom: bool = False) -> Case:
    family = rng.choice(["group", "poly", "diag"] if not prefer_hom else ["group"])
    if family == "group" and dim_a % dim_c == 0 and (prefer_hom or rng.random() < 0.5):
        grading = tuple(x % dim_c for x in range(dim_a))
        gseed = None
    else:
        grading = tuple(rng.randrange(dim_c) for _ in range(dim_a))
        gseed = rng.getrandbits(32) if rng.random() < 0.5 else None

    def maybe():
        return rng.getrandbits(32) if rng.random() < 0.5 else None

    return Case(family, dim_a, dim_c, grading, gseed, maybe(), maybe(), rng.getrandbits(32))


def build_case(case: Case, field: Field = QQ) -> ComoduleAlgebra:
    n, m = case.dim_a, case.dim_c
    if case.family == "group":
        A = group_algebra(cyclic_group(n), field)
    elif case.family == "poly":
        A = truncated_polynomial(field, n)
    elif case.family == "diag":
        A = diagonal_algebra(field, n)
    else:
        raise ValueError(f"unknown family {case.family!r}")
    C = grouplike_coalgebra(m, field)
    S = (random_invertible(random.Random(case.grading_seed), n, field)
         if case.grading_seed is not None else Matrix.identity(field, n))
    Si = _inverse(S)
    # delta(v) = sum_c P_c v (x) c with P_c = S D_c S^-1
    delta = Matrix.zeros(field, n * m, n)
    for c in range(m):
        D = Matrix.zeros(field, n, n)
        for i, deg in enumerate(case.grading):
            if deg == c:
                D.rows[i][i] = field.one
        P = S @ D @ Si
        for k in range(n):
            for j in range(n):
                delta.rows[k * m + c][j] = P.rows[k][j]
    if case.algebra_seed is not None:
        T = random_invertible(random.Random(case.algebra_seed), n, field)
        A = change_algebra_basis(A, T)
        delta = _kron(_inverse(T), Matrix.identity(field, m)) @ delta @ T
    if case.coalgebra_seed is not None:
        U = random_invertible(random.Random(case.coalgebra_seed), m, field)
        C = change_coalgebra_basis(C, U)
        delta = _kron(Matrix.identity(field, n), _inverse(U)) @ delta
    return ComoduleAlgebra(A, C, delta)


# ----------------------------------------------------------------- bimodules

def free_bimodule(a: Algebra) -> Bimodule:
    """``A (x) A`` with the outer actions."""
    f = a.field
    ident = Matrix.identity(f, a.dim)
    return Bimodule(a, a.dim ** 2, [_kron(l, ident) for l in a.left_matrices],
                    [_kron(ident, r) for r in a.right_matrices], name="A(x)A")


def sub_bimodule(m: Bimodule, v: list) -> Bimodule:
    """The sub-bimodule generated by ``v``."""
    f = m.field
    gens = [L.apply(R.apply(v)) for L in m.left for R in m.right]
    basis = image_basis(Matrix.from_columns(f, m.dim, gens))
    if basis.ncols == 0:
        return Bimodule(m.algebra, 0, [Matrix.zeros(f, 0, 0)] * m.algebra.dim,
                        [Matrix.zeros(f, 0, 0)] * m.algebra.dim)

    def restrict(X):
        out = solve_many(basis, X @ basis)
        assert out is not None
        return out

    return Bimodule(m.algebra, basis.ncols, [restrict(X) for X in m.left], [restrict(X) for X in m.right])


def quotient_bimodule(m: Bimodule, v: list) -> Bimodule:
    """``M / <v>`` for the sub-bimodule generated by ``v``."""
    f = m.field
    gens = [L.apply(R.apply(v)) for L in m.left for R in m.right]
    reps, proj = quotient_basis(m.dim, Matrix.from_columns(f, m.dim, gens))
    sec = Matrix.zeros(f, m.dim, len(reps))
    for k, i in enumerate(reps):
        sec.rows[i][k] = f.one
    return Bimodule(m.algebra, len(reps), [proj @ X @ sec for X in m.left],
                    [proj @ X @ sec for X in m.right])


def random_bimodule(a: Algebra, rng: random.Random, extras: tuple[Bimodule, ...] = (),
                    max_dim: int = 24) -> Bimodule:
    """A random bimodule: direct sum of regular, free, sub- and quotient pieces,
    in a random basis."""
    f = a.field
    ambient = [regular_bimodule(a), free_bimodule(a), *extras]
    out = None
    for _ in range(rng.randint(1, 2)):
        amb = rng.choice(ambient)
        kind = rng.choice(["whole", "sub", "quotient"])
        if kind == "whole":
            piece = amb
        else:
            v = [f(rng.randint(-2, 2)) for _ in range(amb.dim)]
            piece = sub_bimodule(amb, v) if kind == "sub" else quotient_bimodule(amb, v)
        if piece.dim == 0:
            continue
        if out is not None and out.dim + piece.dim > max_dim:
            break
        out = piece if out is None else out.direct_sum(piece)
    if out is None:
        out = regular_bimodule(a)
    if rng.random() < 0.5:
        t = random_invertible(rng, out.dim, f)
        out = out.change_basis(t, _inverse(t))
    return out


def case_bimodule(case: Case, ext: GaloisExtension) -> Bimodule:
    if case.bimodule_seed is None:
        return regular_bimodule(ext.a)
    return random_bimodule(ext.a, random.Random(case.bimodule_seed), max_dim=12)


# ---------------------------------------------------------------- properties

def check_case(ext: GaloisExtension, m: Bimodule) -> list[str]:
    """Names of the properties that fail on a Galois extension."""
    failed = []
    e = ext.entwining
    if not check_entwining(e).ok:
        failed.append("entwining_axioms")
        return failed
    if not check_bimodule(ac_bimodule(e)).ok:
        failed.append("ac_bimodule")
    if not check_beta_bimodule(ext):
        failed.append("beta_bimodule")
    if not check_translation_identity(ext):
        failed.append("translation_identity")
    h0_psi = entwined_cohomology(e, m, 0)[0]
    if h0_psi != invariants_dim(restrict_bimodule(m, ext.b_basis)):
        failed.append("h0_agreement")
    return failed


def shrink(case: Case, fails: Callable[[Case], bool]) -> Case:
    """Greedily drop ingredients of ``case`` while ``fails`` stays true."""
    steps = [
        lambda c: replace(c, bimodule_seed=None),
        lambda c: replace(c, algebra_seed=None),
        lambda c: replace(c, coalgebra_seed=None),
        lambda c: replace(c, grading_seed=None),
        lambda c: replace(c, grading=tuple(sorted(c.grading))),
    ]
    changed = True
    while changed:
        changed = False
        for step in steps:
            cand = step(case)
            if cand != case and fails(cand):
                case = cand
                changed = True
    return case


@dataclass
class FuzzReport:
    dim_a: int
    dim_c: int
    trials: int
    seed: int
    field: Field
    mode: str
    galois: int = 0
    flagged: int = 0
    skipped: int = 0
    findings: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.mode == "perturb":
            return self.flagged >= 0.95 * (self.trials - self.skipped)
        return not self.findings

    def to_dict(self) -> dict:
        return {"dims": [self.dim_a, self.dim_c], "trials": self.trials, "seed": self.seed,
                "field": str(self.field), "mode": self.mode, "galois": self.galois,
                "flagged": self.flagged, "skipped": self.skipped, "findings": self.findings,
                "ok": self.ok}


def _structure(case: Case, field: Field) -> dict:
    ca = build_case(case, field)
    sf = StructureFile(field, ca.a, ca.c, ca.coaction)
    ext = galois_extension(ca)
    if ext.is_galois:
        sf.bimodule = case_bimodule(case, ext)
    return emit_structure(sf)


def _perturb(e: Entwining, rng: random.Random) -> Entwining:
    f = e.field
    psi = Matrix(f, [list(r) for r in e.psi.rows], e.psi.ncols)
    i, j = rng.randrange(psi.nrows), rng.randrange(psi.ncols)
    if f.is_prime:
        delta = rng.randrange(1, f.p)
    else:
        delta = rng.choice([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)])
    psi.rows[i][j] = f.reduce(psi.rows[i][j] + delta)
    return Entwining(e.a, e.c, psi)


def fuzz(dim_a: int, dim_c: int, trials: int, seed: int, field: Field = QQ,
         perturb: bool = False, check: Callable = check_case, max_attempts: int = 50) -> FuzzReport:
    """Run ``trials`` seeded trials; each trial has its own generator, so
    reports do not depend on execution order.

    In perturb mode each trial takes a Galois case, changes one entry of its
    canonical psi, and counts the trial as flagged when some entwining axiom
    then fails.
    """
    report = FuzzReport(dim_a, dim_c, trials, seed, field, "perturb" if perturb else "properties")
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        if perturb:
            ext = None
            for _ in range(max_attempts):
                cand = galois_extension(build_case(random_case(rng, dim_a, dim_c, prefer_hom=True), field))
                if cand.is_galois:
                    ext = cand
                    break
            if ext is None:
                report.skipped += 1
                continue
            report.galois += 1
            if not check_entwining(_perturb(ext.entwining, rng)).ok:
                report.flagged += 1
            continue
        case = random_case(rng, dim_a, dim_c)
        ext = galois_extension(build_case(case, field))
        if not ext.is_galois:
            continue
        report.galois += 1
        failed = check(ext, case_bimodule(case, ext))
        for prop in failed:
            def still_fails(c: Case, prop=prop) -> bool:
                x = galois_extension(build_case(c, field))
                return x.is_galois and prop in check(x, case_bimodule(c, x))

            small = shrink(case, still_fails)
            report.findings.append({"trial": t, "property": prop, "case": _case_dict(small),
                                    "structure": _structure(small, field)})
    return report


def _case_dict(case: Case) -> dict:
    return {"family": case.family, "dim_a": case.dim_a, "dim_c": case.dim_c,
            "grading": list(case.grading), "grading_seed": case.grading_seed,
            "algebra_seed": case.algebra_seed, "coalgebra_seed": case.coalgebra_seed,
            "bimodule_seed": case.bimodule_seed}
