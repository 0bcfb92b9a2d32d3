"""Bar and entwined resolutions, Hom cochain complexes, and cohomology.

A :class:`FreeBimoduleComplex` stores, for each degree ``n``, only the
generator space ``G_n`` of the free bimodule ``A (x) G_n (x) A`` and the
boundary of every generator ``1 (x) g (x) 1`` as a list of terms
``(l, g', r, coeff)`` meaning ``coeff * e_l (x) g' (x) e_r``. That is all
``Hom_{A^e}(-, M) = maps(G_n, M)`` needs; full component matrices are built
on demand for the d^2 = 0 and exactness checks.

Cochain convention: ``(df)(x) = f(d x)`` with no extra sign.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field

from .algcore import (Algebra, Bimodule, enveloping, opposite, regular_bimodule,
                      restrict_bimodule, subalgebra)
from .entwine import Entwining, ac_bimodule, check_entwining
from .exactlin import Field, Matrix, MalformedInputError, SparseMatrix, kernel_basis, rank, solve, \
    solve_many
from .galois import GaloisExtension, NotGaloisError

__all__ = [
    "FreeBimoduleComplex", "CochainComplex", "CohomologyTable", "TheoremReport",
    "bar_resolution", "entwined_complex", "hom_free", "hom_bimodule", "cohomology_dims",
    "entwined_cohomology", "hochschild_cohomology", "is_projective_module", "verify_theorem",
    "invariants_dim", "transport_bimodule", "transport_cohomology", "augmented_homology",
    "check_d_squared", "projectivity_crosscheck", "resource_cap",
    "ResourceCapError", "InvalidComplexError", "ModuleMismatchError", "InvalidEntwiningError",
]

CAP_ENV = "ENTWINED_RESOURCE_CAP"
DEFAULT_CAP = 10 ** 6


class ResourceCapError(RuntimeError):
    pass


class InvalidComplexError(ValueError):
    pass


class ModuleMismatchError(ValueError):
    pass


class InvalidEntwiningError(ValueError):
    pass


def resource_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _guard(what: str, degree: int, size: int, cap: int | None):
    cap = resource_cap() if cap is None else cap
    if size > cap:
        raise ResourceCapError(f"{what} in degree {degree} has dimension {size}, above the cap {cap} "
                               f"(raise it with {CAP_ENV})")


# ------------------------------------------------------------------ complexes

@dataclass(eq=False)
class FreeBimoduleComplex:
    algebra: Algebra
    gen_dims: list[int]
    boundary: list[list[list[tuple]]]  # boundary[n][g] for n >= 1; boundary[0] unused
    target: Bimodule  # augmentation target
    augmentation: Matrix  # target.dim x gen_dims[0]

    @property
    def n_max(self) -> int:
        return len(self.gen_dims) - 1

    def component_dim(self, n: int) -> int:
        return self.algebra.dim ** 2 * self.gen_dims[n]

    def differential(self, n: int) -> SparseMatrix:
        """Full matrix of ``component_n -> component_{n-1}``; ``n = 0`` is the augmentation."""
        A = self.algebra
        f = A.field
        dA = A.dim
        G = self.gen_dims[n]
        sm = A.sparse_mult
        if n == 0:
            out = SparseMatrix(f, self.target.dim, self.component_dim(0))
            for g in range(G):
                img = self.augmentation.column(g)
                for l in range(dA):
                    lv = self.target.left[l].apply(img)
                    for r in range(dA):
                        v = self.target.right[r].apply(lv)
                        col = (l * G + g) * dA + r
                        for i, x in enumerate(v):
                            if x:
                                out.add(i, col, x)
            return out
        Gp = self.gen_dims[n - 1]
        out = SparseMatrix(f, self.component_dim(n - 1), self.component_dim(n))
        for g in range(G):
            for l in range(dA):
                for r in range(dA):
                    col = (l * G + g) * dA + r
                    for l2, g2, r2, x in self.boundary[n][g]:
                        for ll, y in sm[l][l2]:
                            for rr, z in sm[r2][r]:
                                out.add((ll * Gp + g2) * dA + rr, col, x * y * z)
        return out.prune()


def _digits(k: int, base: int, n: int) -> list[int]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        k, out[i] = divmod(k, base)
    return out


def _undigits(ds, base: int) -> int:
    k = 0
    for d in ds:
        k = k * base + d
    return k


def _free_complex(A: Algebra, dC: int, face0, n_max: int, target: Bimodule, aug: Matrix,
                  cap: int | None) -> FreeBimoduleComplex:
    """Generators ``c (x) a_1 (x) ... (x) a_n``; ``face0(c, a)`` gives the
    ``(l, c', coeff)`` terms of ``(1 (x) c) . a``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    dA = A.dim
    for n in range(n_max + 1):
        _guard("free bimodule component", n, dA ** (n + 2) * dC, cap)
    f = A.field
    red = f.reduce
    units = A.sparse_unit
    unit_pairs = [(l, r, x * y) for l, x in units for r, y in units]
    gen_dims = [dC * dA ** n for n in range(n_max + 1)]
    boundary: list[list[list[tuple]]] = [[]]
    for n in range(1, n_max + 1):
        per_gen = []
        sub = dA ** (n - 1)
        for g in range(gen_dims[n]):
            c, rest = divmod(g, dA ** n)
            a = _digits(rest, dA, n)
            acc: dict[tuple, object] = {}

            def put(l, g2, r, x):
                key = (l, g2, r)
                acc[key] = acc.get(key, 0) + x

            tail = _undigits(a[1:], dA)
            for l, c2, x in face0(c, a[0]):
                for r, u in units:
                    put(l, c2 * sub + tail, r, x * u)
            sign = 1
            for i in range(1, n):
                sign = -sign
                for k, x in A.sparse_mult[a[i - 1]][a[i]]:
                    g2 = c * sub + _undigits(a[:i - 1] + [k] + a[i + 1:], dA)
                    for l, r, u in unit_pairs:
                        put(l, g2, r, sign * x * u)
            sign = -sign
            g2 = c * sub + _undigits(a[:-1], dA)
            for l, u in units:
                put(l, g2, a[-1], sign * u)
            terms = []
            for (l, g2, r), x in acc.items():
                x = red(x)
                if x:
                    terms.append((l, g2, r, x))
            per_gen.append(terms)
        boundary.append(per_gen)
    return FreeBimoduleComplex(A, gen_dims, boundary, target, aug)


def bar_resolution(a: Algebra, n_max: int, cap: int | None = None) -> FreeBimoduleComplex:
    """``A (x) A^(x)n (x) A`` with the alternating face differential, augmented over A."""
    aug = Matrix.from_columns(a.field, a.dim, [a.unit])
    return _free_complex(a, 1, lambda c, x: [(x, 0, 1)], n_max, regular_bimodule(a), aug, cap)


def entwined_complex(e: Entwining, n_max: int, cap: int | None = None) -> FreeBimoduleComplex:
    """``(A (x) C) (x)_A B_*(A)``: the first face uses the psi-twisted right action."""
    A = e.a
    dA, dC = A.dim, e.c.dim
    T = e.terms
    aug = Matrix.zeros(A.field, dA * dC, dC)
    for c in range(dC):
        for k, u in A.sparse_unit:
            aug.rows[k * dC + c][c] = u
    return _free_complex(A, dC, lambda c, x: T[c][x], n_max, ac_bimodule(e), aug, cap)


def check_d_squared(cx: FreeBimoduleComplex) -> bool:
    """``d_{n-1} d_n == 0`` for all degrees, including the augmentation."""
    prev = cx.differential(0)
    for n in range(1, cx.n_max + 1):
        cur = cx.differential(n)
        if not (prev @ cur).is_zero():
            return False
        prev = cur
    return True


def augmented_homology(cx: FreeBimoduleComplex, up_to: int | None = None) -> list[int]:
    """Homology dimensions of the augmented complex at degrees ``-1 .. up_to``.

    ``up_to`` defaults to ``n_max - 1``, the last degree with an incoming map.
    """
    up_to = cx.n_max - 1 if up_to is None else up_to
    if up_to > cx.n_max - 1:
        raise ValueError("cannot see homology at the top degree of a truncated complex")
    ranks = [rank(cx.differential(n)) for n in range(up_to + 2)]
    out = [cx.target.dim - ranks[0]]
    for n in range(up_to + 1):
        out.append(cx.component_dim(n) - ranks[n] - ranks[n + 1])
    return out


# ------------------------------------------------------------------- cochains

@dataclass(eq=False)
class CochainComplex:
    field: Field
    dims: list[int]
    differentials: list[SparseMatrix]  # differentials[n]: C^n -> C^(n+1)


@dataclass(frozen=True)
class CohomologyTable:
    dims: tuple[int, ...]
    truncated_top: bool = False

    def __getitem__(self, n):
        return self.dims[n]

    def __len__(self):
        return len(self.dims)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "truncated_top": self.truncated_top}


def _lr_products(m: Bimodule) -> dict:
    cache: dict[tuple[int, int], list] = {}

    def get(l: int, r: int) -> list:
        key = (l, r)
        if key not in cache:
            p = m.left[l] @ m.right[r]
            cache[key] = [(i, j, x) for i, row in enumerate(p.rows) for j, x in enumerate(row) if x]
        return cache[key]

    return get


def hom_free(cx: FreeBimoduleComplex, m: Bimodule, cap: int | None = None) -> CochainComplex:
    """``Hom_{A^e}(complex, M)`` through ``Hom_{A^e}(A (x) G (x) A, M) = maps(G, M)``.

    A cochain in degree n is ``f(g)`` for every generator, stacked with index
    ``g * dim M + i``.
    """
    if m.algebra != cx.algebra:
        raise ModuleMismatchError("bimodule is over a different algebra than the complex")
    f = m.field
    dM = m.dim
    dims = [g * dM for g in cx.gen_dims]
    for n, d in enumerate(dims):
        _guard("cochain space", n, d, cap)
    lr = _lr_products(m)
    diffs = []
    for n in range(1, cx.n_max + 1):
        sm = SparseMatrix(f, dims[n], dims[n - 1])
        for g, terms in enumerate(cx.boundary[n]):
            row0 = g * dM
            for l, g2, r, x in terms:
                col0 = g2 * dM
                for i, j, y in lr(l, r):
                    sm.add(row0 + i, col0 + j, x * y)
        diffs.append(sm.prune())
    return CochainComplex(f, dims, diffs)


def cohomology_dims(cc: CochainComplex, check: bool = True) -> CohomologyTable:
    """``h^n = dim ker d^n - rank d^(n-1)``; the top degree has no outgoing map."""
    ds = cc.differentials
    if len(ds) != len(cc.dims) - 1:
        raise InvalidComplexError("need one differential between consecutive degrees")
    for n, d in enumerate(ds):
        if d.shape != (cc.dims[n + 1], cc.dims[n]):
            raise InvalidComplexError(f"differential {n} has shape {d.shape}")
    if check:
        for n in range(1, len(ds)):
            if not (ds[n] @ ds[n - 1]).is_zero():
                raise InvalidComplexError(f"d^{n} d^{n - 1} is not zero")
    ranks = [d.rank() for d in ds]
    out = []
    for n, dim in enumerate(cc.dims):
        out_rank = ranks[n] if n < len(ranks) else 0
        in_rank = ranks[n - 1] if n > 0 else 0
        out.append(dim - out_rank - in_rank)
    return CohomologyTable(tuple(out), truncated_top=True)


def _truncate(t: CohomologyTable, n_max: int) -> CohomologyTable:
    return CohomologyTable(t.dims[:n_max + 1], truncated_top=False)


def entwined_cohomology(e: Entwining, m: Bimodule, n_max: int, cap: int | None = None) -> CohomologyTable:
    """``H_psi^n(A, M)`` for ``n = 0 .. n_max``."""
    rep = check_entwining(e)
    if not rep.ok:
        raise InvalidEntwiningError(f"entwining axioms fail: {rep.flags}")
    cx = entwined_complex(e, n_max + 1, cap)
    return _truncate(cohomology_dims(hom_free(cx, m, cap)), n_max)


def hochschild_cohomology(b: Algebra, m: Bimodule, n_max: int, cap: int | None = None) -> CohomologyTable:
    """``HH^n(B, M)`` for ``n = 0 .. n_max`` from the bar resolution."""
    if m.algebra != b:
        raise ModuleMismatchError("bimodule is not over the given algebra")
    cx = bar_resolution(b, n_max + 1, cap)
    return _truncate(cohomology_dims(hom_free(cx, m, cap)), n_max)


def invariants_dim(m: Bimodule) -> int:
    """``dim {x : b x = x b for all b}``, i.e. ``HH^0`` computed directly."""
    f = m.field
    rows = []
    for L, R in zip(m.left, m.right):
        rows.extend((L - R).rows)
    if not rows:
        return m.dim
    return m.dim - rank(Matrix(f, rows, m.dim))


# ------------------------------------------------------------ generic hom

def _hom_constraints(f: Field, pairs, dP: int, dM: int) -> Matrix:
    """Rows of ``f XP - XM f = 0`` for each ``(XP, XM)``, with ``f[i][p]`` at ``i * dP + p``."""
    rows = []
    for XP, XM in pairs:
        for i in range(dM):
            for p in range(dP):
                row = [f.zero] * (dM * dP)
                for q in range(dP):
                    x = XP.rows[q][p]
                    if x:
                        row[i * dP + q] += x
                for q in range(dM):
                    x = XM.rows[i][q]
                    if x:
                        row[q * dP + p] -= x
                rows.append([f.reduce(x) for x in row])
    return Matrix(f, rows, dM * dP) if rows else Matrix.zeros(f, 0, dM * dP)


def _as_maps(f: Field, basis: Matrix, dM: int, dP: int) -> list[Matrix]:
    return [Matrix(f, [col[i * dP:(i + 1) * dP] for i in range(dM)], dP) for col in basis.columns()]


def hom_bimodule(p: Bimodule, m: Bimodule) -> list[Matrix]:
    """Basis of the bimodule maps ``P -> M``, each a ``dim M x dim P`` matrix."""
    if p.algebra != m.algebra:
        raise ModuleMismatchError("bimodules over different algebras")
    f = m.field
    if p.dim == 0 or m.dim == 0:
        return []
    pairs = list(zip(p.left, m.left)) + list(zip(p.right, m.right))
    return _as_maps(f, kernel_basis(_hom_constraints(f, pairs, p.dim, m.dim)), m.dim, p.dim)


def transport_bimodule(ext: GaloisExtension, m: Bimodule) -> Bimodule:
    """``N = Hom_A(A (x)_B A, M)`` (left A-linear maps) as an A-bimodule:
    ``(a.k)(p) = k(p a)`` and ``(k.a)(p) = k(p) a``.

    ``Hom_{A^e}((A (x)_B A) (x) A^(x)n (x) A, M) = maps(A^(x)n, N)`` compatibly
    with the differentials, so ``HH^*(A, N)`` is the cohomology of the
    resolution of ``A (x)_B A`` obtained from the bar resolution.
    """
    if m.algebra != ext.a:
        raise ModuleMismatchError("bimodule is not over the extension's algebra")
    A = ext.a
    f = A.field
    dP, dM = ext.aba.dim, m.dim
    lefts = [ext.left_mult(j) for j in range(A.dim)]
    rights = [ext.right_mult(j) for j in range(A.dim)]
    K = kernel_basis(_hom_constraints(f, list(zip(lefts, m.left)), dP, dM))
    maps = _as_maps(f, K, dM, dP)

    def flat(mat: Matrix) -> list:
        return [x for row in mat.rows for x in row]

    def coords(images: list[Matrix]) -> Matrix:
        rhs = Matrix.from_columns(f, dM * dP, [flat(x) for x in images])
        X = solve_many(K, rhs)
        if X is None:
            raise RuntimeError("action does not preserve left A-linear maps")
        return X

    dN = K.ncols
    if dN == 0:
        zero = [Matrix.zeros(f, 0, 0) for _ in range(A.dim)]
        return Bimodule(A, 0, zero, list(zero), name="Hom_A(A(x)_BA,M)")
    left = [coords([k @ rights[j] for k in maps]) for j in range(A.dim)]
    right = [coords([m.right[j] @ k for k in maps]) for j in range(A.dim)]
    return Bimodule(A, dN, left, right, name="Hom_A(A(x)_BA,M)")


def transport_cohomology(ext: GaloisExtension, m: Bimodule, n_max: int, cap: int | None = None) -> CohomologyTable:
    """``Ext_{A^e}^*(A (x)_B A, M)`` without using psi or beta."""
    return hochschild_cohomology(ext.a, transport_bimodule(ext, m), n_max, cap)


# ------------------------------------------------------------ projectivity

def _module_data(mod: Bimodule, side: str) -> tuple[Algebra, list[Matrix]]:
    A = mod.algebra
    if side == "left":
        return A, mod.left
    if side == "right":
        return opposite(A), mod.right
    if side == "bi":
        n = A.dim
        return enveloping(A), [mod.left[i] @ mod.right[j] for i in range(n) for j in range(n)]
    raise ValueError(f"side must be left, right or bi, not {side!r}")


def _generators(f: Field, acts: list[Matrix], dim: int) -> list[int]:
    """Standard basis vectors generating the module, chosen greedily."""
    gens: list[int] = []
    span: list[list] = []
    r = 0
    for t in range(dim):
        if span:
            e = [f.one if i == t else f.zero for i in range(dim)]
            if rank(Matrix.from_columns(f, dim, span + [e])) == r:
                continue
        gens.append(t)
        span.extend(a.column(t) for a in acts)
        r = rank(Matrix.from_columns(f, dim, span))
    return gens


def is_projective_left(R: Algebra, acts: list[Matrix]) -> bool:
    """Whether the left R-module given by ``acts`` is projective.

    Picks generators ``m_1..m_k``, forms the cover ``pi: R^k -> M`` and
    searches for an R-linear section ``s`` with ``pi s = id``: ``s`` is fixed
    by the images ``X_t = s(m_t)``, subject to ``pi X_t = m_t`` and to the
    induced map ``R^k -> R^k`` killing ``ker pi``.
    """
    f = R.field
    if len(acts) != R.dim:
        raise ModuleMismatchError("one action matrix per algebra basis element is needed")
    dim = acts[0].nrows if acts else 0
    if dim == 0:
        return True
    gens = _generators(f, acts, dim)
    k, dR = len(gens), R.dim
    dF = k * dR
    pi = Matrix.from_columns(f, dim, [acts[i].column(t) for t in gens for i in range(dR)])
    K = kernel_basis(pi)
    regular = R.left_matrices  # block of the action on each copy of R
    nvar = k * dF
    rows = []
    rhs = []
    for kappa in K.columns():
        # sum_{t,i} kappa[t,i] * e_i . X_t = 0
        block_rows = [[f.zero] * nvar for _ in range(dF)]
        for t in range(k):
            for i in range(dR):
                x = kappa[t * dR + i]
                if not x:
                    continue
                L = regular[i]
                for s in range(k):  # output copy s, variable copy s of X_t
                    for o in range(dR):
                        Lo = L.rows[o]
                        row = block_rows[s * dR + o]
                        for q in range(dR):
                            if Lo[q]:
                                row[t * dF + s * dR + q] += x * Lo[q]
        for row in block_rows:
            rows.append([f.reduce(x) for x in row])
            rhs.append(f.zero)
    for t, g in enumerate(gens):
        for o in range(dim):
            row = [f.zero] * nvar
            for q in range(dF):
                row[t * dF + q] = pi.rows[o][q]
            rows.append(row)
            rhs.append(f.one if o == g else f.zero)
    return solve(Matrix(f, rows, nvar), rhs) is not None


def is_projective_module(mod: Bimodule, side: str = "left") -> bool:
    """Projectivity of ``mod`` as a left, right, or bi-module over its algebra.

    Over a field, a finite-dimensional module is flat exactly when it is
    projective, which is what this decides.
    """
    R, acts = _module_data(mod, side)
    return is_projective_left(R, acts)


# ---------------------------------------------------------------- theorem

@dataclass
class TheoremReport:
    h0_psi: int
    h0_B: int
    flat_left: bool
    flat_right: bool
    table_psi: CohomologyTable
    table_hh: CohomologyTable
    h0_match: bool = dc_field(init=False)
    tables_match: bool | None = dc_field(init=False)

    def __post_init__(self):
        self.h0_match = self.h0_psi == self.h0_B
        if self.flat_left or self.flat_right:
            self.tables_match = self.table_psi.dims == self.table_hh.dims
        else:
            self.tables_match = None

    @property
    def verified(self) -> bool:
        return self.h0_match and self.tables_match is not False

    def to_dict(self) -> dict:
        return {
            "h0_psi": self.h0_psi, "h0_B": self.h0_B, "h0_match": self.h0_match,
            "flat_left": self.flat_left, "flat_right": self.flat_right,
            "table_psi": list(self.table_psi.dims), "table_hh": list(self.table_hh.dims),
            "tables_match": self.tables_match, "verified": self.verified,
        }


def verify_theorem(ext: GaloisExtension, m: Bimodule, n_max: int, cap: int | None = None) -> TheoremReport:
    """Compare ``H_psi^*(A, M)`` with ``HH^*(B, M)`` for M restricted to B.

    Degree 0 must always agree. Full tables are compared only if A is flat
    (equivalently projective) over B on the left or on the right; otherwise
    ``tables_match`` is None.
    """
    if not ext.is_galois:
        raise NotGaloisError("the comparison needs a Galois extension")
    if m.algebra != ext.a:
        raise ModuleMismatchError("bimodule is not over the extension's algebra")
    mb = restrict_bimodule(m, ext.b_basis)
    table_psi = entwined_cohomology(ext.entwining, m, n_max, cap)
    table_hh = hochschild_cohomology(mb.algebra, mb, n_max, cap)
    a_over_b = restrict_bimodule(regular_bimodule(ext.a), ext.b_basis)
    return TheoremReport(
        h0_psi=table_psi[0], h0_B=invariants_dim(mb),
        flat_left=is_projective_module(a_over_b, "left"),
        flat_right=is_projective_module(a_over_b, "right"),
        table_psi=table_psi, table_hh=table_hh,
    )


@dataclass
class CrossCheck:
    projective: bool
    h1: list[int]

    @property
    def coherent(self) -> bool:
        return not self.projective or all(h == 0 for h in self.h1)


def projectivity_crosscheck(e: Entwining, modules: list[Bimodule], cap: int | None = None) -> CrossCheck:
    """If A (x) C is a projective bimodule then ``H_psi^1(A, M)`` vanishes.

    Reported on the sampled ``modules`` only; the converse needs all M.
    """
    proj = is_projective_module(ac_bimodule(e), "bi")
    h1 = [entwined_cohomology(e, m, 1, cap)[1] for m in modules]
    return CrossCheck(proj, h1)
