"""Small validated examples: group algebras, group-like coalgebras,
quotient-group coactions, Sweedler's four-dimensional algebra, and controls."""
from __future__ import annotations

from dataclasses import dataclass

from .algcore import Algebra, Coalgebra, check_algebra, check_coalgebra
from .exactlin import Field, GF, Matrix, MalformedInputError, QQ
from .galois import ComoduleAlgebra, check_coaction

__all__ = [
    "GroupPresentation", "cyclic_group", "group_algebra", "grouplike_coalgebra",
    "quotient_coaction", "sweedler_h4", "trivial_extension", "non_galois_example",
    "truncated_polynomial", "UnsupportedCharacteristicError", "ZOO", "build",
]


class UnsupportedCharacteristicError(ValueError):
    pass


@dataclass(frozen=True)
class GroupPresentation:
    """A finite group by its Cayley table; element 0 is the identity."""

    order: int
    cayley: tuple[tuple[int, ...], ...]
    subgroup: tuple[int, ...] | None = None

    def validate(self):
        n = self.order
        t = self.cayley
        if len(t) != n or any(len(r) != n for r in t):
            raise MalformedInputError(f"Cayley table must be {n}x{n}")
        if any(not 0 <= x < n for r in t for x in r):
            raise MalformedInputError("Cayley table entry out of range")
        if any(t[0][i] != i or t[i][0] != i for i in range(n)):
            raise MalformedInputError("element 0 is not the identity")
        for i in range(n):
            if sorted(t[i]) != list(range(n)):
                raise MalformedInputError(f"row {i} is not a permutation; no inverses")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[t[i][j]][k] != t[i][t[j][k]]:
                        raise MalformedInputError(f"table is not associative at {(i, j, k)}")

    def inverse(self, i: int) -> int:
        return self.cayley[i].index(0)

    def validate_normal_subgroup(self):
        if self.subgroup is None:
            raise MalformedInputError("no subgroup given")
        s = set(self.subgroup)
        t = self.cayley
        if 0 not in s or any(t[i][j] not in s for i in s for j in s):
            raise MalformedInputError("subgroup is not closed or misses the identity")
        for g in range(self.order):
            gi = self.inverse(g)
            if any(t[t[g][n]][gi] not in s for n in s):
                raise MalformedInputError("subgroup is not normal")

    def cosets(self) -> list[int]:
        """Coset index of every element, numbered by first appearance."""
        s = sorted(set(self.subgroup))
        label = [-1] * self.order
        nxt = 0
        for g in range(self.order):
            if label[g] < 0:
                for n in s:
                    label[self.cayley[n][g]] = nxt
                nxt += 1
        return label


def cyclic_group(n: int, subgroup=None) -> GroupPresentation:
    return GroupPresentation(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)),
                             tuple(subgroup) if subgroup is not None else None)


def group_algebra(g: GroupPresentation, field: Field) -> Algebra:
    g.validate()
    n = g.order
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            v[g.cayley[i][j]] = 1
            row.append(v)
        mult.append(row)
    return Algebra(field, n, mult, [1] + [0] * (n - 1), name=f"k[G{n}]")


def grouplike_coalgebra(n: int, field: Field) -> Coalgebra:
    if n < 1:
        raise MalformedInputError("a group-like coalgebra needs at least one element")
    comult = []
    for i in range(n):
        d = [[0] * n for _ in range(n)]
        d[i][i] = 1
        comult.append(d)
    return Coalgebra(field, n, comult, [1] * n, name=f"grouplike({n})")


def truncated_polynomial(field: Field, degree: int = 2) -> Algebra:
    """``k[x]/(x^degree)`` on the basis ``1, x, ..., x^(degree-1)``."""
    n = degree
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i + j < n:
                v[i + j] = 1
            row.append(v)
        mult.append(row)
    return Algebra(field, n, mult, [1] + [0] * (n - 1), name=f"k[x]/(x^{n})")


def quotient_coaction(g: GroupPresentation, field: Field) -> ComoduleAlgebra:
    """``A = k[G]``, ``C = k[G/N]`` group-like, ``delta(x) = x (x) xN``."""
    g.validate()
    g.validate_normal_subgroup()
    label = g.cosets()
    dC = max(label) + 1
    A = group_algebra(g, field)
    C = grouplike_coalgebra(dC, field)
    d = Matrix.zeros(field, g.order * dC, g.order)
    for x in range(g.order):
        d.rows[x * dC + label[x]][x] = field.one
    return ComoduleAlgebra(A, C, d)


def sweedler_h4(field: Field) -> ComoduleAlgebra:
    """Sweedler's algebra on the basis ``1, g, x, gx`` coacting on itself."""
    if field.characteristic == 2:
        raise UnsupportedCharacteristicError("Sweedler's algebra needs characteristic other than 2")
    # products of basis words; entries are (sign, index)
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (1, 0), (1, 2): (1, 3), (1, 3): (1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): None, (2, 3): None,
        (3, 0): (1, 3), (3, 1): (-1, 2), (3, 2): None, (3, 3): None,
    }
    mult = []
    for i in range(4):
        row = []
        for j in range(4):
            v = [0] * 4
            if table[i, j] is not None:
                s, k = table[i, j]
                v[k] = s
            row.append(v)
        mult.append(row)
    A = Algebra(field, 4, mult, [1, 0, 0, 0], name="H4")

    def tens(*pairs):
        d = [[0] * 4 for _ in range(4)]
        for p, q in pairs:
            d[p][q] += 1
        return d

    # Delta 1 = 1x1, Delta g = gxg, Delta x = x(x)1 + g(x)x, Delta gx = gx(x)g + 1(x)gx
    C = Coalgebra(field, 4, [tens((0, 0)), tens((1, 1)), tens((2, 0), (1, 2)), tens((3, 1), (0, 3))],
                  [1, 1, 0, 0], name="H4")
    return ComoduleAlgebra(A, C, C.delta_matrix)


def trivial_extension(a: Algebra) -> ComoduleAlgebra:
    """``C = k`` and ``delta(a) = a (x) 1``."""
    C = grouplike_coalgebra(1, a.field)
    return ComoduleAlgebra(a, C, Matrix.identity(a.field, a.dim))


def non_galois_example(field: Field) -> ComoduleAlgebra:
    """``k[C2]`` with the constant coaction ``a -> a (x) c_0`` into two group-likes."""
    A = group_algebra(cyclic_group(2), field)
    C = grouplike_coalgebra(2, field)
    d = Matrix.zeros(field, 4, 2)
    for a in range(2):
        d.rows[a * 2][a] = field.one
    return ComoduleAlgebra(A, C, d)


def _validated(ca: ComoduleAlgebra) -> ComoduleAlgebra:
    for rep in (check_algebra(ca.a), check_coalgebra(ca.c), check_coaction(ca)):
        if not rep.ok:
            raise MalformedInputError(f"zoo construction failed its checker: {rep.flags}")
    return ca


# name -> (constructor taking a field, default field)
ZOO = {
    "c4-c2": (lambda f: quotient_coaction(cyclic_group(4, (0, 2)), f), QQ),
    "c4-c2-f2": (lambda f: quotient_coaction(cyclic_group(4, (0, 2)), f), GF(2)),
    "c4-trivial-subgroup": (lambda f: quotient_coaction(cyclic_group(4, (0,)), f), QQ),
    "c4-whole-group": (lambda f: quotient_coaction(cyclic_group(4, (0, 1, 2, 3)), f), QQ),
    "sweedler-h4": (sweedler_h4, QQ),
    "dual-numbers": (lambda f: trivial_extension(truncated_polynomial(f)), QQ),
    "dual-numbers-f2": (lambda f: trivial_extension(truncated_polynomial(f)), GF(2)),
    "non-galois": (non_galois_example, QQ),
}


def build(name: str, field: Field | None = None) -> ComoduleAlgebra:
    """Construct a named example, validated by all structural checkers."""
    try:
        ctor, default = ZOO[name]
    except KeyError:
        raise KeyError(f"unknown zoo example {name!r}; choose from {', '.join(ZOO)}") from None
    return _validated(ctor(field or default))
