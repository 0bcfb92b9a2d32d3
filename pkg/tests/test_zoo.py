import pytest

from entwined import zoo
from entwined.algcore import check_algebra, check_coalgebra
from entwined.exactlin import GF, QQ, MalformedInputError
from entwined.galois import check_coaction, galois_extension
from entwined.homology import is_projective_module
from entwined.algcore import regular_bimodule, restrict_bimodule


def test_group_algebras():
    a = zoo.group_algebra(zoo.cyclic_group(2), QQ)
    assert a.dim == 2 and a.is_commutative()
    assert zoo.group_algebra(zoo.cyclic_group(4), GF(2)).dim == 4


def test_bad_tables_rejected():
    bad = zoo.GroupPresentation(3, ((0, 1, 2), (1, 0, 2), (2, 2, 0)))
    with pytest.raises(MalformedInputError):
        zoo.group_algebra(bad, QQ)
    # a Latin square with identity 0 that is not associative
    nonassoc = zoo.GroupPresentation(5, ((0, 1, 2, 3, 4), (1, 0, 3, 4, 2), (2, 4, 0, 1, 3),
                                         (3, 2, 4, 0, 1), (4, 3, 1, 2, 0)))
    with pytest.raises(MalformedInputError, match="associative"):
        nonassoc.validate()


def test_grouplike():
    assert zoo.grouplike_coalgebra(1, QQ).dim == 1
    for n in (1, 2, 5):
        assert check_coalgebra(zoo.grouplike_coalgebra(n, QQ)).ok
    with pytest.raises(MalformedInputError):
        zoo.grouplike_coalgebra(0, QQ)


def test_non_normal_subgroup_rejected():
    # S3 with a reflection subgroup
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    idx = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(idx[tuple(p[q[k]] for k in range(3))] for q in perms) for p in perms)
    g = zoo.GroupPresentation(6, table, (0, 3))
    with pytest.raises(MalformedInputError, match="normal"):
        zoo.quotient_coaction(g, QQ)
    ok = zoo.GroupPresentation(6, table, (0, 1, 2))
    ext = galois_extension(zoo.quotient_coaction(ok, QQ))
    assert ext.is_galois and ext.b_basis.ncols == 3


@pytest.mark.parametrize("sub,bdim,cdim", [((0, 2), 2, 2), ((0, 1, 2, 3), 4, 1), ((0,), 1, 4)])
def test_quotient_coaction(sub, bdim, cdim):
    ca = zoo.quotient_coaction(zoo.cyclic_group(4, sub), QQ)
    assert check_coaction(ca).ok
    ext = galois_extension(ca)
    assert ext.is_galois
    assert ext.b_basis.ncols == bdim and ca.c.dim == cdim


def test_quotient_free_over_coinvariants():
    ext = galois_extension(zoo.build("c4-c2"))
    m = restrict_bimodule(regular_bimodule(ext.a), ext.b_basis)
    assert is_projective_module(m, "left") and is_projective_module(m, "right")


def test_sweedler():
    ca = zoo.sweedler_h4(QQ)
    assert check_algebra(ca.a).ok and check_coalgebra(ca.c).ok
    ext = galois_extension(ca)
    assert ext.b_basis.ncols == 1 and ext.is_galois and ext.beta.shape == (16, 16)
    with pytest.raises(zoo.UnsupportedCharacteristicError):
        zoo.sweedler_h4(GF(2))
    assert galois_extension(zoo.sweedler_h4(GF(5))).is_galois


def test_trivial_and_control():
    for f in (QQ, GF(2)):
        ext = galois_extension(zoo.trivial_extension(zoo.truncated_polynomial(f)))
        assert ext.is_galois and ext.b_basis.ncols == 2
    ctl = galois_extension(zoo.non_galois_example(QQ))
    assert check_coaction(ctl.base).ok and not ctl.is_galois


def test_every_zoo_entry_builds():
    for name in zoo.ZOO:
        zoo.build(name)
    with pytest.raises(KeyError):
        zoo.build("nope")
