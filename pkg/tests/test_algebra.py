import itertools

import pytest

from quandlekit.algebra import (FiniteAbelianGroup, GroupRingElement, Quandle, QuandleError,
                                QuandleHom, alexander_quandle, are_isomorphic, check_quandle,
                                conjugation_quandle, cyclic_group, dihedral_quandle, make_quandle,
                                parse_groupring, parse_quandle, quandle_homs, quaternion_group,
                                subquandle, trivial_quandle)

from oracles import dihedral, is_quandle


@pytest.mark.parametrize("n", range(1, 9))
def test_dihedral_matches_formula_and_axioms(n):
    R = dihedral_quandle(n)
    assert [list(r) for r in R.table] == dihedral(n)
    assert check_quandle(R.table).valid


def test_trivial_quandle():
    T = trivial_quandle(3)
    assert T.is_trivial()
    assert check_quandle(T.table).valid


def test_alexander_x4_table():
    X4 = alexander_quandle(2, [1, 1, 1])
    assert X4.table == ((0, 2, 3, 1), (3, 1, 0, 2), (1, 3, 2, 0), (2, 0, 1, 3))
    assert is_quandle([list(r) for r in X4.table])


def test_alexander_r3_is_dihedral():
    # Z_3[T]/(T+1): T acts as -1, so a*b = 2b - a
    assert alexander_quandle(3, [1, 1]).table == dihedral_quandle(3).table


def test_inverse_operation():
    X = alexander_quandle(2, [1, 1, 1])
    for a, b in itertools.product(range(4), repeat=2):
        assert X.op(X.inv(a, b), b) == a


def test_check_reports_first_witness():
    report = check_quandle([[0, 0], [0, 1]])
    assert not report.valid
    assert report.axioms == {"I": True, "II": False, "III": True}
    assert report.witnesses["II"] == (0, 0)
    report = check_quandle([[1, 0], [1, 0]])
    assert report.witnesses["I"] == (0,)


def test_check_axiom_three_failure():
    # every column is a permutation fixing its index, but the columns do not distribute
    table = [[0, 2, 0, 1], [1, 1, 1, 0], [2, 0, 2, 2], [3, 3, 3, 3]]
    report = check_quandle(table)
    assert report.axioms == {"I": True, "II": True, "III": False}
    assert report.witnesses["III"] == (0, 1, 3)


def test_quandle_table_must_be_square():
    with pytest.raises(QuandleError):
        check_quandle([[0, 1]])


def test_parse_roundtrip():
    X = alexander_quandle(2, [1, 1, 1])
    assert parse_quandle(X.to_text()) == X
    with pytest.raises(QuandleError):
        parse_quandle("quandle 2\n0 0\n0 1\n")
    bad = parse_quandle("quandle 2\n0 0\n0 1\n", unchecked=True)
    assert not check_quandle(bad.table).valid


def test_make_dispatch():
    assert make_quandle("dihedral", 3) == dihedral_quandle(3)
    with pytest.raises(QuandleError):
        make_quandle("nonsense")


def test_q6_inside_q8_conjugation():
    table, names = quaternion_group()
    Q8 = conjugation_quandle(table)
    assert check_quandle(Q8.table).valid
    Q6 = subquandle(Q8, [names.index(x) for x in ("i", "-i", "j", "-j", "k", "-k")])
    assert len(Q6) == 6 and check_quandle(Q6.table).valid
    with pytest.raises(QuandleError):
        subquandle(Q8, [names.index("i"), names.index("j")])


def test_homs_and_isomorphism():
    R3 = dihedral_quandle(3)
    homs = quandle_homs(R3, R3)
    # constant maps plus the affine bijections x -> ax + b, a in {1, 2}
    assert len(homs) == 3 + 6
    assert all(h.is_homomorphism() for h in homs)
    assert are_isomorphic(R3, trivial_quandle(3)) is None
    f = are_isomorphic(dihedral_quandle(4), dihedral_quandle(4))
    assert f is not None and f.is_bijective()


def test_hom_compose():
    R3 = dihedral_quandle(3)
    f = QuandleHom(R3, R3, (1, 2, 0))
    g = QuandleHom(R3, R3, (0, 2, 1))
    assert f.is_homomorphism() and g.is_homomorphism()
    assert f.compose(g).map == (2, 1, 0)


def test_finite_abelian_group():
    A = FiniteAbelianGroup.parse("2,3")
    assert A.order == 6 and not A.is_cyclic()
    for k in range(6):
        assert A.index(A.element(k)) == k
    g = A.add((1, 2), (1, 2))
    assert g == (0, 1) and A.add(g, A.neg(g)) == A.zero
    assert FiniteAbelianGroup.parse("").order == 1
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1,))


def test_group_ring_format_and_parse():
    A = cyclic_group(3)
    v = GroupRingElement(A, {(0,): 9, (1,): 18})
    assert str(v) == "9 + 18t"
    assert str(GroupRingElement(A, {(0,): 9, (2,): 18})) == "9 + 18t^2"
    assert str(GroupRingElement(A, {(0,): 27})) == "27"
    assert str(GroupRingElement(A, {})) == "0"
    assert parse_groupring("9 + 18t^2", A) == GroupRingElement(A, {(0,): 9, (2,): 18})
    assert v.augmentation() == 27
    assert v.negate_exponents() == GroupRingElement(A, {(0,): 9, (2,): 18})


def test_group_ring_collects_values():
    A = cyclic_group(3)
    v = GroupRingElement.from_values(A, [0, 1, 4, 2])
    assert dict(v.coefficients) == {(0,): 1, (1,): 2, (2,): 1}


def test_label_does_not_affect_equality():
    R3 = dihedral_quandle(3)
    assert Quandle(R3.table) == R3
