import pytest

from quandlekit.algebra import dihedral_quandle
from quandlekit.diagram import (BraidWord, DiagramError, PDCode, PDParseError, braid_closure, build_diagram,
                                doubled, family, mirror_pd, parse_pd, plat_closure, reverse_components,
                                torus2, torus3, tprime, unknot)
from quandlekit.invariants import colorings

import oracles

TREFOIL_PD = "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"
FIGURE_EIGHT_PD = "X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]"


def _all_families():
    out = [torus2(n) for n in range(1, 9)]
    out += [torus3(n) for n in range(1, 7)]
    out += [doubled(n) for n in range(-3, 9)]
    out += [tprime(n) for n in (2, 4, 6, 8)]
    return out


def test_parse_trefoil():
    pd = parse_pd(TREFOIL_PD)
    assert len(pd) == 3
    assert sorted({e for x in pd.crossings for e in x}) == list(range(1, 7))
    assert str(pd) == TREFOIL_PD


def test_parse_accepts_wrapper_and_commas():
    assert parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]") == parse_pd(TREFOIL_PD)


def test_parse_empty_is_unknot():
    pd = parse_pd("")
    assert len(pd) == 0
    D = build_diagram(pd)
    assert (D.n_arcs, D.n_regions, D.components) == (1, 2, 1)


def test_parse_multiplicity_error():
    with pytest.raises(DiagramError, match="exactly twice"):
        parse_pd("X[1,2,3,4];X[1,2,3,5]")
    with pytest.raises(DiagramError, match="exactly twice"):
        parse_pd("X[1,2,3,4];X[5,6,7,8]")
    # labels 1..4 twice each on two crossings: rejected because edge 1 enters two undercrossings
    with pytest.raises(DiagramError, match="crossing 1"):
        parse_pd("X[1,2,3,4];X[1,2,3,4]")


def test_parse_error_reports_position():
    with pytest.raises(PDParseError) as info:
        parse_pd("X[1,4,2,5];Y[3,6,4,1]")
    assert info.value.position == 11


def test_under_strand_discontinuity_is_rejected():
    # c must follow a along the component
    with pytest.raises(DiagramError, match="crossing"):
        parse_pd("X[1,4,3,5];X[2,6,4,1];X[5,3,6,2]")


def test_trefoil_structure_and_signs():
    D = build_diagram(parse_pd(TREFOIL_PD))
    assert (len(D.crossings), D.n_arcs, D.n_regions) == (3, 3, 5)
    assert D.euler_characteristic() == 2
    assert list(D.signs) == oracles.knot_signs(parse_pd(TREFOIL_PD).crossings)


def test_signs_agree_with_succession_rule_on_knots():
    for D in [torus2(3), torus2(5), torus3(2), doubled(1), doubled(4), doubled(-2),
              plat_closure((-2, -2, 1, -2))]:
        if D.components == 1:
            assert list(D.signs) == oracles.knot_signs(D.pd.crossings)


def test_braid_closure_examples():
    D = braid_closure(BraidWord(2, (1, 1, 1)))
    assert D.signs == (1, 1, 1) and D.components == 1
    assert braid_closure(BraidWord(2, (1, 1, 1, 1))).components == 2
    U = braid_closure(BraidWord(1, ()))
    assert (len(U.crossings), U.n_regions) == (0, 2)
    assert braid_closure(BraidWord(3, (1, -2, 1, -2))).signs == (1, -1, 1, -1)


def test_braid_word_validation():
    with pytest.raises(DiagramError):
        BraidWord(2, (2,))
    with pytest.raises(DiagramError):
        BraidWord(3, (0,))
    with pytest.raises(DiagramError, match="split"):
        braid_closure(BraidWord(3, (1, 1)))
    assert BraidWord.parse("1, -2 1").letters == (1, -2, 1)
    assert BraidWord.parse("1 -2").strands == 3


def test_pd_roundtrip_of_braid_closure():
    for w in [(1, 1, 1), (1, -2, 1, -2), (1, 2) * 4, (1,) * 6]:
        D = braid_closure(BraidWord(max(map(abs, w)) + 1, w))
        again = build_diagram(parse_pd(str(D.pd)))
        assert again.signs == D.signs
        assert again.components == D.components
        assert len(again.crossings) == len(D.crossings)


def test_unbounded_face_of_braid_closure_touches_every_strand_position_one():
    D = torus2(3)
    # the outside face of a 2-braid closure meets n edges (one per crossing) on the left
    outer = [e for e in D.edges if D.unbounded in (e.left, e.right)]
    assert len(outer) == 3


@pytest.mark.parametrize("D", _all_families(), ids=lambda D: str(D.pd)[:20])
def test_euler_formula(D):
    assert len(D.edges) == 2 * len(D.crossings)
    assert D.euler_characteristic() == 2


def test_families_examples():
    assert torus2(3).signs == (1, 1, 1) and torus2(3).components == 1
    assert len(torus3(2).crossings) == 4 and torus3(2).components == 1
    assert torus3(6).components == 3
    assert torus2(7).writhe == 7
    assert family("torus2:5").signs == torus2(5).signs
    with pytest.raises(DiagramError):
        family("torus2", 0)
    with pytest.raises(DiagramError):
        family("tprime", 3)
    with pytest.raises(DiagramError):
        family("nonsense:1")


@pytest.mark.parametrize("n", [2, 4, 6, 12])
def test_tprime_template(n):
    D = tprime(n)
    # documented template: two antiparallel components, every crossing positive
    assert D.components == 2
    assert D.signs == (1,) * n


@pytest.mark.parametrize("n", range(-3, 9))
def test_doubled_is_a_knot_with_signed_twists(n):
    D = doubled(n)
    assert D.components == 1
    twist = D.signs[:abs(n)]
    assert all(s == (1 if n > 0 else -1) for s in twist)


def test_doubled_one_is_positive_trefoil():
    D = doubled(1)
    assert D.signs == (1, 1, 1)
    assert oracles.alexander_polynomial(D) == [1, -1, 1]


@pytest.mark.parametrize("D,poly", [
    (torus2(3), [1, -1, 1]),
    (plat_closure((-2, -2, 1, -2)), [1, -3, 1]),
    (doubled(4), [2, -5, 2]),
    (plat_closure((-2, -2, -2, 1, -2, -2, -2)), [4, -7, 4]),
    (plat_closure((-2, -2, 1, -2, 1, -2, -2)), [1, -5, 9, -5, 1]),
], ids=["3_1", "4_1", "6_1", "7_4", "7_7"])
def test_knot_identification_by_alexander_polynomial(D, poly):
    assert oracles.alexander_polynomial(D) == poly


def test_mirror_negates_signs():
    for D in _all_families()[:12]:
        assert D.mirror().signs == tuple(-s for s in D.signs)
    pd = parse_pd(TREFOIL_PD)
    assert mirror_pd(mirror_pd(pd)) == pd


def test_reverse_component():
    D = torus2(4)
    rev = build_diagram(reverse_components(D.pd, [1]))
    assert rev.signs == tuple(-s for s in D.signs)
    assert build_diagram(reverse_components(D.pd, [0, 1])).signs == D.signs


def test_split_diagrams_rejected():
    pd = PDCode(((1, 2, 2, 1), (3, 4, 4, 3)))
    with pytest.raises(DiagramError):
        build_diagram(pd)


def test_knot_coloring_counts_match_brute_force():
    R3 = dihedral_quandle(3)
    table = [list(r) for r in R3.table]
    for D in [torus2(3), torus2(7), torus2(5), doubled(1), doubled(4), build_diagram(parse_pd(FIGURE_EIGHT_PD))]:
        assert len(colorings(D, R3)) == oracles.knot_coloring_count(D.pd.crossings, table)


def test_unknot_helper():
    U = unknot()
    assert U.n_arcs == 1 and U.n_regions == 2 and U.unbounded == 0
