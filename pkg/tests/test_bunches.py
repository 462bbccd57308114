import pytest

from nodalvb.bunches import (
    DegreeWindow,
    build_bunch_almost,
    build_bunch_string,
    degree_element,
    marked_element,
    slot_element,
    to_dot,
)
from nodalvb.curves import (
    ComponentSpec,
    NodalCurveSpec,
    PointSpec,
    RelationPair,
)

from conftest import hereditary_curve


def almost_curve():
    return NodalCurveSpec(
        components=(ComponentSpec("C"), ComponentSpec("D")),
        points=(
            PointSpec("y0", "C", "x0", 2),
            PointSpec("e1", "C", "x1", 2),
            PointSpec("e2", "C", "x2", 2),
            PointSpec("z", "D", "x0", 2),
        ),
        relations=(RelationPair.of("y0", 1, "z", 1),),
    )


def test_golden_bunch_listing(golden_curve):
    bunch = build_bunch_string(golden_curve, DegreeWindow(0, 0))
    assert [str(e) for e in bunch.e_chain("y1")] == ["(y1,1)"]
    assert [str(e) for e in bunch.e_chain("y2")] == ["(y2,1)", "(y2,2)"]
    assert [str(e) for e in bunch.e_chain("y3")] == ["(y3,1)", "(y3,2)"]
    assert [str(e) for e in bunch.e_chain("y4")] == ["(y4,1)", "(y4,2)"]
    for y in bunch.points:
        assert [str(e) for e in bunch.f_chain(y)] == [f"(0,{y})"]
    # pairing: the self pair, the internal pair, the crossing, the degrees
    e11 = slot_element("T1", "y1", 1)
    assert bunch.partner(e11) == e11
    assert bunch.partner(slot_element("T2", "y2", 2)) == slot_element(
        "T2", "y2", 1
    )
    assert bunch.partner(slot_element("T1", "y3", 1)) == slot_element(
        "T2", "y4", 1
    )
    assert bunch.partner(slot_element("T1", "y3", 2)) is None
    assert bunch.partner(degree_element("T1", "y1", 0)) == degree_element(
        "T1", "y3", 0
    )
    assert bunch.partner(degree_element("T2", "y2", 0)) == degree_element(
        "T2", "y4", 0
    )


def test_no_element_has_two_partners(golden_curve):
    bunch = build_bunch_string(golden_curve, DegreeWindow(-1, 2))
    for el in bunch.elements():
        mates = {m for e, m in bunch.partner_map.items() if e == el}
        assert len(mates) <= 1


def test_chain_sizes(golden_curve):
    bunch = build_bunch_string(golden_curve, DegreeWindow(0, 0))
    # |E_y| = n_y - number of self-pairs at y
    for p in golden_curve.points:
        selfpairs = sum(
            1
            for r in golden_curve.relations
            if r.is_self_pair and r.left.point == p.id
        )
        assert len(bunch.e_chain(p.id)) == p.n - selfpairs


def test_window_monotone(golden_curve):
    small = build_bunch_string(golden_curve, DegreeWindow(0, 0))
    big = build_bunch_string(golden_curve, DegreeWindow(-1, 1))
    for y in small.points:
        assert set(small.e_chain(y)) == set(big.e_chain(y))
        assert set(small.f_chain(y)) <= set(big.f_chain(y))


def test_single_point_component_f_has_no_partner():
    spec = hereditary_curve(2)
    bunch = build_bunch_string(spec, DegreeWindow(0, 1))
    for el in bunch.f_chain("h0"):
        assert bunch.partner(el) is None


def test_wrong_shape_rejected():
    three = NodalCurveSpec(
        components=(ComponentSpec("C"),),
        points=(
            PointSpec("a", "C", "x0", 2),
            PointSpec("b", "C", "x1", 2),
            PointSpec("c", "C", "x2", 2),
        ),
        relations=(RelationPair.of("a", 1, "a", 1),),
    )
    with pytest.raises(ValueError):
        build_bunch_string(three, DegreeWindow(0, 0))


def test_bad_window():
    with pytest.raises(ValueError):
        DegreeWindow(1, 0)


def test_almost_bunch_marked_point():
    spec = almost_curve()
    bunch = build_bunch_almost(spec, DegreeWindow(0, 1))
    assert bunch.points == ("y0", "z")  # extra points removed
    chain = bunch.f_chain("y0")
    assert [str(e) for e in chain] == [
        "(0,y0,0)",
        "(0,y0,1)",
        "(1,y0,0)",
        "(1,y0,1)",
    ]
    for el in chain:
        assert bunch.partner(el) == el
    # the marked point keeps its slot chain, so the gluing survives
    assert bunch.partner(slot_element("C", "y0", 1)) == slot_element(
        "D", "z", 1
    )
    # the other point is built exactly as in the string construction
    assert [str(e) for e in bunch.f_chain("z")] == ["(0,z)", "(1,z)"]


def test_almost_bunch_window_two_elements():
    spec = almost_curve()
    bunch = build_bunch_almost(spec, DegreeWindow(0, 0))
    assert len(bunch.f_chain("y0")) == 2


def test_almost_on_plain_string_curve(golden_curve):
    same = build_bunch_almost(golden_curve, DegreeWindow(0, 0))
    ref = build_bunch_string(golden_curve, DegreeWindow(0, 0))
    assert same.points == ref.points
    for y in ref.points:
        assert same.e_chain(y) == ref.e_chain(y)
        assert same.f_chain(y) == ref.f_chain(y)


def test_dot_output(golden_curve):
    bunch = build_bunch_string(golden_curve, DegreeWindow(0, 0))
    dot = to_dot(bunch)
    assert dot.count("subgraph") == 4
    dashed = [l for l in dot.splitlines() if "style=dashed" in l]
    # three slot pairs (one a self-loop) and two degree pairs
    assert len(dashed) == 5
    selfloops = [
        l for l in dashed if l.split("--")[0].strip() == l.split("--")[1].split("[")[0].strip()
    ]
    assert len(selfloops) == 1


def test_dot_deterministic(golden_curve):
    shuffled = NodalCurveSpec(
        components=golden_curve.components,
        points=golden_curve.points[::-1],
        relations=golden_curve.relations[::-1],
    )
    a = to_dot(build_bunch_string(golden_curve, DegreeWindow(0, 0)))
    b = to_dot(build_bunch_string(shuffled, DegreeWindow(0, 0)))
    assert a == b


def test_dot_empty():
    spec = NodalCurveSpec(
        components=(ComponentSpec("C"),), points=(), relations=()
    )
    bunch = build_bunch_string(spec, DegreeWindow(0, 0))
    dot = to_dot(bunch)
    assert "subgraph" not in dot
