from fractions import Fraction

import pytest

from nodalvb.bunches import DegreeWindow, build_bunch_string
from nodalvb.realize import (
    LabeledBlockMatrix,
    TripleRealization,
    check_invertible,
    direct_sum,
    precanonical_blocks,
    realize_band,
    realize_string,
)
from nodalvb.strings_bands import (
    GENERIC,
    Band,
    BispecialString,
    SpecialString,
    UsualString,
)
from nodalvb.words import invert, parse_word

USUAL = "(y4,2)-(0,y4)~(0,y2)-(y2,2)~(y2,1)-(1,y2)~(1,y4)-(y4,2)"
SPECIAL = "(y1,1)-(0,y1)~(0,y3)-(y3,2)"
BISPECIAL = (
    "(y1,1)-(0,y1)~(0,y3)-(y3,1)~(y4,1)-(0,y4)~(0,y2)-(y2,1)~(y2,2)"
    "-(1,y2)~(1,y4)-(y4,1)~(y3,1)-(1,y3)~(1,y1)-(y1,1)"
)
BAND = (
    "cyc[(y2,2)~(y2,1)-(1,y2)~(1,y4)-(y4,1)~(y3,1)-(1,y3)~(1,y1)"
    "-(y1,1)~(y1,1)-(0,y1)~(0,y3)-(y3,1)~(y4,1)-(0,y4)~(0,y2)]"
)


def entries(real, y):
    return [[str(x) for x in row] for row in real.matrix(y).entries]


def col_slots(real, y):
    return [c.slot for c in real.matrix(y).col_labels]


def test_usual_string_matrices(golden_curve, golden_bunch):
    s = UsualString(parse_word(golden_bunch, USUAL))
    real = realize_string(s, golden_curve)
    assert real.summands == (("T2", 0, 1), ("T2", 1, 1))
    # the two unit generators at the crossing select the second slot
    assert col_slots(real, "y4") == [2, 2]
    assert entries(real, "y4") == [["1", "0"], ["0", "1"]]
    # the internally glued point sees one copy through both slots
    assert col_slots(real, "y2") == [1, 2]
    assert entries(real, "y2") == [["0", "1"], ["1", "0"]]
    assert real.matrix("y1").nrows == 0
    assert real.matrix("y3").nrows == 0
    for y in ("y2", "y4"):
        assert check_invertible(real.matrix(y))


def test_special_string_matrices(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, SPECIAL)
    real = realize_string(SpecialString(w, 1), golden_curve)
    assert real.summands == (("T1", 0, 1),)
    assert col_slots(real, "y1") == [2]  # delta = 1 selects the second role
    assert col_slots(real, "y3") == [2]
    real0 = realize_string(SpecialString(w, 0), golden_curve)
    assert col_slots(real0, "y1") == [1]


def test_bispecial_m2_coupling(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BISPECIAL)
    real = realize_string(BispecialString(w, 2, 1, 0), golden_curve)
    assert real.summands == (
        ("T1", 0, 2),
        ("T1", 1, 2),
        ("T2", 0, 2),
        ("T2", 1, 2),
    )
    m = real.matrix("y1")
    assert m.nrows == m.ncols == 4
    assert check_invertible(m)
    # with m = 2q the coupled end carries A = I and B = the nilpotent
    # Jordan block: one column hits both copies of its summand
    cols = [tuple(str(m.entries[i][j]) for i in range(4)) for j in range(4)]
    assert ("0", "0", "1", "1") in cols
    for y in ("y2", "y3", "y4"):
        assert check_invertible(real.matrix(y))


def test_bispecial_odd_multiplicity(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BISPECIAL)
    for m in (1, 3):
        real = realize_string(BispecialString(w, m, 0, 1), golden_curve)
        for y in real.points():
            if real.matrix(y).nrows:
                assert check_invertible(real.matrix(y))


def test_band_matrices(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BAND)
    real = realize_band(Band(w, 1, GENERIC), golden_curve, Fraction(2))
    assert real.summands == (
        ("T1", 0, 1),
        ("T1", 1, 1),
        ("T2", 0, 1),
        ("T2", 1, 1),
    )
    assert real.params["lambda"] == Fraction(2)
    lam_entries = [
        x
        for y in real.points()
        for row in real.matrix(y).entries
        for x in row
        if x not in (0, 1)
    ]
    assert lam_entries in ([Fraction(2)], [Fraction(1, 2)])
    for y in real.points():
        assert check_invertible(real.matrix(y))


def test_band_jordan_block_m2(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BAND)
    real = realize_band(Band(w, 2, GENERIC), golden_curve, Fraction(3))
    vals = set()
    for y in real.points():
        for row in real.matrix(y).entries:
            vals.update(row)
    assert Fraction(3) in vals or Fraction(1, 3) in vals
    for y in real.points():
        assert check_invertible(real.matrix(y))


def test_band_lambda_changes_only_the_jordan_block(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BAND)
    for m in (1, 2):
        a = realize_band(Band(w, m, GENERIC), golden_curve, Fraction(2))
        b = realize_band(Band(w, m, GENERIC), golden_curve, Fraction(3))
        diffs = []
        for y in a.points():
            ma, mb = a.matrix(y), b.matrix(y)
            assert ma.row_labels == mb.row_labels
            assert ma.col_labels == mb.col_labels
            for i in range(ma.nrows):
                for j in range(ma.ncols):
                    if ma.entries[i][j] != mb.entries[i][j]:
                        diffs.append((y, ma.col_labels[j].group))
        assert diffs
        assert len({d for d in diffs}) == 1  # one point, one column group
        assert len(diffs) <= m * m


def test_band_rejects_bad_lambda(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BAND)
    with pytest.raises(ValueError):
        realize_band(Band(w, 1, GENERIC), golden_curve, Fraction(0))
    with pytest.raises(ValueError):
        realize_band(Band(w, 1, GENERIC), golden_curve)


def test_realize_rejects_invalid_objects(golden_curve, golden_bunch):
    uw = parse_word(golden_bunch, USUAL)
    with pytest.raises(ValueError):
        realize_string(SpecialString(uw, 0), golden_curve)
    sym = parse_word(
        golden_bunch,
        "(y3,2)-(0,y3)~(0,y1)-(y1,1)~(y1,1)-(0,y1)~(0,y3)-(y3,2)",
    )
    with pytest.raises(ValueError):
        realize_string(UsualString(sym), golden_curve)


def test_realize_rejects_marked_words():
    from nodalvb.bunches import build_bunch_almost
    from nodalvb.curves import (
        ComponentSpec,
        NodalCurveSpec,
        PointSpec,
        RelationPair,
    )

    spec = NodalCurveSpec(
        components=(ComponentSpec("C"),),
        points=(
            PointSpec("y0", "C", "x0", 2),
            PointSpec("e1", "C", "x1", 2),
            PointSpec("e2", "C", "x2", 2),
        ),
        relations=(RelationPair.of("y0", 1, "y0", 2),),
    )
    bunch = build_bunch_almost(spec, DegreeWindow(0, 0))
    w = parse_word(bunch, "cyc[(y0,1)~(y0,2)-(0,y0,0)~(0,y0,0)]")
    from nodalvb.words import check_word

    assert check_word(bunch, w)
    with pytest.raises(ValueError):
        realize_band(Band(w, 1, GENERIC), spec, Fraction(2))


def test_summand_count_matches_rank(golden_curve, golden_bunch):
    from nodalvb.strings_bands import rank

    for obj in (
        UsualString(parse_word(golden_bunch, USUAL)),
        SpecialString(parse_word(golden_bunch, SPECIAL), 0),
        BispecialString(parse_word(golden_bunch, BISPECIAL), 2, 1, 0),
    ):
        real = realize_string(obj, golden_curve)
        assert sum(mult for _, _, mult in real.summands) == rank(obj)


def test_theta_square_per_point(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BISPECIAL)
    real = realize_string(BispecialString(w, 3, 1, 1), golden_curve)
    for y in real.points():
        m = real.matrix(y)
        assert m.nrows == m.ncols


def test_serialization_roundtrip(golden_curve, golden_bunch):
    w = parse_word(golden_bunch, BAND)
    real = realize_band(Band(w, 2, GENERIC), golden_curve, Fraction(5, 7))
    doc = real.to_dict()
    again = TripleRealization.from_dict(doc)
    assert again.summands == real.summands
    for y in real.points():
        assert again.matrix(y).entries == real.matrix(y).entries
        assert again.matrix(y).row_labels == real.matrix(y).row_labels


def test_direct_sum_shapes(golden_curve, golden_bunch):
    a = realize_string(
        SpecialString(parse_word(golden_bunch, SPECIAL), 0), golden_curve
    )
    b = realize_string(
        UsualString(parse_word(golden_bunch, USUAL)), golden_curve
    )
    s = direct_sum(a, b)
    assert s.summands == (("T1", 0, 1), ("T2", 0, 1), ("T2", 1, 1))
    for y in s.points():
        m = s.matrix(y)
        assert m.nrows == a.matrix(y).nrows + b.matrix(y).nrows
        if m.nrows:
            assert check_invertible(m)


def test_check_invertible_basics():
    ident = LabeledBlockMatrix(
        row_labels=("r",), col_labels=("c",), entries=((Fraction(1),),)
    )
    assert check_invertible(ident)
    zero = LabeledBlockMatrix(
        row_labels=("r",), col_labels=("c",), entries=((Fraction(0),),)
    )
    assert not check_invertible(zero)
    rect = LabeledBlockMatrix(
        row_labels=("r",), col_labels=(), entries=((),)
    )
    with pytest.raises(ValueError):
        check_invertible(rect)


def test_precanonical_blocks_unit_sizes():
    blocks = precanonical_blocks((1, 1, 1, 1))
    as_ints = {
        key: [[int(x) for x in row] for row in mat.entries]
        for key, mat in blocks.items()
    }
    assert as_ints[("y1", 1)] == [[0, 0], [1, 0], [0, 0], [0, 1]]
    assert as_ints[("y1", 2)] == [[1, 0], [0, 0], [0, 1], [0, 0]]
    assert as_ints[("y2", 1)] == [[0, 0], [0, 0], [1, 0], [0, 1]]
    assert as_ints[("y2", 2)] == [[1, 0], [0, 1], [0, 0], [0, 0]]


def test_precanonical_stack_is_permutation():
    blocks = precanonical_blocks((1, 1, 1, 1))
    left = [list(r) for r in blocks[("y2", 1)].entries]
    right = [list(r) for r in blocks[("y2", 2)].entries]
    stacked = [l + r for l, r in zip(left, right)]
    assert sorted(map(tuple, stacked)) == sorted(
        map(tuple, [[1 if i == j else 0 for j in range(4)] for i in range(4)])
    )
    assert all(sum(row) == 1 for row in stacked)


def test_precanonical_zero_sizes():
    blocks = precanonical_blocks((0, 0, 0, 0))
    for mat in blocks.values():
        assert mat.nrows == 0 and mat.ncols == 0
    with pytest.raises(ValueError):
        precanonical_blocks((1, 2, 3))


def test_precanonical_row_consistency():
    blocks = precanonical_blocks((2, 1, 3, 2))
    for mat in blocks.values():
        assert mat.nrows == 8
        # each column group has the width of the row group it hits
        assert all(sum(1 for x in row if x != 0) <= 1 for row in mat.entries)
