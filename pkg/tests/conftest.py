import random

import pytest

from nodalvb.bunches import BunchOfChains, DegreeWindow, build_bunch_string
from nodalvb.curves import (
    ComponentSpec,
    NodalCurveSpec,
    PointSpec,
    RelationPair,
)
from nodalvb.words import DASH, SIM, Word


@pytest.fixture
def golden_curve() -> NodalCurveSpec:
    """Two projective lines crossing at one point, with one self-glued
    slot, one internally glued point, and the crossing itself."""
    return NodalCurveSpec(
        components=(ComponentSpec("T1"), ComponentSpec("T2")),
        points=(
            PointSpec("y1", "T1", "x1", 2),
            PointSpec("y2", "T2", "x2", 2),
            PointSpec("y3", "T1", "x", 2),
            PointSpec("y4", "T2", "x", 2),
        ),
        relations=(
            RelationPair.of("y1", 1, "y1", 1),
            RelationPair.of("y2", 2, "y2", 1),
            RelationPair.of("y3", 1, "y4", 1),
        ),
    )


@pytest.fixture
def golden_bunch(golden_curve) -> BunchOfChains:
    return build_bunch_string(golden_curve, DegreeWindow(0, 1))


@pytest.fixture
def two_self_pair_bunch():
    """One component, two points, each with a self-glued first slot.
    Its cyclic words through both self-pairs are cyclic-symmetric."""
    spec = NodalCurveSpec(
        components=(ComponentSpec("C"),),
        points=(
            PointSpec("p", "C", "xp", 2),
            PointSpec("q", "C", "xq", 2),
        ),
        relations=(
            RelationPair.of("p", 1, "p", 1),
            RelationPair.of("q", 1, "q", 1),
        ),
    )
    return build_bunch_string(spec, DegreeWindow(0, 1)), spec


def two_point_loop_curve() -> NodalCurveSpec:
    """One rational component, two points glued to each other twice:
    every slot has a partner, so no terminating strings exist."""
    return NodalCurveSpec(
        components=(ComponentSpec("C"),),
        points=(
            PointSpec("p", "C", "x", 2),
            PointSpec("q", "C", "x", 2),
        ),
        relations=(
            RelationPair.of("p", 1, "q", 1),
            RelationPair.of("p", 2, "q", 2),
        ),
    )


def hereditary_curve(*weights) -> NodalCurveSpec:
    """A single rational component with hereditary singular points."""
    pts = tuple(
        PointSpec(f"h{i}", "C", f"x{i}", n) for i, n in enumerate(weights)
    )
    return NodalCurveSpec(
        components=(ComponentSpec("C"),), points=pts, relations=()
    )


def random_walk_word(bunch: BunchOfChains, rng: random.Random, max_len: int):
    """A random valid word: a walk alternating the two step types.

    Returns a Word or None when the walk dies early; cyclic words are
    produced when the walk happens to close up.
    """
    elements = sorted(bunch.elements(), key=lambda e: e.sort_key())
    if not elements:
        return None
    cur = rng.choice(elements)
    letters, rels = [cur], []
    want_sim = rng.random() < 0.5
    while len(letters) < max_len:
        if want_sim:
            mate = bunch.partner(cur)
            if mate is None:
                break
            letters.append(mate)
            rels.append(SIM)
            cur = mate
        else:
            options = [
                e
                for e in (
                    bunch.f_chain(cur.point)
                    if cur.kind == "E"
                    else bunch.e_chain(cur.point)
                )
            ]
            if not options:
                break
            nxt = rng.choice(options)
            letters.append(nxt)
            rels.append(DASH)
            cur = nxt
        want_sim = not want_sim
        if rng.random() < 0.15 and len(letters) >= 2:
            break
    if len(letters) < 1:
        return None
    cyclic = (
        len(letters) >= 4
        and rels
        and rels[0] == SIM
        and rels[-1] == SIM
        and bunch.dash_ok(letters[-1], letters[0])
        and rng.random() < 0.8
    )
    return Word(letters=tuple(letters), rels=tuple(rels), cyclic=cyclic)
