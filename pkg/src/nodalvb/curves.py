"""Input data of a noncommutative nodal curve and its fixed normalization.

A curve spec lists the components of the normalization, the preimage
points of singular points with their local chain data (n, multiplicities),
and the gluing relation on slot pairs (point, i).  Validation enforces the
nodal axioms; shape detection drives the downstream classification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class ComponentSpec:
    """One irreducible component of the normalization."""

    id: str
    genus: int = 0

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise ValueError(f"bad component id {self.id!r}")
        if self.genus < 0:
            raise ValueError(f"component {self.id}: genus must be >= 0")


@dataclass(frozen=True)
class PointSpec:
    """A preimage point of a singular point, with its local chain data.

    ``n`` is the chain length; ``m`` the multiplicity of each slot
    (length n, all >= 1).  ``image`` names the singular point downstairs.
    """

    id: str
    component: str
    image: str
    n: int
    m: tuple = ()

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise ValueError(f"bad point id {self.id!r}")
        if self.n < 1:
            raise ValueError(f"point {self.id}: n must be >= 1")
        m = tuple(self.m) if self.m else (1,) * self.n
        object.__setattr__(self, "m", m)
        if len(m) != self.n:
            raise ValueError(f"point {self.id}: m must have length n = {self.n}")
        if any(x < 1 for x in m):
            raise ValueError(f"point {self.id}: multiplicities must be >= 1")

    @property
    def total_multiplicity(self) -> int:
        return sum(self.m)


@dataclass(frozen=True, order=True)
class SlotRef:
    """A pair (point, i) with 1-based slot index i."""

    point: str
    index: int

    def __str__(self):
        return f"({self.point},{self.index})"


@dataclass(frozen=True)
class RelationPair:
    """An unordered related pair of slots, stored with left <= right."""

    left: SlotRef
    right: SlotRef

    @staticmethod
    def of(p1: str, i1: int, p2: str, i2: int) -> "RelationPair":
        a, b = SlotRef(p1, i1), SlotRef(p2, i2)
        if b < a:
            a, b = b, a
        return RelationPair(a, b)

    def __post_init__(self):
        if self.right < self.left:
            object.__setattr__(self, "left", self.right)
            object.__setattr__(self, "right", self.left)

    @property
    def is_self_pair(self) -> bool:
        return self.left == self.right

    def touches(self, point: str) -> bool:
        return self.left.point == point or self.right.point == point


@dataclass(frozen=True)
class NodalCurveSpec:
    components: tuple
    points: tuple
    relations: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "points", tuple(self.points))
        rels = []
        seen = set()
        for r in self.relations:
            if r not in seen:
                seen.add(r)
                rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))
        self._check_structure()

    def _check_structure(self):
        comp_ids = [c.id for c in self.components]
        if len(set(comp_ids)) != len(comp_ids):
            raise ValueError("duplicate component ids")
        pt_ids = [p.id for p in self.points]
        if len(set(pt_ids)) != len(pt_ids):
            raise ValueError("duplicate point ids")
        comp_set = set(comp_ids)
        for p in self.points:
            if p.component not in comp_set:
                raise ValueError(f"point {p.id}: unknown component {p.component!r}")
        by_id = {p.id: p for p in self.points}
        for r in self.relations:
            for ref in (r.left, r.right):
                p = by_id.get(ref.point)
                if p is None:
                    raise ValueError(f"relation {r}: unknown point {ref.point!r}")
                if not 1 <= ref.index <= p.n:
                    raise ValueError(
                        f"relation touches {ref}, but {ref.point} has n = {p.n}"
                    )

    # -- lookups --------------------------------------------------------

    def point(self, pid: str) -> PointSpec:
        return {p.id: p for p in self.points}[pid]

    def points_on(self, component: str) -> tuple:
        return tuple(p for p in self.points if p.component == component)

    def fiber(self, image: str) -> tuple:
        return tuple(p for p in self.points if p.image == image)

    def images(self) -> tuple:
        seen = []
        for p in self.points:
            if p.image not in seen:
                seen.append(p.image)
        return tuple(seen)

    def partners(self, slot: SlotRef) -> tuple:
        """All slots related to ``slot`` (a self-pair yields the slot itself)."""
        out = []
        for r in self.relations:
            if r.left == slot:
                out.append(r.right)
            elif r.right == slot:
                out.append(r.left)
        return tuple(out)

    def partner(self, slot: SlotRef):
        """The unique partner, or None.  Assumes N1 holds."""
        ps = self.partners(slot)
        return ps[0] if ps else None

    def slot_class(self, slot: SlotRef) -> frozenset:
        """The equivalence class of ``slot`` under the closure of the relation."""
        cls = {slot}
        frontier = [slot]
        while frontier:
            s = frontier.pop()
            for t in self.partners(s):
                if t not in cls:
                    cls.add(t)
                    frontier.append(t)
        return frozenset(cls)

    def image_is_hereditary(self, image: str) -> bool:
        fiber_ids = {p.id for p in self.fiber(image)}
        return not any(
            r.left.point in fiber_ids or r.right.point in fiber_ids
            for r in self.relations
        )


RULE_N1 = "N1"
RULE_N2 = "N2"
RULE_N3 = "N3"
RULE_FIBER = "FIBER"
RULE_CONNECT = "CONNECT"
RULE_MULT = "MULT"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"rule": r, "locus": l} for r, l in self.violations],
        }


def validate(spec: NodalCurveSpec) -> ValidationReport:
    """Check the nodal axioms; all failures are reported, never raised."""
    violations = []

    all_slots = [
        SlotRef(p.id, i) for p in spec.points for i in range(1, p.n + 1)
    ]

    # N1: at most one partner per slot (a self-pair is its own single partner).
    for s in all_slots:
        partners = set(spec.partners(s))
        if len(partners) > 1:
            violations.append((RULE_N1, f"{s} has partners {sorted(map(str, partners))}"))

    # N2: a self-related slot (y,i) needs i < n and (y,i+1) isolated.
    for r in spec.relations:
        if not r.is_self_pair:
            continue
        y, i = r.left.point, r.left.index
        n = spec.point(y).n
        if i >= n:
            violations.append((RULE_N2, f"({y},{i})~({y},{i}) but i = n = {n}"))
        elif spec.partners(SlotRef(y, i + 1)):
            violations.append((RULE_N2, f"({y},{i})~({y},{i}) but ({y},{i+1}) is related"))

    # N3: the multiplicity total agrees across each component.
    for c in spec.components:
        pts = spec.points_on(c.id)
        totals = {p.total_multiplicity for p in pts}
        if len(totals) > 1:
            violations.append(
                (RULE_N3, f"component {c.id}: totals {sorted(totals)} differ")
            )

    # FIBER: relations stay inside one fiber.
    for r in spec.relations:
        if spec.point(r.left.point).image != spec.point(r.right.point).image:
            violations.append((RULE_FIBER, f"{r.left}~{r.right} joins different images"))

    # CONNECT: each fiber is connected by the relation.
    for x in spec.images():
        fiber = [p.id for p in spec.fiber(x)]
        if len(fiber) <= 1:
            continue
        adj = {p: set() for p in fiber}
        for r in spec.relations:
            if r.left.point in adj and r.right.point in adj:
                adj[r.left.point].add(r.right.point)
                adj[r.right.point].add(r.left.point)
        seen = {fiber[0]}
        stack = [fiber[0]]
        while stack:
            for q in adj[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != len(fiber):
            violations.append((RULE_CONNECT, f"fiber over {x} is disconnected"))

    # MULT: related slots carry equal multiplicities.
    for r in spec.relations:
        ml = spec.point(r.left.point).m[r.left.index - 1]
        mr = spec.point(r.right.point).m[r.right.index - 1]
        if ml != mr:
            violations.append((RULE_MULT, f"{r.left}~{r.right}: m {ml} != {mr}"))

    violations.sort()
    return ValidationReport(ok=not violations, violations=tuple(violations))


def hereditary_points(spec: NodalCurveSpec) -> frozenset:
    """Images x whose fiber is touched by no relation."""
    return frozenset(x for x in spec.images() if spec.image_is_hereditary(x))


def is_connected(spec: NodalCurveSpec) -> bool:
    """Connectivity of the glued curve: components joined through fibers."""
    comp_ids = [c.id for c in spec.components]
    if len(comp_ids) <= 1:
        return True
    adj = {c: set() for c in comp_ids}
    for x in spec.images():
        comps = sorted({spec.point(p.id).component for p in spec.fiber(x)})
        for a in comps[1:]:
            adj[comps[0]].add(a)
            adj[a].add(comps[0])
    seen = {comp_ids[0]}
    stack = [comp_ids[0]]
    while stack:
        for q in adj[stack.pop()]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(comp_ids)


class ShapeKind(str, Enum):
    NORMAL_P1 = "NormalP1"
    NORMAL_ELLIPTIC = "NormalElliptic"
    NORMAL_OTHER = "NormalOther"
    WEIGHTED_PROJECTIVE_LINE = "WeightedProjectiveLine"
    STRING_TYPE = "StringType"
    ALMOST_STRING_TYPE = "AlmostStringType"
    OTHER_NODAL = "OtherNodal"


@dataclass(frozen=True)
class Shape:
    kind: ShapeKind
    weights: tuple = ()
    marked: frozenset = frozenset()
    extra: frozenset = frozenset()

    def __str__(self):
        if self.kind is ShapeKind.WEIGHTED_PROJECTIVE_LINE:
            return f"WeightedProjectiveLine{self.weights}"
        if self.kind is ShapeKind.ALMOST_STRING_TYPE:
            return (
                f"AlmostStringType(marked={sorted(self.marked)},"
                f" extra={sorted(self.extra)})"
            )
        return self.kind.value


def _is_extra_candidate(spec: NodalCurveSpec, p: PointSpec) -> bool:
    # An extra point has a hereditary image with local chain length 2.
    return p.n == 2 and spec.image_is_hereditary(p.image)


def curve_shape(spec: NodalCurveSpec) -> Shape:
    """Decide which classification regime the curve falls into.

    Raises ValueError on a disconnected curve; run validate() first.
    """
    if not is_connected(spec):
        raise ValueError("curve is disconnected")

    rational = all(c.genus == 0 for c in spec.components)

    if not spec.points:
        genus = spec.components[0].genus
        if genus == 0:
            return Shape(ShapeKind.NORMAL_P1)
        if genus == 1:
            return Shape(ShapeKind.NORMAL_ELLIPTIC)
        return Shape(ShapeKind.NORMAL_OTHER)

    if (
        rational
        and len(spec.components) == 1
        and all(spec.image_is_hereditary(x) for x in spec.images())
    ):
        weights = tuple(sorted(p.n for p in spec.points))
        return Shape(ShapeKind.WEIGHTED_PROJECTIVE_LINE, weights=weights)

    per_comp = {c.id: spec.points_on(c.id) for c in spec.components}

    if rational and all(len(pts) <= 2 for pts in per_comp.values()):
        return Shape(ShapeKind.STRING_TYPE)

    if rational and all(len(pts) <= 3 for pts in per_comp.values()):
        marked, extra = set(), set()
        ok = True
        for pts in per_comp.values():
            if len(pts) != 3:
                continue
            extras = [p for p in pts if _is_extra_candidate(spec, p)]
            if len(extras) != 2:
                ok = False
                break
            extra.update(p.id for p in extras)
            marked.update(p.id for p in pts if p.id not in {q.id for q in extras})
        if ok:
            return Shape(
                ShapeKind.ALMOST_STRING_TYPE,
                marked=frozenset(marked),
                extra=frozenset(extra),
            )

    return Shape(ShapeKind.OTHER_NODAL)


def eligible_for_string_bunch(spec: NodalCurveSpec) -> bool:
    """String-type eligibility in the wide sense: rational, <= 2 points
    per component.  A hereditary-only curve of this shape is reported as a
    weighted projective line by curve_shape but still carries the bunch.
    """
    shape = curve_shape(spec)
    if shape.kind in (ShapeKind.STRING_TYPE, ShapeKind.NORMAL_P1):
        return True
    if shape.kind is ShapeKind.WEIGHTED_PROJECTIVE_LINE:
        return all(len(spec.points_on(c.id)) <= 2 for c in spec.components)
    return False


def eligible_for_almost_bunch(spec: NodalCurveSpec) -> bool:
    """Almost-string eligibility, including plain string-type curves."""
    if eligible_for_string_bunch(spec):
        return True
    return curve_shape(spec).kind is ShapeKind.ALMOST_STRING_TYPE


def marked_and_extra_points(spec: NodalCurveSpec) -> tuple:
    shape = curve_shape(spec)
    return shape.marked, shape.extra


# -- JSON schema ---------------------------------------------------------


def spec_from_dict(doc: dict) -> NodalCurveSpec:
    """Parse the input schema: components / points / relations, 1-based."""
    try:
        comps = tuple(
            ComponentSpec(id=c["id"], genus=int(c.get("genus", 0)))
            for c in doc["components"]
        )
        pts = tuple(
            PointSpec(
                id=p["id"],
                component=p["component"],
                image=p["image"],
                n=int(p["n"]),
                m=tuple(int(x) for x in p.get("m", [])),
            )
            for p in doc["points"]
        )
        rels = tuple(
            RelationPair.of(r[0][0], int(r[0][1]), r[1][0], int(r[1][1]))
            for r in doc.get("relations", [])
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"curve schema: missing or malformed field ({exc})") from exc
    return NodalCurveSpec(components=comps, points=pts, relations=rels)


def spec_to_dict(spec: NodalCurveSpec) -> dict:
    return {
        "components": [{"id": c.id, "genus": c.genus} for c in spec.components],
        "points": [
            {
                "id": p.id,
                "component": p.component,
                "image": p.image,
                "n": p.n,
                "m": list(p.m),
            }
            for p in spec.points
        ],
        "relations": [
            [[r.left.point, r.left.index], [r.right.point, r.right.index]]
            for r in spec.relations
        ],
    }
