"""The bunch of chains attached to a curve, over a finite degree window.

Each point of the index set carries two chains: the slot chain (E-kind
elements (y,i), one per surviving slot of the local data) and the degree
chain (F-kind elements (d,y), one per window degree).  At a marked point
of an almost-string curve the degree chain is refined into elements
(d,y,alpha) with alpha in {0,1}, each related to itself.

The relation ~ pairs each element with at most one partner; self-pairs
are stored literally (an element partnered with itself).
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import (
    NodalCurveSpec,
    ShapeKind,
    SlotRef,
    curve_shape,
    eligible_for_almost_bunch,
    eligible_for_string_bunch,
)

KIND_E = "E"
KIND_F = "F"


@dataclass(frozen=True, order=True)
class ChainElement:
    """One letter of the bunch alphabet.

    E-kind carries a slot index; F-kind carries a degree, plus an alpha
    flag at marked points.  The component is recorded so letters order
    and print without a spec lookup.
    """

    kind: str
    component: str
    point: str
    index: int = 0
    degree: int = 0
    alpha: int = -1

    @property
    def is_marked_row(self) -> bool:
        return self.kind == KIND_F and self.alpha >= 0

    def sort_key(self):
        return (
            self.component,
            self.point,
            0 if self.kind == KIND_E else 1,
            self.degree,
            self.index,
            self.alpha,
        )

    def __str__(self):
        if self.kind == KIND_E:
            return f"({self.point},{self.index})"
        if self.alpha >= 0:
            return f"({self.degree},{self.point},{self.alpha})"
        return f"({self.degree},{self.point})"


def slot_element(component: str, point: str, index: int) -> ChainElement:
    return ChainElement(kind=KIND_E, component=component, point=point, index=index)


def degree_element(component: str, point: str, degree: int) -> ChainElement:
    return ChainElement(kind=KIND_F, component=component, point=point, degree=degree)


def marked_element(component: str, point: str, degree: int, alpha: int) -> ChainElement:
    return ChainElement(
        kind=KIND_F, component=component, point=point, degree=degree, alpha=alpha
    )


@dataclass(frozen=True)
class DegreeWindow:
    d_min: int
    d_max: int

    def __post_init__(self):
        if self.d_min > self.d_max:
            raise ValueError(f"window [{self.d_min},{self.d_max}] is empty")

    def degrees(self) -> range:
        return range(self.d_min, self.d_max + 1)


@dataclass(frozen=True)
class BunchOfChains:
    """Immutable bunch: chains per point plus the pairing relation."""

    spec: NodalCurveSpec
    window: DegreeWindow
    points: tuple
    e_chains: dict
    f_chains: dict
    partner_map: dict
    marked: frozenset = frozenset()

    def e_chain(self, point: str) -> tuple:
        return self.e_chains[point]

    def f_chain(self, point: str) -> tuple:
        return self.f_chains[point]

    def component_of(self, point: str) -> str:
        return self.spec.point(point).component

    def partner(self, el: ChainElement):
        return self.partner_map.get(el)

    def elements(self) -> list:
        out = []
        for p in self.points:
            out.extend(self.e_chains[p])
            out.extend(self.f_chains[p])
        return out

    def has_element(self, el: ChainElement) -> bool:
        if el.point not in set(self.points):
            return False
        chain = self.e_chains[el.point] if el.kind == KIND_E else self.f_chains[el.point]
        return el in chain

    def dash_ok(self, a: ChainElement, b: ChainElement) -> bool:
        """Whether a - b may appear in a word: opposite chains, same point."""
        return a.point == b.point and a.kind != b.kind


def _slot_chain(spec: NodalCurveSpec, pid: str) -> tuple:
    p = spec.point(pid)
    comp = p.component
    removed = {
        i + 1
        for i in range(1, p.n)
        if spec.partner(SlotRef(pid, i)) == SlotRef(pid, i)
    }
    return tuple(
        slot_element(comp, pid, i) for i in range(1, p.n + 1) if i not in removed
    )


def _string_chains(spec, window, pids):
    e_chains, f_chains, partner = {}, {}, {}
    for pid in pids:
        comp = spec.point(pid).component
        e_chains[pid] = _slot_chain(spec, pid)
        f_chains[pid] = tuple(degree_element(comp, pid, d) for d in window.degrees())
    # slot pairing from the nodal data
    for pid in pids:
        for el in e_chains[pid]:
            mate = spec.partner(SlotRef(pid, el.index))
            if mate is not None and mate.point in set(pids):
                comp2 = spec.point(mate.point).component
                partner[el] = slot_element(comp2, mate.point, mate.index)
    # degree pairing across the two points of one component
    by_comp = {}
    for pid in pids:
        by_comp.setdefault(spec.point(pid).component, []).append(pid)
    for comp, members in by_comp.items():
        if len(members) == 2:
            a, b = members
            for d in window.degrees():
                ea, eb = degree_element(comp, a, d), degree_element(comp, b, d)
                partner[ea] = eb
                partner[eb] = ea
    return e_chains, f_chains, partner


def build_bunch_string(spec: NodalCurveSpec, window: DegreeWindow) -> BunchOfChains:
    """The bunch of a string-type curve.

    Accepts any curve satisfying the string-type conditions (rational,
    at most two points of the preimage set per component), including
    hereditary-only curves whose reported shape is a weighted line.
    """
    if not eligible_for_string_bunch(spec):
        raise ValueError(f"not a string-type curve (shape {curve_shape(spec)})")
    pids = tuple(sorted(p.id for p in spec.points))
    e_chains, f_chains, partner = _string_chains(spec, window, pids)
    return BunchOfChains(
        spec=spec,
        window=window,
        points=pids,
        e_chains=e_chains,
        f_chains=f_chains,
        partner_map=partner,
    )


def build_bunch_almost(spec: NodalCurveSpec, window: DegreeWindow) -> BunchOfChains:
    """The refined bunch of an almost-string curve.

    Extra points leave the index set.  At each marked point the degree
    chain is replaced by the elements (d, y, alpha), ordered by (d, alpha)
    and all self-related; the slot chain stays, so gluing relations at the
    marked point survive.  At every other point the chains agree with the
    string construction.
    """
    if not eligible_for_almost_bunch(spec):
        raise ValueError(f"not an almost-string curve (shape {curve_shape(spec)})")
    shape = curve_shape(spec)
    marked = shape.marked if shape.kind is ShapeKind.ALMOST_STRING_TYPE else frozenset()
    extra = shape.extra if shape.kind is ShapeKind.ALMOST_STRING_TYPE else frozenset()
    pids = tuple(sorted(p.id for p in spec.points if p.id not in extra))
    e_chains, f_chains, partner = _string_chains(spec, window, pids)
    for pid in pids:
        if pid not in marked:
            continue
        comp = spec.point(pid).component
        chain = tuple(
            marked_element(comp, pid, d, a) for d in window.degrees() for a in (0, 1)
        )
        for old in f_chains[pid]:
            partner.pop(old, None)
        f_chains[pid] = chain
        for el in chain:
            partner[el] = el
    return BunchOfChains(
        spec=spec,
        window=window,
        points=pids,
        e_chains=e_chains,
        f_chains=f_chains,
        partner_map=partner,
        marked=frozenset(marked),
    )


def to_dot(bunch: BunchOfChains) -> str:
    """Deterministic DOT rendering: a cluster per point, chain order as
    solid arrows, the pairing as dashed edges (self-pairs as loops)."""
    ids = {}
    for p in bunch.points:
        for el in list(bunch.e_chain(p)) + list(bunch.f_chain(p)):
            ids[el] = f"n{len(ids)}"
    lines = ["graph bunch {", "  rankdir=LR;"]
    for p in bunch.points:
        lines.append(f'  subgraph "cluster_{p}" {{')
        lines.append(f'    label="{p}";')
        for el in list(bunch.e_chain(p)) + list(bunch.f_chain(p)):
            lines.append(f'    {ids[el]} [label="{el}"];')
        for chain in (bunch.e_chain(p), bunch.f_chain(p)):
            for a, b in zip(chain, chain[1:]):
                lines.append(f"    {ids[a]} -- {ids[b]} [dir=forward];")
        lines.append("  }")
    seen = set()
    for p in bunch.points:
        for el in list(bunch.e_chain(p)) + list(bunch.f_chain(p)):
            mate = bunch.partner(el)
            if mate is None:
                continue
            key = frozenset({el, mate}) if mate != el else frozenset({el})
            if key in seen:
                continue
            seen.add(key)
            lines.append(f"  {ids[el]} -- {ids[mate]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
