"""Representation type: finite up to twist / tame / wild, with witnesses.

The nodal dichotomy is decided through the cycle criterion on the point
graph; normal curves go by genus, hereditary rational curves by the
weighted-line rule, and the remaining nodal shapes are wild.  The wild
side also exposes the three Tits forms attached to the two minimal wild
configurations, with their values at the reference tuples pinned exactly
by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .curves import (
    NodalCurveSpec,
    Shape,
    ShapeKind,
    curve_shape,
    eligible_for_almost_bunch,
    eligible_for_string_bunch,
    is_connected,
)


class RepType(str, Enum):
    FINITE_UP_TO_TWIST = "FiniteUpToTwist"
    TAME = "Tame"
    WILD = "Wild"


@dataclass(frozen=True)
class RepTypeVerdict:
    verdict: RepType
    rule: str  # C36 | C42 | WPL | NORMAL | T51-1 | T51-3
    witness: object = None

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, Fraction):
            w = str(w)
        elif isinstance(w, tuple):
            w = list(w)
        return {"verdict": self.verdict.value, "rule": self.rule, "witness": w}


@dataclass(frozen=True)
class CycleWitness:
    """A closed point sequence y_1 .. y_n (y_{n+1} = y_1): odd steps move
    between distinct points of one component (or sit at a marked point),
    even steps follow a relation between the two points."""

    points: tuple

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class AcyclicityWitness:
    """A topological order of the step graph: every edge goes forward,
    so no cycle exists; replayable by checking the order."""

    order: tuple


def _step_graph(spec: NodalCurveSpec, mode: str):
    """Directed bipartite graph on (point, phase): phase 0 nodes take a
    component step, phase 1 nodes take a relation step."""
    if mode == "string":
        if not eligible_for_string_bunch(spec):
            raise ValueError(f"not a string-type curve (shape {curve_shape(spec)})")
        marked = frozenset()
        pids = sorted(p.id for p in spec.points)
    elif mode == "almost":
        if not eligible_for_almost_bunch(spec):
            raise ValueError(f"not an almost-string curve (shape {curve_shape(spec)})")
        shape = curve_shape(spec)
        marked = shape.marked
        extra = shape.extra
        pids = sorted(p.id for p in spec.points if p.id not in extra)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    pid_set = set(pids)
    edges = {}
    for y in pids:
        comp = spec.point(y).component
        comp_steps = [
            z for z in pids if z != y and spec.point(z).component == comp
        ]
        if y in marked:
            comp_steps.append(y)
        edges[(y, 0)] = sorted((z, 1) for z in comp_steps)
    rel_adj = {y: set() for y in pids}
    for r in spec.relations:
        a, b = r.left.point, r.right.point
        if a in pid_set and b in pid_set:
            rel_adj[a].add(b)
            rel_adj[b].add(a)
    for y in pids:
        edges[(y, 1)] = sorted((z, 0) for z in rel_adj[y])
    return pids, edges


def has_cycle(spec: NodalCurveSpec, mode: str = "string"):
    """A shortest legal cycle as a CycleWitness, or an AcyclicityWitness."""
    pids, edges = _step_graph(spec, mode)
    nodes = sorted(edges)

    best = None
    for start in nodes:
        # BFS for the shortest path start -> start.
        prev = {start: None}
        queue = [start]
        found = None
        while queue and found is None:
            nxt_queue = []
            for u in queue:
                for v in edges[u]:
                    if v == start:
                        found = u
                        break
                    if v not in prev:
                        prev[v] = u
                        nxt_queue.append(v)
                if found is not None:
                    break
            queue = nxt_queue
        if found is None:
            continue
        path = [found]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()  # start .. found
        if best is None or len(path) < len(best):
            best = path
    if best is not None:
        # keep cycles starting on a component step so replay is uniform
        if best[0][1] != 0:
            best = best[1:] + best[:1]
        return CycleWitness(points=tuple(y for y, _ in best))

    # certify absence: topological order over the step graph
    indeg = {u: 0 for u in nodes}
    for u in nodes:
        for v in edges[u]:
            indeg[v] += 1
    order, stack = [], sorted(u for u in nodes if indeg[u] == 0)
    while stack:
        u = stack.pop(0)
        order.append(u)
        for v in edges[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
        stack.sort()
    if len(order) != len(nodes):
        raise AssertionError("cycle search missed a cycle")  # pragma: no cover
    return AcyclicityWitness(order=tuple(order))


def replay_cycle(spec: NodalCurveSpec, witness: CycleWitness, mode: str = "string") -> bool:
    """Re-check the cycle conditions step by step."""
    pts = witness.points
    n = len(pts)
    if n == 0 or n % 2:
        return False
    shape = curve_shape(spec)
    marked = shape.marked if shape.kind is ShapeKind.ALMOST_STRING_TYPE else frozenset()
    for k in range(n):
        y, z = pts[k], pts[(k + 1) % n]
        if k % 2 == 0:  # odd step in 1-based numbering
            same_comp = spec.point(y).component == spec.point(z).component
            if y == z:
                if not (mode == "almost" and y in marked):
                    return False
            elif not same_comp:
                return False
        else:
            linked = any(
                {r.left.point, r.right.point} == {y, z}
                or (y == z and r.left.point == y and r.right.point == y)
                for r in spec.relations
            )
            if not linked:
                return False
    return True


def classify_weighted(weights) -> RepTypeVerdict:
    """The weighted-line rule: compare the exact sum of 1/p_k with 1."""
    ps = list(weights)
    if not ps:
        raise ValueError("need at least one weight")
    if any(p < 1 for p in ps):
        raise ValueError("weights must be positive integers")
    total = sum(Fraction(1, p) for p in ps)
    if total > 1:
        verdict = RepType.FINITE_UP_TO_TWIST
    elif total == 1:
        verdict = RepType.TAME
    else:
        verdict = RepType.WILD
    return RepTypeVerdict(verdict=verdict, rule="WPL", witness=total)


def classify(spec: NodalCurveSpec) -> RepTypeVerdict:
    """Dispatch on the curve shape; witnesses are replayable."""
    if not is_connected(spec):
        raise ValueError("curve is disconnected")
    shape = curve_shape(spec)
    kind = shape.kind

    if kind is ShapeKind.NORMAL_P1:
        return RepTypeVerdict(RepType.FINITE_UP_TO_TWIST, rule="NORMAL")
    if kind is ShapeKind.NORMAL_ELLIPTIC:
        return RepTypeVerdict(RepType.TAME, rule="NORMAL")
    if kind is ShapeKind.NORMAL_OTHER:
        return RepTypeVerdict(RepType.WILD, rule="NORMAL", witness="genus >= 2")
    if kind is ShapeKind.WEIGHTED_PROJECTIVE_LINE:
        return classify_weighted(shape.weights)
    if kind in (ShapeKind.STRING_TYPE, ShapeKind.ALMOST_STRING_TYPE):
        mode = "string" if kind is ShapeKind.STRING_TYPE else "almost"
        rule = "C36" if mode == "string" else "C42"
        witness = has_cycle(spec, mode)
        if isinstance(witness, CycleWitness):
            return RepTypeVerdict(RepType.TAME, rule=rule, witness=witness.points)
        return RepTypeVerdict(
            RepType.FINITE_UP_TO_TWIST, rule=rule, witness=witness.order
        )
    # remaining nodal shapes are wild; split the citation by rationality
    if any(c.genus > 0 for c in spec.components):
        return RepTypeVerdict(RepType.WILD, rule="T51-1", witness=str(shape))
    return RepTypeVerdict(RepType.WILD, rule="T51-3", witness=str(shape))


# -- Tits forms of the minimal wild configurations ------------------------


def tits_q1(t1: int, z1: int, z2: int, z3: int) -> int:
    return (
        2 * t1 * t1
        + z1 * z1
        + z2 * z2
        + z1 * z2
        + z3 * z3
        - 2 * t1 * (z1 + z2 + z3)
    )


def tits_q2(t1: int, t2: int, z1: int, z2: int, z3: int) -> int:
    return (
        t1 * t1
        + t2 * t2
        + z1 * z1
        + z2 * z2
        + z1 * z2
        + z3 * z3
        - (t1 + t2) * (z1 + z2 + z3)
    )


def tits_q3b(t1, t2, t3, t4, r1, r2, r3, r4, r5, r6, r7, r8) -> int:
    ts = (t1, t2, t3, t4)
    rs = (r1, r2, r3, r4, r5, r6, r7, r8)
    quad_t = sum(t * t for t in ts) + t1 * t2 + t1 * t4 + t3 * t4
    quad_r = sum(rs[i] * rs[j] for i in range(8) for j in range(i, 8))
    cross = sum(ts) * sum(rs)
    return quad_t + quad_r - cross
