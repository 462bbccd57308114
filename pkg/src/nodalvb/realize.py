"""Concrete triples for strings and bands: summands plus one invertible
labeled block matrix per preimage point.

The construction walks the word: every maximal run of degree letters
spawns a summand (m copies), every dash step contributes a unit block at
(rows of the neighboring summand run, columns of the slot group).  A
self-related slot letter consumed twice contributes two column groups:
the first role takes units against both neighboring runs, the second a
unit against the side whose outward reading (degrees first, then slot
letters, word ends comparing small) is lexicographically smaller.
Special ends choose their role
by the delta flag; bispecial ends split the m copies q / m-q across the
two roles with the half-rank coupling blocks; the wrap-around dash of a
band carries the Jordan block J_m(lambda).  All arithmetic is exact
rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .bunches import (
    KIND_E,
    KIND_F,
    BunchOfChains,
    DegreeWindow,
    build_bunch_string,
)
from .curves import NodalCurveSpec, SlotRef, curve_shape, eligible_for_string_bunch
from .strings_bands import (
    GENERIC,
    Band,
    BispecialString,
    SpecialString,
    UsualString,
    canonical_band,
    validate_object,
)
from .words import SIM, Word, epsilon, shift

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class RowLabel:
    """One summand copy at a point: which line bundle twist, which run of
    the word produced it, which of the m copies."""

    degree: int
    run: int
    copy: int
    component: str = ""

    def summand_id(self) -> str:
        return f"{self.component}:L({self.degree})#r{self.run}c{self.copy}"


@dataclass(frozen=True, order=True)
class ColLabel:
    """One projective copy in a slot: (slot index, emission group, copy)."""

    slot: int
    group: int
    copy: int


@dataclass(frozen=True)
class LabeledBlockMatrix:
    row_labels: tuple
    col_labels: tuple
    entries: tuple  # tuple of tuples of Fraction

    @property
    def nrows(self) -> int:
        return len(self.row_labels)

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def to_lists(self):
        return [list(r) for r in self.entries]

    def to_dict(self) -> dict:
        return {
            "rows": [
                [r.component, r.degree, r.run, r.copy] for r in self.row_labels
            ],
            "cols": [[c.slot, c.group, c.copy] for c in self.col_labels],
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @staticmethod
    def from_dict(doc: dict) -> "LabeledBlockMatrix":
        rows = tuple(
            RowLabel(component=r[0], degree=int(r[1]), run=int(r[2]), copy=int(r[3]))
            for r in doc["rows"]
        )
        cols = tuple(
            ColLabel(slot=int(c[0]), group=int(c[1]), copy=int(c[2]))
            for c in doc["cols"]
        )
        entries = tuple(
            tuple(Fraction(x) for x in row) for row in doc["entries"]
        )
        return LabeledBlockMatrix(rows, cols, entries)


@dataclass(frozen=True)
class TripleRealization:
    """A bundle decomposition plus the gluing matrix at every point."""

    summands: tuple  # (component, degree, multiplicity), aggregated
    theta: dict  # point id -> LabeledBlockMatrix
    params: dict = field(default_factory=dict)

    def matrix(self, point: str) -> LabeledBlockMatrix:
        return self.theta[point]

    def points(self) -> tuple:
        return tuple(sorted(self.theta))

    def dims(self) -> dict:
        return {y: self.theta[y].nrows for y in sorted(self.theta)}

    def to_dict(self) -> dict:
        return {
            "summands": [list(s) for s in self.summands],
            "theta": {y: m.to_dict() for y, m in sorted(self.theta.items())},
            "params": {k: str(v) for k, v in self.params.items()},
        }

    @staticmethod
    def from_dict(doc: dict) -> "TripleRealization":
        return TripleRealization(
            summands=tuple(
                (s[0], int(s[1]), int(s[2])) for s in doc["summands"]
            ),
            theta={
                y: LabeledBlockMatrix.from_dict(m) for y, m in doc["theta"].items()
            },
            params={k: Fraction(v) for k, v in doc.get("params", {}).items()},
        )


def check_invertible(mat: LabeledBlockMatrix) -> bool:
    if mat.nrows != mat.ncols:
        raise ValueError(f"matrix is {mat.nrows}x{mat.ncols}, not square")
    return linalg.is_invertible(mat.to_lists())


# -- the word walker ------------------------------------------------------


def _runs(word: Word):
    """Maximal same-kind segments: lists of letter positions (0-based)."""
    runs = [[0]]
    for i, r in enumerate(word.rels):
        if r == SIM:
            runs[-1].append(i + 1)
        else:
            runs.append([i + 1])
    return runs


def _jordan(n: int, lam: Fraction):
    m = linalg.zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(lam)
        if i + 1 < n:
            m[i][i + 1] = ONE
    return m


def _coupling_blocks(m: int):
    """The half-rank pair (A, B) closing a bispecial end: q = ceil(m/2)."""
    q = (m + 1) // 2
    if m == 2 * q:  # even: A = I_q, B = nilpotent Jordan
        a = linalg.identity(q)
        b = _jordan(q, ZERO)
    else:  # odd: rectangular shifts of sizes (q-1) x q and q x (q-1)
        a = linalg.zeros(q - 1, q)
        for i in range(q - 1):
            a[i][i] = ONE
        b = linalg.zeros(q, q - 1)
        for i in range(q - 1):
            b[i + 1][i] = ONE
    return q, a, b


class _Builder:
    def __init__(self, spec: NodalCurveSpec, mult: int):
        self.spec = spec
        self.mult = mult
        self.rows = {p.id: [] for p in spec.points}  # point -> [RowLabel]
        self.cols = {p.id: [] for p in spec.points}  # point -> [ColLabel]
        self.cells = {p.id: {} for p in spec.points}  # (RowLabel, ColLabel) -> value
        self.next_group = 0

    def add_summand_rows(self, run_idx: int, component: str, degree: int, points):
        for y in points:
            for c in range(self.mult):
                self.rows[y].append(
                    RowLabel(degree=degree, run=run_idx, copy=c, component=component)
                )

    def emit_block(self, y: str, slot: int, run_idx, degree, component, block):
        """One column group at (y, slot); block maps its copies into the
        m rows of summand run ``run_idx`` (block is m x width)."""
        gid = self.next_group
        self.next_group += 1
        width = len(block[0]) if block else 0
        labels = [ColLabel(slot=slot, group=gid, copy=c) for c in range(width)]
        self.cols[y].extend(labels)
        for r in range(len(block)):
            row = RowLabel(degree=degree, run=run_idx, copy=r, component=component)
            for c in range(width):
                if block[r][c] != 0:
                    self.cells[y][(row, labels[c])] = block[r][c]
        return gid, labels

    def emit_shared_group(self, assignments):
        """One column group seen from several (point, slot, run) spots: a
        cross-pair contributes at its two slots, a self-pair's first role
        contributes once but is hit by both neighboring runs."""
        gid = self.next_group
        self.next_group += 1
        placed = set()
        for (y, slot, run_idx, degree, component, block) in assignments:
            w = len(block[0]) if block else 0
            labels_y = [ColLabel(slot=slot, group=gid, copy=c) for c in range(w)]
            if (y, slot) not in placed:
                placed.add((y, slot))
                self.cols[y].extend(labels_y)
            for r in range(len(block)):
                row = RowLabel(
                    degree=degree, run=run_idx, copy=r, component=component
                )
                for c in range(w):
                    if block[r][c] != 0:
                        cell = (row, labels_y[c])
                        self.cells[y][cell] = (
                            self.cells[y].get(cell, ZERO) + block[r][c]
                        )
        return gid

    def finish(self, params) -> TripleRealization:
        theta = {}
        agg = {}
        for y in sorted(self.rows):
            rows = sorted(self.rows[y])
            cols = sorted(self.cols[y])
            cells = self.cells[y]
            entries = tuple(
                tuple(cells.get((r, c), ZERO) for c in cols) for r in rows
            )
            theta[y] = LabeledBlockMatrix(tuple(rows), tuple(cols), entries)
        seen_runs = set()
        for y in self.rows:
            for r in self.rows[y]:
                if r.run not in seen_runs:
                    seen_runs.add(r.run)
                    key = (r.component, r.degree)
                    agg[key] = agg.get(key, 0) + self.mult
        summands = tuple(
            (comp, deg, count) for (comp, deg), count in sorted(agg.items())
        )
        return TripleRealization(summands=summands, theta=theta, params=params)


def _reject_marked(word: Word):
    if any(el.is_marked_row for el in word.letters):
        raise ValueError(
            "realization over almost-string marked points is not supported; "
            "only string-type words can be realized"
        )


_NEAR = -(1 << 60)  # running off a word end compares small


def _outward_runs(runs, start: int, step: int, cyclic: bool):
    n = len(runs)
    idx = start
    for _ in range(n - 1):
        idx = idx + step
        if cyclic:
            idx %= n
        elif not 0 <= idx < n:
            return
        yield idx


def _outward_keys(word, runs, run_kinds, run_degrees, letters, start, step):
    """Comparison keys reading outward: first the degrees of the runs of
    summands, then the slot letters (deeper slots comparing smaller), so
    the choice of the second role is stable under word inversion."""
    degree_seq, letter_seq = [], []
    for idx in _outward_runs(runs, start, step, word.cyclic):
        positions = runs[idx] if step == 1 else list(reversed(runs[idx]))
        if run_kinds[idx] == KIND_F:
            degree_seq.append(run_degrees[idx])
        else:
            for p in positions:
                el = letters[p]
                letter_seq.append((el.component, el.point, -el.index))
    return degree_seq, letter_seq


def _second_role_is_after(word, runs, run_kinds, run_degrees, letters, run_idx,
                          has_before: bool, has_after: bool) -> bool:
    if not has_before:
        return True
    if not has_after:
        return False
    deg_a, let_a = _outward_keys(
        word, runs, run_kinds, run_degrees, letters, run_idx, 1
    )
    deg_b, let_b = _outward_keys(
        word, runs, run_kinds, run_degrees, letters, run_idx, -1
    )
    pad = max(len(deg_a), len(deg_b))
    key_a = tuple(deg_a) + (_NEAR,) * (pad - len(deg_a))
    key_b = tuple(deg_b) + (_NEAR,) * (pad - len(deg_b))
    if key_a != key_b:
        return key_a < key_b
    pad = max(len(let_a), len(let_b))
    near = ("", "", _NEAR)
    lk_a = tuple(let_a) + (near,) * (pad - len(let_a))
    lk_b = tuple(let_b) + (near,) * (pad - len(let_b))
    if lk_a != lk_b:
        return lk_a < lk_b
    return True


def _realize_word(
    spec: NodalCurveSpec,
    word: Word,
    mult: int,
    *,
    delta_first=None,
    delta_last=None,
    bispecial: bool = False,
    lam=None,
) -> TripleRealization:
    _reject_marked(word)
    letters = word.letters
    runs = _runs(word)
    nruns = len(runs)
    run_kinds = [letters[r[0]].kind for r in runs]
    run_degrees = [
        letters[r[0]].degree if letters[r[0]].kind == KIND_F else None for r in runs
    ]
    run_of_pos = {}
    for i, r in enumerate(runs):
        for p in r:
            run_of_pos[p] = i

    builder = _Builder(spec, mult)

    for i, r in enumerate(runs):
        if run_kinds[i] == KIND_F:
            el = letters[r[0]]
            pts = [letters[p].point for p in r]
            builder.add_summand_rows(i, el.component, el.degree, pts)

    def neighbor_run(pos: int, side: int):
        """F-run across the dash on the given side of position pos, or None."""
        q = pos + side
        if word.cyclic:
            q %= len(letters)
            return run_of_pos[q]
        if 0 <= q < len(letters):
            return run_of_pos[q]
        return None

    def is_wrap_dash(pos: int, side: int) -> bool:
        if not word.cyclic:
            return False
        q = pos + side
        return q == len(letters) or q == -1

    def block_for(run_idx: int, pos: int, side: int, width: int):
        """width columns of I (or J at the band wrap) against run run_idx."""
        if lam is not None and is_wrap_dash(pos, side):
            return _jordan(mult, lam)
        m = linalg.zeros(mult, width)
        for c in range(width):
            m[c][c] = ONE
        return m

    for i, r in enumerate(runs):
        if run_kinds[i] != KIND_E:
            continue
        first, last = r[0], r[-1]
        el_first, el_last = letters[first], letters[last]
        if len(r) == 1:
            side = 1 if neighbor_run(first, 1) is not None else -1
            nbr = neighbor_run(first, side)
            if nbr is None:
                continue  # a bare letter with no dash neighbor: nothing to glue
            deg, comp = run_degrees[nbr], letters[runs[nbr][0]].component
            is_end = (first == 0) or (first == len(letters) - 1)
            slot = el_first.index
            # only string ends reach here; self-related ends split by delta
            if is_end and not word.cyclic:
                mate_is_self = _is_self_related(spec, el_first)
                if mate_is_self:
                    delta = delta_first if first == 0 else delta_last
                    if delta is None:
                        raise ValueError("special end needs a delta flag")
                    if bispecial:
                        _emit_bispecial_end(
                            builder,
                            el_first,
                            slot,
                            delta,
                            nbr,
                            deg,
                            comp,
                            mult,
                            coupled=(first != 0),
                        )
                        continue
                    slot = slot + delta
            block = block_for(nbr, first, side, mult)
            builder.emit_block(el_first.point, slot, nbr, deg, comp, block)
            continue
        # a sim-linked pair
        if el_first == el_last and _is_self_related(spec, el_first):
            before = neighbor_run(first, -1)
            after = neighbor_run(last, 1)
            _emit_self_pair(
                builder,
                word,
                runs,
                run_kinds,
                run_degrees,
                letters,
                i,
                before,
                after,
                mult,
                block_for,
                first,
                last,
            )
            continue
        # cross pair: one copy group seen from both sides
        before = neighbor_run(first, -1)
        after = neighbor_run(last, 1)
        assignments = []
        if before is not None:
            assignments.append(
                (
                    el_first.point,
                    el_first.index,
                    before,
                    run_degrees[before],
                    letters[runs[before][0]].component,
                    block_for(before, first, -1, mult),
                )
            )
        if after is not None:
            assignments.append(
                (
                    el_last.point,
                    el_last.index,
                    after,
                    run_degrees[after],
                    letters[runs[after][0]].component,
                    block_for(after, last, 1, mult),
                )
            )
        builder.emit_shared_group(assignments)

    params = {} if lam is None else {"lambda": Fraction(lam)}
    real = builder.finish(params)
    for y, mat in real.theta.items():
        if mat.nrows != mat.ncols:
            raise ValueError(
                f"gluing matrix at {y} is {mat.nrows}x{mat.ncols}; "
                "word inconsistent with the curve"
            )
        if mat.nrows and not check_invertible(mat):
            raise ValueError(f"gluing matrix at {y} is singular")
    return real


def _is_self_related(spec: NodalCurveSpec, el) -> bool:
    return spec.partner(SlotRef(el.point, el.index)) == SlotRef(el.point, el.index)


def _emit_bispecial_end(
    builder, el, slot, delta, nbr_run, deg, comp, mult, *, coupled: bool
):
    """Split the m copies of a bispecial end q / m-q over the two roles.

    The uncoupled end uses the plain identity split; the coupled end (the
    word's last letter) closes the pair through the half-rank blocks."""
    q, a_blk, b_blk = _coupling_blocks(mult)
    slot_q = slot + delta
    slot_rest = slot + 1 - delta
    if not coupled:
        top = linalg.zeros(mult, q)
        for c in range(q):
            top[c][c] = ONE
        builder.emit_block(el.point, slot_q, nbr_run, deg, comp, top)
        rest = linalg.zeros(mult, mult - q)
        for c in range(mult - q):
            rest[q + c][c] = ONE
        if mult - q:
            builder.emit_block(el.point, slot_rest, nbr_run, deg, comp, rest)
        return
    # coupled: [I_q over A] and [B over I_{m-q}]
    blk1 = linalg.zeros(mult, q)
    for c in range(q):
        blk1[c][c] = ONE
    for r in range(len(a_blk)):
        for c in range(q):
            blk1[q + r][c] = a_blk[r][c]
    builder.emit_block(el.point, slot_q, nbr_run, deg, comp, blk1)
    if mult - q:
        blk2 = linalg.zeros(mult, mult - q)
        for r in range(q):
            for c in range(mult - q):
                blk2[r][c] = b_blk[r][c]
        for c in range(mult - q):
            blk2[q + c][c] = ONE
        builder.emit_block(el.point, slot_rest, nbr_run, deg, comp, blk2)


def _emit_self_pair(
    builder,
    word,
    runs,
    run_kinds,
    run_degrees,
    letters,
    run_idx,
    before,
    after,
    mult,
    block_for,
    first,
    last,
):
    """Two roles of a self-related letter: role' hits both neighbor runs,
    role'' hits the side with the lexicographically smaller outward
    reading, so the choice does not depend on traversal direction."""
    el = letters[first]
    point, slot = el.point, el.index
    second_side_after = _second_role_is_after(
        word,
        runs,
        run_kinds,
        run_degrees,
        letters,
        run_idx,
        before is not None,
        after is not None,
    )

    assignments = []
    if before is not None:
        assignments.append(
            (
                point,
                slot,
                before,
                run_degrees[before],
                letters[runs[before][0]].component,
                block_for(before, first, -1, mult),
            )
        )
    if after is not None:
        assignments.append(
            (
                point,
                slot,
                after,
                run_degrees[after],
                letters[runs[after][0]].component,
                block_for(after, last, 1, mult),
            )
        )
    builder.emit_shared_group(assignments)  # role': units at both sides
    # role'': a plain identity block at the chosen side only
    side_run = after if (second_side_after and after is not None) else before
    side_pos, side_dir = (last, 1) if (second_side_after and after is not None) else (
        first,
        -1,
    )
    if side_run is None:
        return
    ident = linalg.zeros(mult, mult)
    for c in range(mult):
        ident[c][c] = ONE
    builder.emit_block(
        point,
        slot + 1,
        side_run,
        run_degrees[side_run],
        letters[runs[side_run][0]].component,
        ident,
    )


# -- public constructors ---------------------------------------------------


def _bunch_for(spec: NodalCurveSpec, word: Word) -> BunchOfChains:
    degs = [el.degree for el in word.letters if el.kind == KIND_F]
    lo = min(degs) if degs else 0
    hi = max(degs) if degs else 0
    return build_bunch_string(spec, DegreeWindow(lo, hi))


def realize_string(s, spec: NodalCurveSpec) -> TripleRealization:
    """Realize a usual, special, or bispecial string over the curve."""
    if not eligible_for_string_bunch(spec):
        raise ValueError(f"not a string-type curve (shape {curve_shape(spec)})")
    bunch = _bunch_for(spec, s.word)
    validate_object(bunch, s)
    if isinstance(s, UsualString):
        return _realize_word(spec, s.word, 1)
    letters = s.word.letters
    first_special = _is_self_related(spec, letters[0])
    if isinstance(s, SpecialString):
        return _realize_word(
            spec,
            s.word,
            1,
            delta_first=s.delta if first_special else None,
            delta_last=None if first_special else s.delta,
        )
    if isinstance(s, BispecialString):
        return _realize_word(
            spec,
            s.word,
            s.m,
            delta_first=s.delta0,
            delta_last=s.delta1,
            bispecial=True,
        )
    raise TypeError(f"not a string object: {s!r}")


def realize_band(b: Band, spec: NodalCurveSpec, lam=None) -> TripleRealization:
    """Realize a band at an explicit nonzero parameter value.

    The band is first replaced by its canonical representative (the
    parameter transported along the shift and inversion moves), so
    equivalent inputs produce identical matrices.  The representative is
    then rotated, if needed, so the wrap-around dash avoids self-related
    slot letters whenever possible."""
    if not eligible_for_string_bunch(spec):
        raise ValueError(f"not a string-type curve (shape {curve_shape(spec)})")
    if lam is None:
        if b.lam is GENERIC:
            raise ValueError("band parameter required (the object is generic)")
        lam = b.lam
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("band parameter must be nonzero")
    bunch = _bunch_for(spec, b.word)
    validate_object(bunch, Band(b.word, b.m, lam))

    bc = canonical_band(Band(b.word, b.m, lam))
    word, lam_rot = bc.word, Fraction(bc.lam)
    if _wrap_is_self_pair(spec, word):
        for k in range(2, len(word.letters), 2):
            cand = shift(word, k)
            if not _wrap_is_self_pair(spec, cand):
                word = cand
                lam_rot = lam_rot if epsilon(bc.word, k) == 1 else 1 / lam_rot
                break
    real = _realize_word(spec, word, b.m, lam=lam_rot)
    return TripleRealization(
        summands=real.summands, theta=real.theta, params={"lambda": lam}
    )


def _wrap_is_self_pair(spec: NodalCurveSpec, word: Word) -> bool:
    """Whether the wrap dash touches a self-related slot letter's pair."""
    ends = (word.letters[0], word.letters[-1])
    el = next((e for e in ends if e.kind == KIND_E), None)
    return el is not None and _is_self_related(spec, el)


def direct_sum(a: TripleRealization, b: TripleRealization) -> TripleRealization:
    """Block-diagonal sum; run indices of ``b`` are shifted to stay unique."""
    offset = 1 + max(
        (r.run for m in a.theta.values() for r in m.row_labels), default=0
    )
    goffset = 1 + max(
        (c.group for m in a.theta.values() for c in m.col_labels), default=0
    )
    points = sorted(set(a.theta) | set(b.theta))
    theta = {}
    for y in points:
        rows, cols, cells = [], [], {}
        for src, roff, goff in ((a, 0, 0), (b, offset, goffset)):
            if y not in src.theta:
                continue
            m = src.theta[y]
            rmap = {
                r: RowLabel(r.degree, r.run + roff, r.copy, r.component)
                for r in m.row_labels
            }
            cmap = {
                c: ColLabel(c.slot, c.group + goff, c.copy) for c in m.col_labels
            }
            rows.extend(rmap.values())
            cols.extend(cmap.values())
            for i, r in enumerate(m.row_labels):
                for j, c in enumerate(m.col_labels):
                    v = m.entries[i][j]
                    if v != 0:
                        cells[(rmap[r], cmap[c])] = v
        rows.sort()
        cols.sort()
        entries = tuple(tuple(cells.get((r, c), ZERO) for c in cols) for r in rows)
        theta[y] = LabeledBlockMatrix(tuple(rows), tuple(cols), entries)
    agg = {}
    for src in (a, b):
        for comp, deg, mult in src.summands:
            agg[(comp, deg)] = agg.get((comp, deg), 0) + mult
    summands = tuple((c, d, n) for (c, d), n in sorted(agg.items()))
    return TripleRealization(summands=summands, theta=theta, params={})


# -- the precanonical patterns at extra points -----------------------------

_PRE_PATTERNS = {
    ("y1", 1): {1: 2, 2: 4},  # column group -> row group carrying I
    ("y1", 2): {1: 1, 2: 3},
    ("y2", 1): {1: 3, 2: 4},
    ("y2", 2): {1: 1, 2: 2},
}


def precanonical_blocks(sizes) -> dict:
    """The four fixed gluing patterns at a pair of extra points.

    ``sizes`` gives the four horizontal stripe sizes (s1..s4); each of the
    four matrices has those row groups and two column groups whose widths
    equal the row groups they hit with an identity block.
    """
    s = tuple(int(x) for x in sizes)
    if len(s) != 4 or any(x < 0 for x in s):
        raise ValueError("need four nonnegative stripe sizes")
    row_offsets = [0]
    for x in s:
        row_offsets.append(row_offsets[-1] + x)
    total = row_offsets[-1]
    out = {}
    for key, hits in _PRE_PATTERNS.items():
        widths = [s[hits[1] - 1], s[hits[2] - 1]]
        mat = linalg.zeros(total, sum(widths))
        col0 = 0
        col_labels = []
        for cg in (1, 2):
            rg = hits[cg]
            for c in range(s[rg - 1]):
                mat[row_offsets[rg - 1] + c][col0 + c] = ONE
                col_labels.append(ColLabel(slot=key[1], group=cg, copy=c))
            col0 += s[rg - 1]
        rows = tuple(
            RowLabel(degree=0, run=g, copy=c, component=key[0])
            for g in range(1, 5)
            for c in range(s[g - 1])
        )
        out[key] = LabeledBlockMatrix(
            row_labels=rows,
            col_labels=tuple(col_labels),
            entries=tuple(tuple(row) for row in mat),
        )
    return out
