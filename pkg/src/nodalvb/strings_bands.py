"""Strings and bands: decorated words up to the classification equivalences.

Canonical forms fix one representative per equivalence class (inversion
for strings; even shifts and inversion, acting on the parameter, for
bands), so equality of canonical forms decides equivalence.  Enumeration
walks the bunch depth-first inside a degree window.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .bunches import KIND_F, BunchOfChains, ChainElement
from .words import (
    DASH,
    SIM,
    Word,
    WordKind,
    all_even_shifts,
    check_word,
    classify_word,
    epsilon,
    format_word,
    invert,
    is_aperiodic,
    is_cyclic_symmetric,
    is_quasisymmetric,
    is_symmetric,
    parse_word,
    shift,
)

GENERIC = None  # symbolic band parameter: a 1-parameter family


@dataclass(frozen=True)
class UsualString:
    word: Word


@dataclass(frozen=True)
class SpecialString:
    word: Word
    delta: int


@dataclass(frozen=True)
class BispecialString:
    word: Word
    m: int
    delta0: int
    delta1: int


@dataclass(frozen=True)
class Band:
    word: Word
    m: int
    lam: object = GENERIC  # Fraction, or GENERIC during enumeration

    @property
    def lambda_must_avoid_one(self) -> bool:
        return is_cyclic_symmetric(self.word)


def validate_object(bunch: BunchOfChains, obj) -> None:
    """Raise ValueError unless ``obj`` satisfies its defining invariants."""
    w = obj.word
    if not check_word(bunch, w):
        raise ValueError(f"invalid word {format_word(w)}")
    if isinstance(obj, Band):
        if w.cyclic is False:
            raise ValueError("a band needs a cyclic word")
        if not is_aperiodic(w):
            raise ValueError("a band word must be aperiodic")
        if obj.m < 1:
            raise ValueError("band multiplicity must be >= 1")
        if obj.lam is not GENERIC:
            lam = Fraction(obj.lam)
            if lam == 0:
                raise ValueError("band parameter must be nonzero")
            if lam == 1 and is_cyclic_symmetric(w):
                raise ValueError("cyclic-symmetric band words exclude lambda = 1")
        return
    verdict = classify_word(bunch, w)
    if verdict.kind is not WordKind.TERMINATING:
        raise ValueError(f"{format_word(w)} is not terminating")
    if isinstance(obj, UsualString):
        if verdict.terminating_kind != "usual":
            raise ValueError("usual string needs a usual word")
        if is_symmetric(w):
            raise ValueError("usual strings exclude symmetric words")
    elif isinstance(obj, SpecialString):
        if verdict.terminating_kind != "special":
            raise ValueError("special string needs a special word")
        if obj.delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")
    elif isinstance(obj, BispecialString):
        if verdict.terminating_kind != "bispecial":
            raise ValueError("bispecial string needs a bispecial word")
        if obj.m < 1:
            raise ValueError("multiplicity must be >= 1")
        if obj.delta0 not in (0, 1) or obj.delta1 not in (0, 1):
            raise ValueError("deltas must be 0 or 1")
        if is_symmetric(w) or is_quasisymmetric(w):
            raise ValueError("bispecial strings exclude (quasi)symmetric words")
    else:
        raise ValueError(f"unknown object {obj!r}")


def canonical_string(s):
    """The least of s and its inversion under the fixed word order."""
    w = s.word
    wi = invert(w)
    if isinstance(s, UsualString):
        return s if w.sort_key() <= wi.sort_key() else UsualString(wi)
    if isinstance(s, SpecialString):
        return s if w.sort_key() <= wi.sort_key() else SpecialString(wi, s.delta)
    if isinstance(s, BispecialString):
        if w.sort_key() <= wi.sort_key():
            return s
        return BispecialString(wi, s.m, s.delta1, s.delta0)
    raise TypeError(f"not a string object: {s!r}")


def _lam_key(lam):
    if lam is GENERIC:
        return (1, Fraction(0))
    return (0, Fraction(lam))


def _lam_power(lam, sign: int):
    if lam is GENERIC:
        return GENERIC
    lam = Fraction(lam)
    return lam if sign == 1 else 1 / lam


def canonical_band(b: Band) -> Band:
    """Least representative over all even shifts and the inversion move,
    with the parameter transported by the corresponding sign."""
    candidates = []
    for k, s in all_even_shifts(b.word):
        candidates.append((s, _lam_power(b.lam, epsilon(b.word, k))))
    wi = invert(b.word)
    lam_inv = _lam_power(b.lam, -1)
    for k, s in all_even_shifts(wi):
        candidates.append((s, _lam_power(lam_inv, epsilon(wi, k))))
    best = min(candidates, key=lambda c: (c[0].sort_key(), _lam_key(c[1])))
    return Band(word=best[0], m=b.m, lam=best[1])


def canonicalize(obj):
    return canonical_band(obj) if isinstance(obj, Band) else canonical_string(obj)


def word_rank(obj) -> int:
    """The word contribution l/4 to the rank."""
    return len(obj.word.letters) // 4


def rank(obj) -> int:
    """Rank of the corresponding bundle: l/4, times m for the m-decorated
    families (their normalization carries m copies of each summand)."""
    base = word_rank(obj)
    if isinstance(obj, (BispecialString, Band)):
        return obj.m * base
    return base


def _shift_letter(el: ChainElement, offset: int) -> ChainElement:
    if el.kind == KIND_F:
        return replace(el, degree=el.degree - offset)
    return el


def twist_canonicalize(obj):
    """Shift degrees by a per-component constant so each occupied
    component has minimum degree 0."""
    w = obj.word
    mins = {}
    for el in w.letters:
        if el.kind == KIND_F:
            cur = mins.get(el.component)
            mins[el.component] = el.degree if cur is None else min(cur, el.degree)
    letters = tuple(
        _shift_letter(el, mins.get(el.component, 0)) for el in w.letters
    )
    return replace(obj, word=replace(w, letters=letters))


# -- enumeration ----------------------------------------------------------


def _terminating_words(bunch: BunchOfChains, max_len: int):
    """All terminating words up to inversion (canonical representatives)."""
    elements = sorted(bunch.elements(), key=lambda e: e.sort_key())
    seen = set()
    out = []

    def emit(letters, rels):
        w = Word(letters=tuple(letters), rels=tuple(rels))
        wc = w if w.sort_key() <= invert(w).sort_key() else invert(w)
        key = wc.sort_key()
        if key not in seen:
            seen.add(key)
            out.append(wc)

    def extend(letters, rels):
        # invariant: the last relation is DASH and the word may stop here
        # only if its tail is loose; callers check that before emitting.
        cur = letters[-1]
        mate = bunch.partner(cur)
        if mate is None or mate == cur:
            emit(letters, rels)
        if mate is None:
            return
        if len(letters) + 2 > max_len:
            return
        after_sim = letters + [mate]
        srels = rels + [SIM]
        for nxt in elements:
            if bunch.dash_ok(mate, nxt):
                extend(after_sim + [nxt], srels + [DASH])

    for start in elements:
        mate = bunch.partner(start)
        if mate is not None and mate != start:
            continue  # a dash end must be loose
        if max_len < 2:
            continue
        for nxt in elements:
            if bunch.dash_ok(start, nxt):
                extend([start, nxt], [DASH])
    return out


def _cyclic_words(bunch: BunchOfChains, max_len: int):
    """All aperiodic cyclic words up to shift and inversion."""
    elements = sorted(bunch.elements(), key=lambda e: e.sort_key())
    seen = set()
    out = []

    def canonical_cyclic(w):
        cands = [s for _, s in all_even_shifts(w)]
        cands += [s for _, s in all_even_shifts(invert(w))]
        return min(cands, key=lambda s: s.sort_key())

    def emit(letters, rels):
        w = Word(letters=tuple(letters), rels=tuple(rels), cyclic=True)
        if not is_aperiodic(w):
            return
        wc = canonical_cyclic(w)
        key = wc.sort_key()
        if key not in seen:
            seen.add(key)
            out.append(wc)

    def extend(letters, rels):
        # the word so far ends right after a dash step; a sim is next.
        cur = letters[-1]
        start_key = letters[0].sort_key()
        if cur.sort_key() < start_key:
            return  # the canonical rotation starts at the least odd position
        mate = bunch.partner(cur)
        if mate is None:
            return
        after_sim = letters + [mate]
        srels = rels + [SIM]
        if len(after_sim) >= 4 and bunch.dash_ok(mate, letters[0]):
            emit(after_sim, srels)
        if len(after_sim) + 2 > max_len:
            return
        for nxt in elements:
            if bunch.dash_ok(mate, nxt):
                extend(after_sim + [nxt], srels + [DASH])

    for start in elements:
        mate = bunch.partner(start)
        if mate is None:
            continue
        if len(elements) and max_len >= 4:
            after = [start, mate]
            srels = [SIM]
            for nxt in elements:
                if bunch.dash_ok(mate, nxt):
                    extend(after + [nxt], srels + [DASH])
    return out


def enumerate_objects(bunch: BunchOfChains, max_word_len: int, m_max: int):
    """All canonical strings and bands with word length <= max_word_len
    and multiplicity <= m_max; bands carry the symbolic parameter."""
    if max_word_len < 4:
        raise ValueError("max_word_len must be >= 4")
    strings = []
    for w in _terminating_words(bunch, max_word_len):
        verdict = classify_word(bunch, w)
        kind = verdict.terminating_kind
        if kind == "usual":
            if not is_symmetric(w):
                strings.append(UsualString(w))
        elif kind == "special":
            for delta in (0, 1):
                strings.append(SpecialString(w, delta))
        elif kind == "bispecial":
            if is_symmetric(w) or is_quasisymmetric(w):
                continue
            for m in range(1, m_max + 1):
                for d0 in (0, 1):
                    for d1 in (0, 1):
                        strings.append(
                            canonical_string(BispecialString(w, m, d0, d1))
                        )
    bands = []
    for w in _cyclic_words(bunch, max_word_len):
        for m in range(1, m_max + 1):
            bands.append(canonical_band(Band(w, m, GENERIC)))
    strings = sorted(set(strings), key=object_sort_key)
    bands = sorted(set(bands), key=object_sort_key)
    return strings, bands


def object_sort_key(obj):
    w = obj.word
    if isinstance(obj, UsualString):
        return (0, w.sort_key(), 0, 0, 0)
    if isinstance(obj, SpecialString):
        return (1, w.sort_key(), obj.delta, 0, 0)
    if isinstance(obj, BispecialString):
        return (2, w.sort_key(), obj.m, obj.delta0, obj.delta1)
    return (3, w.sort_key(), obj.m, 0, 0)


# -- textual syntax -------------------------------------------------------


def _format_lam(lam):
    return "generic" if lam is GENERIC else str(Fraction(lam))


def format_object(obj) -> str:
    if isinstance(obj, UsualString):
        return f"usual[{format_word(obj.word)}]"
    if isinstance(obj, SpecialString):
        return f"special[{format_word(obj.word)}; {obj.delta}]"
    if isinstance(obj, BispecialString):
        return (
            f"bispecial[{format_word(obj.word)}; {obj.m};"
            f" {obj.delta0}; {obj.delta1}]"
        )
    if isinstance(obj, Band):
        return f"band[{format_word(obj.word)}; {obj.m}; {_format_lam(obj.lam)}]"
    raise TypeError(f"not a classification object: {obj!r}")


def parse_object(bunch: BunchOfChains, text: str):
    text = text.strip()
    head, _, rest = text.partition("[")
    if not rest.endswith("]"):
        raise ValueError(f"cannot parse object {text!r}")
    parts = [p.strip() for p in rest[:-1].split(";")]
    w = parse_word(bunch, parts[0])
    if head == "usual":
        return UsualString(w)
    if head == "special":
        return SpecialString(w, int(parts[1]))
    if head == "bispecial":
        return BispecialString(w, int(parts[1]), int(parts[2]), int(parts[3]))
    if head == "band":
        lam = GENERIC if parts[2] == "generic" else Fraction(parts[2])
        return Band(w, int(parts[1]), lam)
    raise ValueError(f"unknown object kind {head!r}")
