"""Words over the bunch alphabet: validity, fullness, ends, shifts, signs.

A word is a sequence of chain elements joined by alternating relations:
``~`` (the bunch pairing, including self-pairs consumed twice) and ``-``
(which ties the two chains of one point).  Cyclic words carry the
wrap-around dash implicitly in the ``cyclic`` flag; the stored relation
list always has length len(letters) - 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .bunches import (
    BunchOfChains,
    ChainElement,
    degree_element,
    marked_element,
    slot_element,
)

SIM = "~"
DASH = "-"


@dataclass(frozen=True)
class Word:
    letters: tuple
    rels: tuple
    cyclic: bool = False

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a word needs at least one letter")
        if len(self.rels) != len(self.letters) - 1:
            raise ValueError("need exactly len(letters) - 1 relations")
        if any(r not in (SIM, DASH) for r in self.rels):
            raise ValueError("relations must be '~' or '-'")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self)

    def sort_key(self):
        return (
            len(self.letters),
            tuple(el.sort_key() for el in self.letters),
            self.rels,
            self.cyclic,
        )


class WordKind(str, Enum):
    NOT_FULL = "NotFull"
    FULL = "Full"
    TERMINATING = "Terminating"
    CYCLIC = "Cyclic"


class EndKind(str, Enum):
    USUAL = "usual"
    SPECIAL = "special"


@dataclass(frozen=True)
class WordVerdict:
    kind: WordKind
    terminating_kind: str = ""  # usual | special | bispecial
    end_kinds: tuple = ()

    def __str__(self):
        if self.kind is WordKind.TERMINATING:
            return f"Terminating({self.terminating_kind})"
        return self.kind.value


def check_word(bunch: BunchOfChains, w: Word) -> bool:
    """Validity of ``w`` against the bunch (all-local conditions)."""
    letters, rels = w.letters, w.rels
    for el in letters:
        if not bunch.has_element(el):
            return False
    for i, r in enumerate(rels):
        a, b = letters[i], letters[i + 1]
        if r == SIM:
            if bunch.partner(a) != b:
                return False
        else:
            if not bunch.dash_ok(a, b):
                return False
        if i + 1 < len(rels) and rels[i + 1] == r:
            return False
    if w.cyclic:
        if len(letters) < 4:
            return False
        if rels[0] != SIM or rels[-1] != SIM:
            return False
        if not bunch.dash_ok(letters[-1], letters[0]):
            return False
    return True


def _end_is_loose(bunch: BunchOfChains, el: ChainElement) -> bool:
    # Fullness at a dash end: no partner other than the element itself.
    mate = bunch.partner(el)
    return mate is None or mate == el


def is_full(bunch: BunchOfChains, w: Word) -> bool:
    if w.cyclic:
        return True
    left_ok = (w.rels and w.rels[0] == SIM) or _end_is_loose(bunch, w.letters[0])
    right_ok = (w.rels and w.rels[-1] == SIM) or _end_is_loose(bunch, w.letters[-1])
    return left_ok and right_ok


def _end_kind(bunch: BunchOfChains, el: ChainElement) -> EndKind:
    return EndKind.SPECIAL if bunch.partner(el) == el else EndKind.USUAL


def classify_word(bunch: BunchOfChains, w: Word) -> WordVerdict:
    """Verdict per the word taxonomy; assumes check_word(bunch, w)."""
    if w.cyclic:
        return WordVerdict(WordKind.CYCLIC)
    if not is_full(bunch, w):
        return WordVerdict(WordKind.NOT_FULL)
    terminating = (
        len(w.letters) >= 2 and w.rels[0] == DASH and w.rels[-1] == DASH
    )
    if not terminating:
        return WordVerdict(WordKind.FULL)
    ends = (_end_kind(bunch, w.letters[0]), _end_kind(bunch, w.letters[-1]))
    specials = sum(1 for e in ends if e is EndKind.SPECIAL)
    tkind = ("usual", "special", "bispecial")[specials]
    return WordVerdict(WordKind.TERMINATING, terminating_kind=tkind, end_kinds=ends)


def invert(w: Word) -> Word:
    return Word(
        letters=tuple(reversed(w.letters)),
        rels=tuple(reversed(w.rels)),
        cyclic=w.cyclic,
    )


def is_symmetric(w: Word) -> bool:
    return w == invert(w)


def is_quasisymmetric(w: Word) -> bool:
    """Whether w splits as v ~ v* ~ v ~ ... ~ v* ~ v for a shorter v."""
    l = len(w.letters)
    for blocks in range(3, l + 1, 2):
        if l % blocks:
            continue
        span = l // blocks
        v_letters = w.letters[:span]
        v_rels = w.rels[: span - 1]
        ok = True
        for j in range(blocks):
            lo = j * span
            expected = v_letters if j % 2 == 0 else tuple(reversed(v_letters))
            expected_rels = v_rels if j % 2 == 0 else tuple(reversed(v_rels))
            if w.letters[lo : lo + span] != expected:
                ok = False
                break
            if w.rels[lo : lo + span - 1] != expected_rels:
                ok = False
                break
            if j and w.rels[lo - 1] != SIM:
                ok = False
                break
        if ok:
            return True
    return False


def _require_cyclic(w: Word):
    if not w.cyclic:
        raise ValueError("operation defined for cyclic words only")


def shift(w: Word, k: int) -> Word:
    """The rotation starting k letters in; k must be even (mod the length)."""
    _require_cyclic(w)
    if k % 2:
        raise ValueError("shift offset must be even")
    l = len(w.letters)
    k %= l
    if k == 0:
        return w
    ring = list(w.rels) + [DASH]
    new_ring = ring[k:] + ring[:k]
    return Word(
        letters=w.letters[k:] + w.letters[:k],
        rels=tuple(new_ring[:-1]),
        cyclic=True,
    )


def epsilon(w: Word, k: int) -> int:
    """The sign (-1)^(k/2) of an even shift, reduced mod the length."""
    _require_cyclic(w)
    if k % 2:
        raise ValueError("shift offset must be even")
    k %= len(w.letters)
    return -1 if (k // 2) % 2 else 1


def all_even_shifts(w: Word):
    _require_cyclic(w)
    for k in range(0, len(w.letters), 2):
        yield k, shift(w, k)


def is_aperiodic(w: Word) -> bool:
    _require_cyclic(w)
    return all(shift(w, k) != w for k in range(2, len(w.letters), 2))


def is_cyclic_symmetric(w: Word) -> bool:
    _require_cyclic(w)
    rev = invert(w)
    return any(s == rev for _, s in all_even_shifts(w))


def cyclic_symmetry_shifts(w: Word) -> tuple:
    """All even k with w* = w^[k]."""
    _require_cyclic(w)
    rev = invert(w)
    return tuple(k for k, s in all_even_shifts(w) if s == rev)


# -- textual syntax -------------------------------------------------------

_LETTER_RE = re.compile(r"\(([^(),]+),([^(),]+)(?:,([^(),]+))?\)")


def format_word(w: Word) -> str:
    parts = [str(w.letters[0])]
    for r, el in zip(w.rels, w.letters[1:]):
        parts.append(r)
        parts.append(str(el))
    body = "".join(parts)
    return f"cyc[{body}]" if w.cyclic else body


def _parse_letter(bunch: BunchOfChains, token: str) -> ChainElement:
    m = _LETTER_RE.fullmatch(token)
    if not m:
        raise ValueError(f"bad letter {token!r}")
    a, b, c = m.group(1), m.group(2), m.group(3)
    if c is not None:
        point = b
        comp = bunch.component_of(point)
        return marked_element(comp, point, int(a), int(c))
    if a.lstrip("-").isdigit():
        point = b
        comp = bunch.component_of(point)
        return degree_element(comp, point, int(a))
    point = a
    comp = bunch.component_of(point)
    return slot_element(comp, point, int(b))


def parse_word(bunch: BunchOfChains, text: str) -> Word:
    """Inverse of format_word, resolving letters against ``bunch``."""
    text = text.strip()
    cyclic = False
    if text.startswith("cyc[") and text.endswith("]"):
        cyclic = True
        text = text[4:-1]
    tokens = re.findall(r"\([^()]*\)|[~-]", text.replace(" ", ""))
    if not tokens or "".join(tokens) != text.replace(" ", ""):
        raise ValueError(f"cannot parse word {text!r}")
    letters, rels = [], []
    expect_letter = True
    for tok in tokens:
        if expect_letter:
            letters.append(_parse_letter(bunch, tok))
        else:
            if tok not in (SIM, DASH):
                raise ValueError(f"expected a relation, got {tok!r}")
            rels.append(tok)
        expect_letter = not expect_letter
    if expect_letter:
        raise ValueError("word ends with a dangling relation")
    return Word(letters=tuple(letters), rels=tuple(rels), cyclic=cyclic)
