"""Group words in the generators x_i and their conversion to tree-diagrams."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable

from .diagrams import IDENTITY, TreeDiagram, generator, multiply
from .errors import ParseError

__all__ = [
    "GroupWord",
    "parse_word",
    "word_to_diagram",
    "diagram_to_word",
    "normal_form",
    "infinite_normal_form",
    "leaf_exponents",
    "word_length",
    "random_word",
]


def _merge(letters: Iterable) -> tuple:
    out: list[list[int]] = []
    for i, e in letters:
        i, e = int(i), int(e)
        if i < 0:
            raise ParseError(f"generator index must be non-negative, got {i}")
        if e == 0:
            continue
        if out and out[-1][0] == i:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([i, e])
    return tuple((i, e) for i, e in out)


@dataclass(frozen=True)
class GroupWord:
    """A word ``x_{i1}^{e1} x_{i2}^{e2} ...``; adjacent equal indices are merged."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _merge(self.letters))

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def __str__(self):
        if not self.letters:
            return "e"
        return " ".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.letters)

    def max_index(self) -> int:
        return max((i for i, _ in self.letters), default=0)


_TOKEN = re.compile(r"x(\d+)(?:\^(-?\d+))?\Z")


def parse_word(text: str) -> GroupWord:
    """Parse ``x0 x1^-1 x2^3``; ``e`` or an empty string is the empty word."""
    letters = []
    for tok in text.split():
        if tok == "e":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"cannot parse word token {tok!r}")
        e = int(m.group(2)) if m.group(2) is not None else 1
        if e == 0:
            raise ParseError(f"zero exponent in {tok!r}")
        letters.append((int(m.group(1)), e))
    return GroupWord(tuple(letters))


def word_to_diagram(w) -> TreeDiagram:
    if isinstance(w, str):
        w = parse_word(w)
    d = IDENTITY
    for i, e in w.letters:
        d = multiply(d, generator(i) ** e)
    return d


def leaf_exponents(leaves) -> list:
    """Exponent of each leaf ``p 0^k``: the number of left edges above it off the right spine."""
    out = []
    for w in leaves:
        stripped = w.rstrip("0")
        k = len(w) - len(stripped)
        if k and "0" not in stripped:
            k -= 1
        out.append(k)
    return out


def normal_form(d: TreeDiagram) -> tuple:
    """Pair ``(positive, negative)`` of exponent lists with ``d = P(pos) * P(neg)^-1``.

    ``P(a) = x_0^{a_0} x_1^{a_1} ...``; both lists are indexed by generator.
    """
    return leaf_exponents(d.sources), leaf_exponents(d.targets)


def infinite_normal_form(d: TreeDiagram) -> GroupWord:
    """``p q^-1`` over all ``x_i``, with ``p`` and ``q`` positive with non-decreasing indices."""
    pos, neg = normal_form(d)
    p = GroupWord(tuple((i, e) for i, e in enumerate(pos) if e))
    q = GroupWord(tuple((i, e) for i, e in enumerate(neg) if e))
    return p * q.inverse()


def _expand(index: int, e: int) -> list:
    if index == 0:
        return [(0, e)]
    return [(0, -(index - 1)), (1, e), (0, index - 1)]


def _positive_letters(exps) -> list:
    letters = []
    for i, e in enumerate(exps):
        if e:
            letters.extend(_expand(i, e))
    return letters


def diagram_to_word(d: TreeDiagram) -> GroupWord:
    """Word over ``x0, x1`` from the normal form ``p q^-1``."""
    pos, neg = normal_form(d)
    p = GroupWord(tuple(_positive_letters(pos)))
    q = GroupWord(tuple(_positive_letters(neg)))
    return p * q.inverse()


def word_length(d: TreeDiagram) -> int:
    """Size of ``d`` measured as its number of branch pairs."""
    return len(d.pairs)


def random_word(rng: random.Random, length: int) -> GroupWord:
    """Uniform word of the given length over ``x0^{+-1}, x1^{+-1}`` (may freely cancel)."""
    letters = [(rng.randrange(2), rng.choice((1, -1))) for _ in range(length)]
    return GroupWord(tuple(letters))
