"""Elements of F as reduced tree-diagrams.

An element is stored as its list of branch pairs ``u -> v``: the sources and
the targets are complete prefix codes listed left to right, and the i-th
source interval ``[u]`` is mapped linearly onto the i-th target interval
``[v]``.  Products compose from left to right, ``apply(a * b, x) ==
apply(b, apply(a, x))``, and ``conj(a, b) == b**-1 * a * b``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, StructureError
from .numbers import ONE, ZERO, Point, as_point, canonicalize, is_binary_word

__all__ = [
    "TreeDiagram",
    "FixedSet",
    "IDENTITY",
    "identity",
    "generator",
    "reduce",
    "multiply",
    "inverse",
    "conj",
    "commutator",
    "apply",
    "slope",
    "support",
    "fixed_set",
    "fixes_neighborhood",
    "hamming",
    "measure",
    "find_periodic_branch",
    "periodic_branch",
    "parse_element",
    "format_element",
    "element_to_json",
    "element_from_json",
    "word_interval",
    "dyadic_decomposition",
    "complete_code_check",
]


# -- prefix codes -----------------------------------------------------------


def complete_code_check(words: Sequence[str]) -> bool:
    """True iff ``words`` is a complete prefix code listed left to right."""
    stack: list[str] = []
    for w in words:
        if not is_binary_word(w):
            return False
        stack.append(w)
        while len(stack) >= 2:
            a, b = stack[-2], stack[-1]
            if a and b and len(a) == len(b) and a[:-1] == b[:-1] and a[-1] == "0" and b[-1] == "1":
                stack[-2:] = [a[:-1]]
            else:
                break
    return stack == [""]


def _reduce_pairs(pairs: Iterable[tuple[str, str]]) -> tuple:
    """Remove every common caret; a single stack pass suffices."""
    stack: list[tuple[str, str]] = []
    for pair in pairs:
        stack.append(pair)
        while len(stack) >= 2:
            (u0, v0), (u1, v1) = stack[-2], stack[-1]
            if (
                u0 and u1 and v0 and v1
                and u0[-1] == "0" and u1[-1] == "1" and u0[:-1] == u1[:-1]
                and v0[-1] == "0" and v1[-1] == "1" and v0[:-1] == v1[:-1]
            ):
                stack[-2:] = [(u0[:-1], v0[:-1])]
            else:
                break
    return tuple(stack)


def _join(a: Sequence[str], b: Sequence[str]):
    """Common refinement of two complete codes.

    Yields ``(w, i, j)`` for every leaf ``w`` of the join, where ``a[i]`` and
    ``b[j]`` are the prefixes of ``w`` in each code.
    """
    i = j = 0
    while i < len(a) and j < len(b):
        x, y = a[i], b[j]
        if len(x) <= len(y):
            yield y, i, j
            j += 1
            if len(x) == len(y) or j == len(b) or not b[j].startswith(x):
                i += 1
        else:
            yield x, i, j
            i += 1
            if i == len(a) or not a[i].startswith(y):
                j += 1


def compose_pairs(a: Sequence[tuple[str, str]], b: Sequence[tuple[str, str]]) -> list:
    """Unreduced branch pairs of the product of ``a`` then ``b``."""
    a_targets = [v for _, v in a]
    b_sources = [u for u, _ in b]
    out = []
    for w, i, j in _join(a_targets, b_sources):
        ua, va = a[i]
        ub, vb = b[j]
        out.append((ua + w[len(va):], vb + w[len(ub):]))
    return out


def refine(pairs: Sequence[tuple[str, str]], code: Sequence[str]) -> list:
    """Unreduced representative whose sources and targets both refine ``code``."""
    ident = [(w, w) for w in code]
    return compose_pairs(compose_pairs(ident, pairs), ident)


def word_interval(w: str) -> tuple:
    """Endpoints of the dyadic interval ``[w]``."""
    left = Fraction(int(w, 2) if w else 0, 1 << len(w))
    return left, left + Fraction(1, 1 << len(w))


def dyadic_decomposition(a: Fraction, b: Fraction) -> list:
    """Words of the maximal standard dyadic intervals tiling ``[a, b]``, left to right."""
    a, b = Fraction(a), Fraction(b)
    if a.denominator & (a.denominator - 1) or b.denominator & (b.denominator - 1):
        raise DomainError(f"[{a}, {b}] does not have dyadic endpoints")
    if not 0 <= a <= b <= 1:
        raise DomainError(f"[{a}, {b}] is not a subinterval of [0, 1]")
    words = []
    x = a
    while x < b:
        k = 0
        # largest aligned step: x is a multiple of 2^-k and x + 2^-k <= b
        while (x * (1 << k)).denominator != 1 or x + Fraction(1, 1 << k) > b:
            k += 1
        n = int(x * (1 << k))
        words.append(format(n, f"0{k}b") if k else "")
        x += Fraction(1, 1 << k)
    return words


# -- the element type -------------------------------------------------------


class TreeDiagram:
    """A reduced tree-diagram.

    ``TreeDiagram(pairs)`` validates and reduces its input, so equal elements
    of F always compare equal.
    """

    __slots__ = ("pairs", "_index", "_hash")

    def __init__(self, pairs: Iterable):
        pairs = [(str(u), str(v)) for u, v in pairs]
        if not complete_code_check([u for u, _ in pairs]):
            raise StructureError("sources are not a complete prefix code in left-to-right order")
        if not complete_code_check([v for _, v in pairs]):
            raise StructureError("targets are not a complete prefix code in left-to-right order")
        self.pairs = _reduce_pairs(pairs)
        self._index = None
        self._hash = None

    @classmethod
    def _trusted(cls, pairs) -> "TreeDiagram":
        obj = cls.__new__(cls)
        obj.pairs = _reduce_pairs(pairs)
        obj._index = None
        obj._hash = None
        return obj

    @property
    def sources(self) -> tuple:
        return tuple(u for u, _ in self.pairs)

    @property
    def targets(self) -> tuple:
        return tuple(v for _, v in self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __eq__(self, other):
        if not isinstance(other, TreeDiagram):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.pairs)
        return self._hash

    def __mul__(self, other):
        if not isinstance(other, TreeDiagram):
            return NotImplemented
        return multiply(self, other)

    def __invert__(self):
        return inverse(self)

    def __pow__(self, n: int):
        if n < 0:
            return inverse(self) ** (-n)
        result, base = IDENTITY, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"TreeDiagram({format_element(self)!r})"

    @property
    def is_identity(self) -> bool:
        return self.pairs == (("", ""),)

    def depth(self) -> int:
        return max(max(len(u), len(v)) for u, v in self.pairs)

    def source_index(self, bits: str) -> int:
        """Index of the source word that is a prefix of ``bits``."""
        if self._index is None:
            self._index = {u: i for i, (u, _) in enumerate(self.pairs)}
        for n in range(len(bits) + 1):
            i = self._index.get(bits[:n])
            if i is not None:
                return i
        raise DomainError("expansion too short to locate a branch")


def reduce(pairs) -> TreeDiagram:
    """Reduced diagram of a possibly unreduced list of branch pairs."""
    if isinstance(pairs, TreeDiagram):
        return pairs
    return TreeDiagram(pairs)


IDENTITY = TreeDiagram._trusted([("", "")])


def identity() -> TreeDiagram:
    return IDENTITY


def generator(i: int) -> TreeDiagram:
    """The generator ``x_i``: a copy of ``x0`` on ``[1^i]``."""
    if i < 0:
        raise DomainError("generator index must be non-negative")
    ones = "1" * i
    pairs = [(ones[:k] + "0", ones[:k] + "0") for k in range(i)]
    pairs += [(ones + "00", ones + "0"), (ones + "01", ones + "10"), (ones + "1", ones + "11")]
    return TreeDiagram._trusted(pairs)


def multiply(a: TreeDiagram, b: TreeDiagram) -> TreeDiagram:
    """Product ``a * b``: apply ``a`` first, then ``b``."""
    return TreeDiagram._trusted(compose_pairs(a.pairs, b.pairs))


def inverse(a: TreeDiagram) -> TreeDiagram:
    return TreeDiagram._trusted([(v, u) for u, v in a.pairs])


def conj(a: TreeDiagram, b: TreeDiagram) -> TreeDiagram:
    """``a^b = b^-1 a b``."""
    return multiply(multiply(inverse(b), a), b)


def commutator(a: TreeDiagram, b: TreeDiagram) -> TreeDiagram:
    """``[a, b] = a^-1 b^-1 a b``."""
    return multiply(multiply(inverse(a), inverse(b)), multiply(a, b))


# -- evaluation -------------------------------------------------------------


def apply(f: TreeDiagram, p) -> Point:
    """Exact image of a point: replace the matching source prefix by its target."""
    p = as_point(p)
    u, v = f.pairs[f.source_index(p.bits(f.depth()))]
    return p.strip(u).prepend(v)


def _side_bits(p: Point, side: str, n: int) -> str:
    if side == "right":
        if p == ONE:
            raise DomainError("no right slope at 1")
        return p.bits(n)
    if side == "left":
        if p == ZERO:
            raise DomainError("no left slope at 0")
        if p == ONE or not p.is_dyadic:
            return p.bits(n)
        return (p.prefix[:-1] + "0" + "1" * n)[:n]
    raise DomainError(f"side must be 'left' or 'right', got {side!r}")


def slope(f: TreeDiagram, p, side: str = "right") -> int:
    """Exponent ``a`` of the one-sided slope ``2^a`` of ``f`` at ``p``."""
    p = as_point(p)
    u, v = f.pairs[f.source_index(_side_bits(p, side, f.depth()))]
    return len(u) - len(v)


# -- fixed points and supports ---------------------------------------------


def measure(intervals) -> Fraction:
    return sum((b - a for a, b in intervals), Fraction(0))


@dataclass(frozen=True)
class FixedSet:
    """Maximal fixed closed intervals plus the isolated fixed points."""

    fixed_intervals: tuple
    isolated_points: tuple

    def contains(self, p) -> bool:
        p = as_point(p)
        x = p.value
        if any(a <= x <= b for a, b in self.fixed_intervals):
            return True
        return p in self.isolated_points

    def interior_contains(self, p) -> bool:
        x = as_point(p).value
        return any(a < x < b for a, b in self.fixed_intervals)


def fixed_set(f: TreeDiagram) -> FixedSet:
    raw_intervals = []
    candidates = []
    for u, v in f.pairs:
        if u == v:
            raw_intervals.append(word_interval(u))
        elif v.startswith(u):
            candidates.append(canonicalize(u, v[len(u):]))
        elif u.startswith(v):
            candidates.append(canonicalize(v, u[len(v):]))
    merged: list[list[Fraction]] = []
    for a, b in sorted(raw_intervals):
        if merged and merged[-1][1] >= a:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    intervals = tuple((a, b) for a, b in merged)
    isolated = sorted(
        {p for p in candidates if not any(a <= p.value <= b for a, b in intervals)}
    )
    return FixedSet(intervals, tuple(isolated))


def support(f: TreeDiagram) -> tuple:
    """Closure of the moved set, as maximal closed intervals."""
    out = []
    x = Fraction(0)
    for a, b in fixed_set(f).fixed_intervals:
        if a > x:
            out.append((x, a))
        x = b
    if x < 1:
        out.append((x, Fraction(1)))
    return tuple(out)


def fixes_neighborhood(f: TreeDiagram, p) -> bool:
    return fixed_set(f).interior_contains(p)


def hamming(f: TreeDiagram, g: TreeDiagram) -> Fraction:
    """``mu(Supp(f g^-1)) + mu(Supp(f^-1 g))``."""
    return measure(support(multiply(f, inverse(g)))) + measure(support(multiply(inverse(f), g)))


def periodic_branch(f: TreeDiagram, prefix: str, period: str) -> tuple:
    """Minimal ``(l, r)`` with ``f`` mapping ``[prefix period^l]`` linearly onto ``[prefix period^r]``.

    ``prefix``/``period`` need not be canonical; the point ``.prefix period^inf``
    must be a non-dyadic fixed point of ``f``.
    """
    beta = canonicalize(prefix, period)
    if beta.is_dyadic:
        raise DomainError("periodic_branch needs a non-dyadic point")
    if apply(f, beta) != beta:
        raise DomainError(f"element does not fix {beta}")
    u, v = f.pairs[f.source_index(beta.bits(f.depth()))]
    s = len(period)
    ell = max(0, -(-(len(u) - len(prefix)) // s))
    while True:
        src = prefix + period * ell
        rest = src[len(u):]
        tgt_len = len(v) + len(rest)
        if tgt_len >= len(prefix) and (tgt_len - len(prefix)) % s == 0:
            r = (tgt_len - len(prefix)) // s
            if v + rest == prefix + period * r:
                return ell, r
            raise DomainError("inconsistent periodic branch")  # unreachable for fixed points
        ell += 1


def find_periodic_branch(f: TreeDiagram, beta) -> tuple:
    beta = as_point(beta)
    if beta.is_dyadic:
        raise DomainError(f"{beta} is dyadic")
    return periodic_branch(f, beta.prefix, beta.period)


# -- text and JSON ----------------------------------------------------------

_PAIR = re.compile(r"\s*([01]*)\s*->\s*([01]*)\s*\Z")


def parse_pairs(text: str) -> list:
    """Parse ``u->v;...`` into a list of pairs without any validation of codes."""
    t = text.strip()
    if t == "e":
        return [("", "")]
    pairs = []
    for chunk in t.split(";"):
        if not chunk.strip():
            continue
        m = _PAIR.match(chunk)
        if not m:
            raise ParseError(f"cannot parse branch pair {chunk.strip()!r}")
        pairs.append((m.group(1), m.group(2)))
    if not pairs:
        raise ParseError("empty element")
    return pairs


def parse_element(text: str) -> TreeDiagram:
    return TreeDiagram(parse_pairs(text))


def format_pairs(pairs) -> str:
    return ";".join(f"{u}->{v}" for u, v in pairs)


def format_element(d: TreeDiagram) -> str:
    return "e" if d.is_identity else format_pairs(d.pairs)


def element_to_json(d: TreeDiagram) -> list:
    return [[u, v] for u, v in d.pairs]


def element_from_json(data) -> TreeDiagram:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return TreeDiagram((u, v) for u, v in data)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, StructureError):
            raise
        raise ParseError(f"bad JSON element: {exc}")
