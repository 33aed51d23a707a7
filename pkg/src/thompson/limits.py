"""Eventually periodic elements with infinitely many branch pairs.

A :class:`LimitDiagram` is a left-to-right list of items, each either an
ordinary branch pair or a :class:`PeriodicTail`.  A tail with prefixes
``P, Q``, periods ``u, v`` and pattern ``(u_i -> v_i)`` stands for the pairs
``P u^j u_i -> Q v^j v_i`` (``j >= 0``, ``i`` not the designated index) and
the infinite pair ``P u^inf -> Q v^inf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .builder import complete_branch_pairs, from_branch_pairs
from .diagrams import (
    TreeDiagram,
    apply,
    complete_code_check,
    hamming,
    inverse,
    multiply,
    periodic_branch,
)
from .errors import ConstraintError, DepthError, DomainError, ParseError, StructureError
from .numbers import Point, as_point, canonicalize, is_binary_word, max_depth
from .stabilizers import make_spec

__all__ = [
    "PeriodicTail",
    "LimitDiagram",
    "ConjugatorBundle",
    "make_conjugator",
    "eval_limit",
    "conjugate",
    "reverse",
    "approximate",
    "hamming_to_limit_bound",
    "conjugate_stabilizer",
    "parse_limit",
    "format_limit",
]


@dataclass(frozen=True)
class PeriodicTail:
    src_prefix: str
    src_period: str
    dst_prefix: str
    dst_period: str
    pattern: tuple  # unreduced complete pairs (u_i, v_i)
    k: int  # index of the designated pair (u, v)

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple((str(a), str(b)) for a, b in self.pattern))
        for w in (self.src_prefix, self.src_period, self.dst_prefix, self.dst_period):
            if not is_binary_word(w):
                raise StructureError(f"{w!r} is not a binary word")
        for s in (self.src_period, self.dst_period):
            if "0" not in s or "1" not in s:
                raise StructureError(f"period {s!r} must contain both digits")
        if not complete_code_check([a for a, _ in self.pattern]):
            raise StructureError("pattern sources are not a complete prefix code")
        if not complete_code_check([b for _, b in self.pattern]):
            raise StructureError("pattern targets are not a complete prefix code")
        if not 0 < self.k < len(self.pattern) - 1:
            raise StructureError("designated pattern pair cannot be first or last")
        if self.pattern[self.k] != (self.src_period, self.dst_period):
            raise StructureError("designated pattern pair must be period -> period")

    @property
    def source_point(self) -> Point:
        return canonicalize(self.src_prefix, self.src_period)

    @property
    def target_point(self) -> Point:
        return canonicalize(self.dst_prefix, self.dst_period)

    @property
    def is_linear(self) -> bool:
        """True when the tail acts as one linear map ``[P] -> [Q]``."""
        return self.src_period == self.dst_period and all(a == b for a, b in self.pattern)

    def pairs_to_depth(self, depth: int) -> list:
        """Explicit pairs for ``j < depth`` plus the closing pair ``P u^depth -> Q v^depth``."""
        u, v = self.src_period, self.dst_period
        before, after = self.pattern[: self.k], self.pattern[self.k + 1:]
        left, right = [], []
        ps, qs = self.src_prefix, self.dst_prefix
        for _ in range(depth):
            left += [(ps + a, qs + b) for a, b in before]
            right = [(ps + a, qs + b) for a, b in after] + right
            ps, qs = ps + u, qs + v
        return left + [(ps, qs)] + right

    def reversed(self) -> "PeriodicTail":
        return PeriodicTail(
            self.dst_prefix, self.dst_period, self.src_prefix, self.src_period,
            tuple((b, a) for a, b in self.pattern), self.k,
        )

    def __str__(self):
        body = ";".join(
            ("*" if i == self.k else "") + f"{a}->{b}" for i, (a, b) in enumerate(self.pattern)
        )
        return (
            f"tail {self.src_prefix}({self.src_period})->"
            f"{self.dst_prefix}({self.dst_period}) {{{body}}}"
        )


class LimitDiagram:
    """Finite branch pairs interleaved with periodic tails, left to right."""

    __slots__ = ("items",)

    def __init__(self, items: Sequence):
        items = tuple(items)
        src, dst = [], []
        for it in items:
            if isinstance(it, PeriodicTail):
                src.append(it.src_prefix)
                dst.append(it.dst_prefix)
            else:
                a, b = it
                src.append(a)
                dst.append(b)
        if not complete_code_check(src):
            raise StructureError("sources do not form a complete prefix code")
        if not complete_code_check(dst):
            raise StructureError("targets do not form a complete prefix code")
        self.items = tuple(it if isinstance(it, PeriodicTail) else (it[0], it[1]) for it in items)

    @property
    def tails(self) -> tuple:
        return tuple(it for it in self.items if isinstance(it, PeriodicTail))

    @property
    def finite_pairs(self) -> tuple:
        return tuple(it for it in self.items if not isinstance(it, PeriodicTail))

    def _src(self, it) -> str:
        return it.src_prefix if isinstance(it, PeriodicTail) else it[0]

    def __eq__(self, other):
        return isinstance(other, LimitDiagram) and self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __str__(self):
        return format_limit(self)

    def __repr__(self):
        return f"LimitDiagram({format_limit(self)!r})"


# -- construction -------------------------------------------------------------


def _tail_pattern(u: str, v: str) -> tuple:
    pattern = complete_branch_pairs([(u, v)])
    return tuple(pattern), pattern.index((u, v))


def _lengthened_constraint(alpha: Point, beta: Point) -> tuple:
    for k in range(0, max_depth()):
        P = alpha.prefix + alpha.period * k
        Q = beta.prefix + beta.period * k
        try:
            full = complete_branch_pairs([(P, Q)])
        except ConstraintError:
            continue
        return P, Q, full
    raise DomainError(f"cannot align {alpha} with {beta}")  # pragma: no cover


def make_conjugator(alpha, beta) -> LimitDiagram:
    """A limit element carrying the non-dyadic point ``alpha`` to ``beta``.

    With equal canonical prefixes ``p`` the result has support in ``[p]``.
    """
    alpha, beta = as_point(alpha), as_point(beta)
    if alpha.is_dyadic or beta.is_dyadic:
        raise DomainError("conjugators are built between non-dyadic points")
    P, Q, full = _lengthened_constraint(alpha, beta)
    pattern, k = _tail_pattern(alpha.period, beta.period)
    tail = PeriodicTail(P, alpha.period, Q, beta.period, pattern, k)
    return LimitDiagram([tail if pair == (P, Q) else pair for pair in full])


# -- evaluation ---------------------------------------------------------------


def _locate(words: Sequence[str], p: Point) -> int:
    bits = p.bits(max(len(w) for w in words))
    for i, w in enumerate(words):
        if bits.startswith(w):
            return i
    raise DomainError(f"no branch contains {p}")  # pragma: no cover


def eval_limit(L: LimitDiagram, p) -> Point:
    """Exact image of a point."""
    p = as_point(p)
    it = L.items[_locate([L._src(i) for i in L.items], p)]
    if not isinstance(it, PeriodicTail):
        a, b = it
        return p.strip(a).prepend(b)
    if p == it.source_point:
        return it.target_point
    u, v = it.src_period, it.dst_period
    y = p.strip(it.src_prefix)
    head = it.dst_prefix
    srcs = [a for a, _ in it.pattern]
    cap = max_depth()
    while True:
        i = _locate(srcs, y)
        if i != it.k:
            a, b = it.pattern[i]
            return y.strip(a).prepend(head + b)
        y = y.strip(u)
        head += v
        if len(head) > cap:
            raise DepthError(f"unrolling depth exceeds cap {cap}")


def reverse(L: LimitDiagram) -> LimitDiagram:
    """The inverse element: sources and targets swapped."""
    return LimitDiagram(
        [it.reversed() if isinstance(it, PeriodicTail) else (it[1], it[0]) for it in L.items]
    )


def _truncate(L: LimitDiagram, depths: Sequence[int]) -> TreeDiagram:
    """Finite element agreeing with ``L`` off ``[P u^d]`` for each tail, linear there."""
    pairs = []
    t = 0
    for it in L.items:
        if isinstance(it, PeriodicTail):
            pairs.extend(it.pairs_to_depth(depths[t]))
            t += 1
        else:
            pairs.append(it)
    return from_branch_pairs(pairs)


def _measure(w: str) -> Fraction:
    return Fraction(1, 1 << len(w))


def _depth_for(it: PeriodicTail, m: int) -> int:
    """Source depth whose neighbourhood lands in the depth-``m`` target one.

    The tail maps ``[P u^m]`` onto ``[Q v^m]`` exactly, so ``m`` itself works.
    """
    return m


def approximate(L: LimitDiagram, m: int) -> TreeDiagram:
    """Element of F agreeing with ``L`` outside the depth-``m`` neighbourhoods of its tails."""
    if m < 0:
        raise DomainError("approximation depth must be non-negative")
    return _truncate(L, [_depth_for(t, m) for t in L.tails])


def conjugate(g: TreeDiagram, L: LimitDiagram) -> TreeDiagram:
    """``L^-1 g L`` as an element of F; ``g`` must fix every tail source point."""
    lows, highs = [], []
    for t in L.tails:
        if apply(g, t.source_point) != t.source_point:
            raise DomainError(f"element moves the tail point {t.source_point}")
        ell, r = periodic_branch(g, t.src_prefix, t.src_period)
        lows.append(ell)
        highs.append(r)
    a = _truncate(L, lows)
    b = _truncate(L, highs)
    return multiply(multiply(inverse(a), g), b)


def hamming_to_limit_bound(L: LimitDiagram, g: TreeDiagram, max_m: int = 16) -> Fraction:
    """Upper bound for the Hamming distance from ``L`` to ``g``.

    For each depth ``M`` the distance splits as the exact distance from the
    depth-``M`` approximation to ``g`` plus the measure of the neighbourhoods
    where ``L`` and the approximation may differ; the minimum over ``M`` is
    returned.
    """
    best = None
    for M in range(0, max_m + 1):
        approx = approximate(L, M)
        extra = Fraction(0)
        for t in L.tails:
            if t.is_linear:
                continue
            d = _depth_for(t, M)
            extra += _measure(t.src_prefix + t.src_period * d)
            extra += _measure(t.dst_prefix + t.dst_period * d)
        val = hamming(approx, g) + extra
        if best is None or val < best:
            best = val
        if best == 0:
            break
    return best


# -- stabilizer to stabilizer ---------------------------------------------------


def _neighbour_words(p: Point, k: int) -> tuple:
    """Words of the dyadic intervals of length ``2^-(|p|+k)`` just left and right of ``p``."""
    w = p.prefix
    return w[:-1] + "0" + "1" * k, w + "0" * k


@dataclass
class ConjugatorBundle:
    """A finite part ``pre`` and one shared-prefix tail per non-dyadic point.

    ``limit`` is the full element; ``pre`` is its depth-0 truncation, so that
    ``limit = pre * (product of the tails)``, the tails having disjoint supports.
    """

    source: object
    target: object
    pre: TreeDiagram
    tails: list
    limit: LimitDiagram

    def map(self, g: TreeDiagram) -> TreeDiagram:
        return conjugate(g, self.limit)

    def unmap(self, g: TreeDiagram) -> TreeDiagram:
        return conjugate(g, reverse(self.limit))


def _shared_tail(Q: str, u: str, v: str) -> LimitDiagram:
    pattern, k = _tail_pattern(u, v)
    full = complete_branch_pairs([(Q, Q)])
    tail = PeriodicTail(Q, u, Q, v, pattern, k)
    return LimitDiagram([tail if pair == (Q, Q) else pair for pair in full])


def conjugate_stabilizer(U, V, max_k: int = 64) -> ConjugatorBundle:
    """Limit element conjugating ``H_U`` onto ``H_V`` for sets of the same type."""
    U, V = make_spec(U), make_spec(V)
    if U.type_word != V.type_word:
        raise DomainError(f"types {U.type_word!r} and {V.type_word!r} differ")
    for k in range(max_k + 1):
        cons = []
        for a, b in zip(U.points, V.points):
            if a.is_dyadic:
                la, ra = _neighbour_words(a, k)
                lb, rb = _neighbour_words(b, k)
                cons += [(la, lb), (ra, rb)]
            else:
                cons.append((a.prefix + a.period * k, b.prefix + b.period * k))
        try:
            full = complete_branch_pairs(cons)
        except ConstraintError:
            continue
        items = []
        tails = []
        periodic = {
            (a.prefix + a.period * k, b.prefix + b.period * k): (a, b)
            for a, b in zip(U.points, V.points)
            if not a.is_dyadic
        }
        for pair in full:
            if pair in periodic:
                a, b = periodic[pair]
                pattern, kk = _tail_pattern(a.period, b.period)
                items.append(PeriodicTail(pair[0], a.period, pair[1], b.period, pattern, kk))
                tails.append(_shared_tail(pair[1], a.period, b.period))
            else:
                items.append(pair)
        limit = LimitDiagram(items)
        pre = approximate(limit, 0)
        return ConjugatorBundle(U, V, pre, tails, limit)
    raise DomainError(f"could not align {U} with {V} within prefix depth {max_k}")


# -- text -----------------------------------------------------------------------

_TAIL = re.compile(
    r"tail\s*([01]*)\(([01]+)\)\s*->\s*([01]*)\(([01]+)\)\s*\{([^}]*)\}\s*\Z"
)
_PAIR = re.compile(r"([01]*)\s*->\s*([01]*)\Z")


def _split_items(text: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == ";" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_limit(text: str) -> LimitDiagram:
    items = []
    for chunk in _split_items(text):
        m = _TAIL.match(chunk)
        if m:
            pattern, k = [], None
            for i, pc in enumerate(s.strip() for s in m.group(5).split(";") if s.strip()):
                if pc.startswith("*"):
                    if k is not None:
                        raise ParseError("more than one designated pattern pair")
                    k = i
                    pc = pc[1:].strip()
                pm = _PAIR.match(pc)
                if not pm:
                    raise ParseError(f"cannot parse pattern pair {pc!r}")
                pattern.append((pm.group(1), pm.group(2)))
            if k is None:
                raise ParseError("tail pattern has no designated pair")
            items.append(PeriodicTail(m.group(1), m.group(2), m.group(3), m.group(4), tuple(pattern), k))
            continue
        pm = _PAIR.match(chunk)
        if not pm:
            raise ParseError(f"cannot parse item {chunk!r}")
        items.append((pm.group(1), pm.group(2)))
    if not items:
        raise ParseError("empty limit diagram")
    return LimitDiagram(items)


def format_limit(L: LimitDiagram) -> str:
    return ";".join(str(it) if isinstance(it, PeriodicTail) else f"{it[0]}->{it[1]}" for it in L.items)
