"""Building elements of F from partial data.

Covers elements with prescribed branch pairs, copies ``f_[u]`` of an element
inside a dyadic interval, the sum ``f + g``, the mirror conjugation by
``t -> 1 - t`` and rescaling onto an arbitrary dyadic-endpoint interval.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .diagrams import (
    TreeDiagram,
    conj,
    dyadic_decomposition,
    generator,
    inverse,
    multiply,
    parse_pairs,
    refine,
    word_interval,
)
from .errors import ConstraintError, DomainError
from .numbers import ONE, Point, as_point, is_binary_word

__all__ = [
    "from_branch_pairs",
    "complete_branch_pairs",
    "parse_constraint",
    "copy_into",
    "uncopy",
    "oplus",
    "mirror",
    "rescale",
    "unrescale",
    "transport_point",
    "comb_leaves",
    "recover_copy_x0",
]


def _flip(w: str) -> str:
    return w.translate(str.maketrans("01", "10"))


def parse_constraint(text: str) -> list:
    """Partial branch pairs in the element grammar, without completeness."""
    if text.strip() in ("", "{}"):
        return []
    return parse_pairs(text.strip().strip("{}"))


# -- prescribed branch pairs ------------------------------------------------


def _check_side(words: Sequence[str], side: str) -> None:
    for w in words:
        if not is_binary_word(w):
            raise ConstraintError(f"{side} word {w!r} is not binary", None)
    for a, b in zip(words, words[1:]):
        if word_interval(a)[1] > word_interval(b)[0]:
            raise ConstraintError(
                f"{side} words {a!r}, {b!r} are not prefix-free in left-to-right order", None
            )


def _check_constraint(pairs: Sequence[tuple]) -> None:
    src = [u for u, _ in pairs]
    dst = [v for _, v in pairs]
    _check_side(src, "source")
    _check_side(dst, "target")
    if not pairs:
        return
    # condition 1 (degenerate intervals) cannot fail for word data
    if (set(src[0]) <= {"0"}) != (set(dst[0]) <= {"0"}):
        raise ConstraintError(f"0 lies in exactly one of [{src[0]}], [{dst[0]}]", 2)
    if (set(src[-1]) <= {"1"}) != (set(dst[-1]) <= {"1"}):
        raise ConstraintError(f"1 lies in exactly one of [{src[-1]}], [{dst[-1]}]", 3)
    for i in range(len(pairs) - 1):
        s_adj = word_interval(src[i])[1] == word_interval(src[i + 1])[0]
        t_adj = word_interval(dst[i])[1] == word_interval(dst[i + 1])[0]
        if s_adj != t_adj:
            raise ConstraintError(
                f"[{src[i]}],[{src[i + 1]}] and [{dst[i]}],[{dst[i + 1]}] differ in adjacency", 4
            )


def _balance(a: list, b: list) -> None:
    """Split pieces of the shorter list until both have the same length."""
    while len(a) != len(b):
        short = a if len(a) < len(b) else b
        k = min(range(len(short)), key=lambda i: (len(short[i]), i))
        w = short[k]
        short[k:k + 1] = [w + "0", w + "1"]


def complete_branch_pairs(pairs: Sequence[tuple]) -> list:
    """Complete a feasible constraint to a full, possibly unreduced, list of pairs.

    Every given pair appears verbatim in the output; gaps are tiled by maximal
    dyadic intervals and matched left to right.
    """
    pairs = [(str(u), str(v)) for u, v in pairs]
    _check_constraint(pairs)
    bounds_s = [Fraction(0)]
    bounds_t = [Fraction(0)]
    for u, v in pairs:
        bounds_s += list(word_interval(u))
        bounds_t += list(word_interval(v))
    bounds_s.append(Fraction(1))
    bounds_t.append(Fraction(1))
    out = []
    for g in range(len(pairs) + 1):
        gs = dyadic_decomposition(bounds_s[2 * g], bounds_s[2 * g + 1])
        gt = dyadic_decomposition(bounds_t[2 * g], bounds_t[2 * g + 1])
        _balance(gs, gt)
        out.extend(zip(gs, gt))
        if g < len(pairs):
            out.append(pairs[g])
    return out


def from_branch_pairs(pairs) -> TreeDiagram:
    """Deterministic element of F having every given pair as a branch pair."""
    if isinstance(pairs, str):
        pairs = parse_constraint(pairs)
    return TreeDiagram(complete_branch_pairs(list(pairs)))


# -- copies, sums and mirrors -----------------------------------------------


def _path_siblings(u: str) -> list:
    return [u[:k] + ("1" if u[k] == "0" else "0") for k in range(len(u))]


def copy_into(f: TreeDiagram, u: str) -> TreeDiagram:
    """The copy ``f_[u]``: pairs ``u v -> u w`` and the identity off ``[u]``."""
    if not is_binary_word(u):
        raise DomainError(f"{u!r} is not a binary word")
    pairs = [(w, w) for w in _path_siblings(u)] + [(u + v, u + w) for v, w in f.pairs]
    pairs.sort()
    return TreeDiagram(pairs)


def uncopy(f: TreeDiagram, u: str) -> TreeDiagram:
    """Inverse of :func:`copy_into`; ``f`` must be supported in ``[u]``."""
    code = _path_siblings(u) + [u]
    code.sort()
    inner = []
    for a, b in refine(f.pairs, code):
        if a.startswith(u) and b.startswith(u):
            inner.append((a[len(u):], b[len(u):]))
        elif a != b:
            raise DomainError(f"element is not supported in [{u}]")
    return TreeDiagram(inner)


def oplus(f: TreeDiagram, g: TreeDiagram) -> TreeDiagram:
    """``f + g``: ``f`` acting on the left half, ``g`` on the right half."""
    return multiply(copy_into(f, "0"), copy_into(g, "1"))


def mirror(f: TreeDiagram) -> TreeDiagram:
    """Conjugate of ``f`` by the reflection ``t -> 1 - t``."""
    return TreeDiagram([(_flip(u), _flip(v)) for u, v in reversed(f.pairs)])


# -- rescaling onto dyadic-endpoint intervals -------------------------------


def comb_leaves(t: int) -> list:
    """Leaves ``0, 10, ..., 1^{t-2}0, 1^{t-1}`` of the right comb with ``t`` leaves."""
    if t < 1:
        raise DomainError("a comb needs at least one leaf")
    return ["1" * i + "0" for i in range(t - 1)] + ["1" * (t - 1)]


def _comb_index(x: str, t: int) -> int:
    """Index of the comb leaf that is a prefix of ``x``."""
    head = x[: t - 1]
    i = head.find("0")
    return t - 1 if i < 0 else i


def _interval(a, b) -> tuple:
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise DomainError(f"[{a}, {b}] must have positive length")
    return a, b


def _outer_code(a: Fraction, b: Fraction) -> tuple:
    inner = dyadic_decomposition(a, b)
    left = dyadic_decomposition(Fraction(0), a)
    right = dyadic_decomposition(b, Fraction(1))
    return left, inner, right


def rescale(f: TreeDiagram, a, b=None) -> TreeDiagram:
    """Copy of ``f`` in ``F_[a,b]`` under the canonical piecewise-dyadic identification."""
    if b is None:
        a, b = a
    a, b = _interval(a, b)
    left, inner, right = _outer_code(a, b)
    t = len(inner)
    comb = comb_leaves(t) if t > 1 else [""]
    moved = []
    for x, y in refine(f.pairs, comb):
        i, j = _comb_index(x, t), _comb_index(y, t)
        moved.append((inner[i] + x[len(comb[i]):], inner[j] + y[len(comb[j]):]))
    pairs = [(w, w) for w in left] + moved + [(w, w) for w in right]
    return TreeDiagram(pairs)


def unrescale(h: TreeDiagram, a, b=None) -> TreeDiagram:
    """The element ``f`` whose rescaled copy agrees with ``h`` on ``[a, b]``.

    ``h`` must map ``[a, b]`` onto itself; its action elsewhere is ignored.
    """
    if b is None:
        a, b = a
    a, b = _interval(a, b)
    left, inner, right = _outer_code(a, b)
    t = len(inner)
    comb = comb_leaves(t) if t > 1 else [""]
    out = []
    for x, y in refine(h.pairs, left + inner + right):
        # the source and target of each refined pair lie in single code words
        px = next((w for w in inner if x.startswith(w)), None)
        py = next((w for w in inner if y.startswith(w)), None)
        if (px is None) != (py is None):
            raise DomainError(f"element does not preserve [{a}, {b}]")
        if px is not None:
            i, j = inner.index(px), inner.index(py)
            out.append((comb[i] + x[len(px):], comb[j] + y[len(py):]))
    return TreeDiagram(out)


def transport_point(interval, p, direction: str = "in") -> Point:
    """Image of ``p`` under the canonical map ``[0,1] -> [a,b]`` (``in``) or its inverse (``out``)."""
    a, b = _interval(*interval)
    p = as_point(p)
    inner = dyadic_decomposition(a, b)
    t = len(inner)
    comb = comb_leaves(t) if t > 1 else [""]
    if direction == "in":
        src, dst = comb, inner
        if p == ONE:
            return as_point(b)
    elif direction == "out":
        src, dst = inner, comb
        if not a <= p.value <= b:
            raise DomainError(f"{p} is outside [{a}, {b}]")
        if p.value == b:
            return ONE
    else:
        raise DomainError(f"direction must be 'in' or 'out', got {direction!r}")
    depth = max(len(w) for w in src) + 1
    bits = p.bits(depth)
    i = next(k for k, w in enumerate(src) if bits.startswith(w))
    return p.strip(src[i]).prepend(dst[i])


# -- the x0-recovery chain --------------------------------------------------


X0_PLUS_ONE = multiply(multiply(generator(0) ** 2, inverse(generator(1))), inverse(generator(0)))


def recover_copy_x0(f_l: TreeDiagram, f_r: TreeDiagram, g_l: TreeDiagram, g_r: TreeDiagram) -> TreeDiagram:
    """``(x0)_[u]`` as a product of ``f_l = h_l (x0)_[u]``, ``f_r = h_r (x0)_[u]`` and the conjugators.

    ``g_l`` has the pair ``u -> u0`` and fixes the support of ``h_l``; ``g_r``
    has ``u -> u1`` and fixes the support of ``h_r``.
    """
    a = multiply(multiply(f_r ** 2, inverse(conj(f_r, g_r))), inverse(f_r))
    h_l = multiply(conj(f_l, g_l), inverse(a))
    return multiply(inverse(h_l), f_l)
