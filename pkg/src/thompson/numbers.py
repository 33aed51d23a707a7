"""Exact points of [0, 1] as binary expansions.

A point is either dyadic, ``.u`` with the terminating (``0^inf``) tail, or a
non-dyadic rational ``.p s^inf`` with a primitive mixed period.  The number
``1`` has no terminating expansion and is the single point stored with the
``1^inf`` tail; it still counts as dyadic.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import DepthError, DomainError, ParseError

__all__ = [
    "Point",
    "NaturalPartition",
    "ZERO",
    "ONE",
    "from_fraction",
    "to_fraction",
    "canonicalize",
    "compare",
    "classify",
    "natural_partition",
    "parse_point",
    "max_depth",
    "is_binary_word",
]

DEFAULT_MAX_DEPTH = 4096

_BITS = re.compile(r"[01]*\Z")


def max_depth() -> int:
    """Unrolling cap, read from ``THOMPSON_MAX_DEPTH`` on every call."""
    raw = os.environ.get("THOMPSON_MAX_DEPTH")
    if not raw:
        return DEFAULT_MAX_DEPTH
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"THOMPSON_MAX_DEPTH must be an integer, got {raw!r}")
    if value <= 0:
        raise DomainError("THOMPSON_MAX_DEPTH must be positive")
    return value


def is_binary_word(w) -> bool:
    return isinstance(w, str) and _BITS.match(w) is not None


def _check_word(w: str, what: str = "word") -> None:
    if not is_binary_word(w):
        raise DomainError(f"{what} must be a string over {{0,1}}, got {w!r}")


def _primitive_root(s: str) -> str:
    n = len(s)
    for d in range(1, n + 1):
        if n % d == 0 and s[:d] * (n // d) == s:
            return s[:d]
    return s


@total_ordering
@dataclass(frozen=True)
class Point:
    """A canonical point of [0, 1].

    ``period == ""`` marks a dyadic point with expansion ``prefix``; the point
    ``1`` is ``Point("", "1")``.  Construct through :func:`canonicalize`,
    :func:`from_fraction` or :func:`parse_point`; the constructor only checks
    that the fields are already canonical.
    """

    prefix: str
    period: str = ""

    def __post_init__(self):
        p, s = self.prefix, self.period
        _check_word(p, "prefix")
        _check_word(s, "period")
        if s == "":
            if p.endswith("0"):
                raise DomainError(f"dyadic expansion .{p} has trailing zeros")
        elif s == "1":
            if p != "":
                raise DomainError(f"use the terminating expansion for .{p}(1)")
        else:
            if "0" not in s or "1" not in s:
                raise DomainError(f"period {s!r} must contain both digits")
            if _primitive_root(s) != s:
                raise DomainError(f"period {s!r} is not primitive")
            if p and p[-1] == s[-1]:
                raise DomainError(f"prefix {p!r} is not the shortest for period {s!r}")

    # -- classification -------------------------------------------------

    @property
    def is_dyadic(self) -> bool:
        return self.period in ("", "1")

    @property
    def point_class(self) -> int:
        return 1 if self.is_dyadic else 2

    @property
    def value(self) -> Fraction:
        p, s = self.prefix, self.period
        if s == "":
            return Fraction(int(p, 2) if p else 0, 1 << len(p))
        if s == "1":
            return Fraction(1)
        head = int(p, 2) if p else 0
        cycle = (1 << len(s)) - 1
        return Fraction(head * cycle + int(s, 2), cycle << len(p))

    # -- expansion access -----------------------------------------------

    def bits(self, n: int) -> str:
        """First ``n`` digits of the canonical infinite expansion."""
        p, s = self.prefix, self.period
        if len(p) >= n:
            return p[:n]
        if s == "":
            return p + "0" * (n - len(p))
        reps = (n - len(p)) // len(s) + 1
        return (p + s * reps)[:n]

    def startswith(self, w: str) -> bool:
        return self.bits(len(w)) == w

    def strip(self, w: str) -> "Point":
        """The point ``.x`` such that ``self == .w x``; ``w`` must be a prefix."""
        if len(w) > max_depth():
            raise DepthError(f"unrolling depth {len(w)} exceeds cap {max_depth()}")
        if not self.startswith(w):
            raise DomainError(f"{w!r} is not a prefix of the expansion of {self}")
        p, s = self.prefix, self.period
        if s == "1":
            return self
        if s == "":
            return canonicalize(p[len(w):], "0")
        reps = max(0, -(-(len(w) - len(p)) // len(s)))
        unrolled = p + s * reps
        return canonicalize(unrolled[len(w):], s)

    def prepend(self, w: str) -> "Point":
        """The point ``.w x`` where ``self == .x``."""
        if self.period == "":
            return canonicalize(w + self.prefix, "0")
        return canonicalize(w + self.prefix, self.period)

    # -- ordering and text ----------------------------------------------

    def __lt__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.value < other.value

    def __str__(self):
        if self.period == "":
            return "." + self.prefix if self.prefix else "0"
        if self.period == "1":
            return "1"
        return f".{self.prefix}({self.period})"

    def __repr__(self):
        return f"Point({str(self)!r})"

    def fraction_str(self) -> str:
        v = self.value
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)


ZERO = Point("")
ONE = Point("", "1")


def canonicalize(prefix: str, period: str) -> Point:
    """Canonical point with value ``.prefix period^inf``."""
    _check_word(prefix, "prefix")
    _check_word(period, "period")
    if not period:
        raise DomainError("period must be nonempty")
    s = _primitive_root(period)
    p = prefix
    if s == "0":
        return Point(p.rstrip("0"))
    if s == "1":
        # .p 1^inf is the right endpoint of [p]
        stripped = p.rstrip("1")
        if stripped == "":
            return ONE
        return Point(stripped[:-1] + "1")
    while p and p[-1] == s[-1]:
        p = p[:-1]
        s = s[-1] + s[:-1]
    return Point(p, s)


def from_fraction(f, limit: int | None = None) -> Point:
    """Exact point for a rational ``f`` in [0, 1] (base-2 long division).

    With ``limit`` set, expansions whose prefix plus period would be longer
    raise :class:`DepthError` instead of being computed.
    """
    f = Fraction(f)
    if f < 0 or f > 1:
        raise DomainError(f"{f} is outside [0, 1]")
    if f == 1:
        return ONE
    num, den = f.numerator, f.denominator
    if den & (den - 1) == 0:
        k = den.bit_length() - 1
        return Point(format(num, f"0{k}b").rstrip("0") if k else "")
    digits = []
    seen = {}
    r = num
    while r not in seen:
        if limit is not None and len(digits) >= limit:
            raise DepthError(f"expansion of {f} is longer than the cap {limit}")
        seen[r] = len(digits)
        r <<= 1
        digits.append("1" if r >= den else "0")
        if r >= den:
            r -= den
    start = seen[r]
    bits = "".join(digits)
    return canonicalize(bits[:start], bits[start:])


def to_fraction(p: Point) -> Fraction:
    return p.value


def compare(a: Point, b: Point) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    va, vb = a.value, b.value
    return (va > vb) - (va < vb)


def classify(p: Point) -> int:
    return p.point_class


@dataclass(frozen=True)
class NaturalPartition:
    points: tuple
    u1: tuple
    u2: tuple
    type_word: str

    @property
    def m1(self) -> int:
        return len(self.u1)

    @property
    def m2(self) -> int:
        return len(self.u2)


def natural_partition(points: Iterable[Point]) -> NaturalPartition:
    pts = [as_point(p) for p in points]
    for p in pts:
        if p.value <= 0 or p.value >= 1:
            raise DomainError(f"point {p} is not in the open interval (0, 1)")
    ordered = sorted(pts)
    for a, b in zip(ordered, ordered[1:]):
        if a == b:
            raise DomainError(f"duplicate point {a}")
    return NaturalPartition(
        points=tuple(ordered),
        u1=tuple(p for p in ordered if p.is_dyadic),
        u2=tuple(p for p in ordered if not p.is_dyadic),
        type_word="".join(str(p.point_class) for p in ordered),
    )


_LITERAL = re.compile(r"\.([01]*)(?:\(([01]+)\))?\Z")
_FRACTION = re.compile(r"(\d+)(?:/(\d+))?\Z")


def parse_point(text: str, limit: int | None = None) -> Point:
    """Parse ``.101``, ``.01(011)``, ``.(01)``, ``a/b``, ``0`` or ``1``.

    ``limit`` caps the expansion length as in :func:`from_fraction`.
    """
    t = text.strip()
    m = _LITERAL.match(t)
    if m:
        bits, period = m.group(1), m.group(2)
        if limit is not None and len(bits) + len(period or "") > limit:
            raise DepthError(f"point literal is longer than the cap {limit}")
        if period is None:
            return canonicalize(bits, "0")
        return canonicalize(bits, period)
    m = _FRACTION.match(t)
    if m:
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return from_fraction(Fraction(int(m.group(1)), den), limit)
    raise ParseError(f"cannot parse point {text!r}")


def as_point(x) -> Point:
    if isinstance(x, Point):
        return x
    if isinstance(x, str):
        return parse_point(x)
    return from_fraction(x)


def sorted_points(points: Sequence) -> list:
    return sorted(as_point(p) for p in points)
