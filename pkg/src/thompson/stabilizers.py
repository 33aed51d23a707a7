"""Stabilizers ``H_U`` of finite sets of rational points.

The set ``U`` is cut at its dyadic points into blocks.  Inside each block the
non-dyadic points are moved into standard position: the ``j``-th point lands
in the even leaf ``v_{2j}`` of the right comb with ``2m+1`` leaves.  There the
stabilizer is generated by copies of ``x0`` in the odd leaves and by one
stable letter ``g_j`` per point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .builder import comb_leaves, copy_into, from_branch_pairs, rescale, transport_point, unrescale
from .diagrams import (
    IDENTITY,
    TreeDiagram,
    apply,
    conj,
    fixes_neighborhood,
    generator,
    inverse,
    multiply,
    periodic_branch,
    slope,
    support,
    word_interval,
)
from .errors import DomainError
from .numbers import ONE, ZERO, NaturalPartition, Point, as_point, natural_partition
from .wordcalc import GroupWord, diagram_to_word, parse_word, word_to_diagram

__all__ = [
    "StabilizerSpec",
    "FactorWord",
    "Block",
    "GeneratorSet",
    "make_spec",
    "member",
    "signature",
    "kernel_test",
    "generators",
    "generation_certificate",
    "verify_certificate",
    "factor",
    "hnn_check",
    "lengthen_prefixes",
    "random_member",
    "rank",
]

X0 = generator(0)
X1 = generator(1)


# -- specs ------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerSpec:
    points: tuple
    partition: NaturalPartition

    @property
    def m1(self) -> int:
        return self.partition.m1

    @property
    def m2(self) -> int:
        return self.partition.m2

    @property
    def type_word(self) -> str:
        return self.partition.type_word

    @property
    def periodic_data(self) -> dict:
        """Canonical ``(p, s)`` of every non-dyadic point."""
        return {p: (p.prefix, p.period) for p in self.partition.u2}

    @property
    def rank(self) -> int:
        return 2 * self.m1 + self.m2 + 2

    def __str__(self):
        return "{" + ", ".join(p.fraction_str() for p in self.points) + "}"


def make_spec(points: Iterable = ()) -> StabilizerSpec:
    if isinstance(points, StabilizerSpec):
        return points
    part = natural_partition(as_point(p) for p in points)
    return StabilizerSpec(part.points, part)


def member(f: TreeDiagram, U) -> bool:
    U = make_spec(U)
    return all(apply(f, p) == p for p in U.points)


def signature(f: TreeDiagram, U) -> tuple:
    """Slope exponents at ``0+``, at each point of ``U`` and at ``1-``."""
    U = make_spec(U)
    if not member(f, U):
        raise DomainError("element does not fix every point of the set")
    sig = [slope(f, ZERO, "right")]
    for p in U.points:
        if p.is_dyadic:
            sig += [slope(f, p, "left"), slope(f, p, "right")]
        else:
            e = slope(f, p, "right")
            q, r = divmod(e, len(p.period))
            if r:
                raise DomainError(f"slope exponent {e} at {p} is not divisible by the period length")
            sig.append(q)
    sig.append(slope(f, ONE, "left"))
    return tuple(sig)


def kernel_test(f: TreeDiagram, U) -> bool:
    return not any(signature(f, U))


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                k = mat[i][c] / mat[r][c]
                mat[i] = [a - k * b for a, b in zip(mat[i], mat[r])]
        r += 1
    return r


# -- symbolic words over named generators ------------------------------------


@dataclass(frozen=True)
class FactorWord:
    """A product of named generators with integer exponents, left to right."""

    letters: tuple = ()

    def __post_init__(self):
        out: list[list] = []
        for name, e in self.letters:
            if e == 0:
                continue
            if out and out[-1][0] == name:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([name, e])
        object.__setattr__(self, "letters", tuple((n, e) for n, e in out))

    @classmethod
    def letter(cls, name: str, e: int = 1) -> "FactorWord":
        return cls(((name, e),))

    def __mul__(self, other: "FactorWord") -> "FactorWord":
        return FactorWord(self.letters + other.letters)

    def __pow__(self, n: int) -> "FactorWord":
        base = self if n >= 0 else self.inverse()
        return FactorWord(base.letters * abs(n))

    def inverse(self) -> "FactorWord":
        return FactorWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __str__(self):
        if not self.letters:
            return "e"
        return " ".join(n if e == 1 else f"{n}^{e}" for n, e in self.letters)

    def evaluate(self, table: dict) -> TreeDiagram:
        d = IDENTITY
        for name, e in self.letters:
            d = multiply(d, table[name] ** e)
        return d

    def rename(self, prefix: str) -> "FactorWord":
        return FactorWord(tuple((prefix + n, e) for n, e in self.letters))


def _wconj(a: FactorWord, g: FactorWord) -> FactorWord:
    return g.inverse() * a * g


def _recover_word(f_l, f_r, g_l, g_r) -> FactorWord:
    """Symbolic form of the product recovering ``(x0)_[u]`` from ``f_l, f_r, g_l, g_r``."""
    a = f_r * f_r * _wconj(f_r, g_r).inverse() * f_r.inverse()
    h_l = _wconj(f_l, g_l) * a.inverse()
    return h_l.inverse() * f_l


def _x1_from_x0(x0w: FactorWord, g: FactorWord) -> FactorWord:
    """``(x1)_[u]`` from ``(x0)_[u]`` and a letter with the pair ``u -> u0``.

    Uses ``x0 + 1 = x0^2 x1^-1 x0^-1``, so ``x1 = x0^-1 (x0 + 1)^-1 x0^2``.
    """
    plus = _wconj(x0w, g)
    return x0w.inverse() * plus.inverse() * x0w * x0w


# -- one block of non-dyadic points ------------------------------------------


def lengthen_prefixes(points: Sequence[Point]) -> list:
    """Prefixes ``p_j s_j^k`` with the smallest uniform ``k`` making them usable.

    The intervals ``[p_j]`` must be pairwise disjoint and pairwise
    non-adjacent, the first must avoid 0 and the last must avoid 1.
    """
    if not points:
        return []
    for k in range(0, 4096):
        words = [p.prefix + p.period * k for p in points]
        ivs = [word_interval(w) for w in words]
        ok = ivs[0][0] > 0 and ivs[-1][1] < 1
        ok = ok and all(a[1] < b[0] for a, b in zip(ivs, ivs[1:]))
        if ok:
            return words
    raise DomainError("could not separate the points")  # pragma: no cover


@dataclass
class Block:
    """Generator data for one interval between consecutive dyadic points."""

    interval: tuple
    points: tuple  # non-dyadic points in global coordinates
    local_points: tuple  # the same points pulled back to [0, 1]
    prefixes: list  # lengthened prefixes p_j s_j^k in local coordinates
    periods: list
    leaves: list
    conjugator: TreeDiagram  # local element with pairs p_j -> v_{2j}
    standard: dict  # name -> element in standard position
    minimal_names: list
    extended_names: list
    certificate: dict  # extended name -> FactorWord over minimal names

    @property
    def m(self) -> int:
        return len(self.points)


def _standard_block(m: int, periods: Sequence[str]):
    """Standard-position generators, names and certificates for ``m`` points."""
    if m == 0:
        standard = {"x": X0, "y": X1, "x0[v1]": X0, "x1[v1]": X1}
        cert = {
            "x0[v1]": FactorWord.letter("x"),
            "x1[v1]": FactorWord.letter("y"),
        }
        return [""], standard, ["x", "y"], ["x0[v1]", "x1[v1]"], cert

    v = comb_leaves(2 * m + 1)
    leaf = lambda k: v[k - 1]  # noqa: E731  (1-based leaf access)
    standard: dict = {}
    for j in range(1, m + 1):
        cons = []
        for k in range(1, 2 * m + 2):
            if k == 2 * j - 1:
                cons.append((leaf(k), leaf(k) + "0"))
            elif k == 2 * j:
                cons.append((leaf(k) + periods[j - 1], leaf(k)))
            elif k == 2 * j + 1:
                cons.append((leaf(k), leaf(k) + "1"))
            else:
                cons.append((leaf(k), leaf(k)))
        standard[f"g{j}"] = from_branch_pairs(cons)
    odd = list(range(1, 2 * m + 2, 2))
    copies0 = {k: copy_into(X0, leaf(k)) for k in odd}
    copies1 = {k: copy_into(X1, leaf(k)) for k in odd}

    if m % 2:
        x_leaves = [4 * i - 3 for i in range(1, (m + 1) // 2 + 1)]
        y_leaves = [4 * i - 1 for i in range(1, (m + 1) // 2 + 1)]
    else:
        x_leaves = [4 * i - 3 for i in range(1, m // 2 + 1)] + [2 * m - 1]
        y_leaves = [4 * i - 1 for i in range(1, m // 2 + 1)] + [2 * m + 1]
    x = IDENTITY
    for k in x_leaves:
        x = multiply(x, copies0[k])
    y = IDENTITY
    for k in y_leaves:
        y = multiply(y, copies0[k])
    standard["x"], standard["y"] = x, y
    for k in odd:
        standard[f"x0[v{k}]"] = copies0[k]
        standard[f"x1[v{k}]"] = copies1[k]

    W = FactorWord.letter
    g = {j: W(f"g{j}") for j in range(1, m + 1)}
    x0w: dict = {}
    if m % 2:
        xw = W("x")
        rest = xw
        for k in range(2, (m + 1) // 2 + 1):
            x0w[4 * k - 3] = _recover_word(xw, xw, g[2 * k - 1], g[2 * k - 2])
            rest = rest * x0w[4 * k - 3].inverse()
        x0w[1] = rest
        yw = W("y")
        rest = yw
        for k in range(1, (m - 1) // 2 + 1):
            x0w[4 * k - 1] = _recover_word(yw, yw, g[2 * k], g[2 * k - 1])
            rest = rest * x0w[4 * k - 1].inverse()
        x0w[2 * m + 1] = rest
    else:
        xw, yw = W("x"), W("y")
        big = _recover_word(xw, yw, g[m], g[m - 1])
        x0w[2 * m - 1] = big
        xp = xw * big.inverse()
        yp = yw * big.inverse()
        rest = xp
        for k in range(2, m // 2 + 1):
            x0w[4 * k - 3] = _recover_word(xp, xp, g[2 * k - 1], g[2 * k - 2])
            rest = rest * x0w[4 * k - 3].inverse()
        x0w[1] = rest
        rest = yp
        for k in range(1, (m - 2) // 2 + 1):
            x0w[4 * k - 1] = _recover_word(yp, yp, g[2 * k], g[2 * k - 1])
            rest = rest * x0w[4 * k - 1].inverse()
        x0w[2 * m + 1] = rest

    cert = {}
    for j, k in enumerate(odd, start=1):
        cert[f"x0[v{k}]"] = x0w[k]
        if j <= m:
            cert[f"x1[v{k}]"] = _x1_from_x0(x0w[k], g[j])
        else:
            # g_m carries v_{2m+1} onto its right half
            cert[f"x1[v{k}]"] = _wconj(x0w[k], g[m])
    for j in range(1, m + 1):
        cert[f"g{j}"] = g[j]
    minimal = ["x", "y"] + [f"g{j}" for j in range(1, m + 1)]
    extended = [n for k in odd for n in (f"x0[v{k}]", f"x1[v{k}]")] + [f"g{j}" for j in range(1, m + 1)]
    return v, standard, minimal, extended, cert


def _make_block(interval: tuple, pts: Sequence[Point]) -> Block:
    local = [transport_point(interval, p, "out") for p in pts]
    m = len(local)
    prefixes = lengthen_prefixes(local)
    periods = [p.period for p in local]
    leaves, standard, minimal, extended, cert = _standard_block(m, periods)
    if m:
        conjugator = from_branch_pairs([(prefixes[j], leaves[2 * j + 1]) for j in range(m)])
    else:
        conjugator = IDENTITY
    return Block(
        interval=interval,
        points=tuple(pts),
        local_points=tuple(local),
        prefixes=prefixes,
        periods=periods,
        leaves=leaves,
        conjugator=conjugator,
        standard=standard,
        minimal_names=minimal,
        extended_names=extended,
        certificate=cert,
    )


def _block_cut(U: StabilizerSpec) -> list:
    """Intervals between consecutive dyadic points, with the points inside each."""
    cuts = [Fraction(0)] + [p.value for p in U.partition.u1] + [Fraction(1)]
    out = []
    for a, b in zip(cuts, cuts[1:]):
        inside = [p for p in U.partition.u2 if a < p.value < b]
        out.append(((a, b), inside))
    return out


@dataclass
class GeneratorSet:
    spec: StabilizerSpec
    blocks: list
    elements: dict  # global name -> element
    minimal: list  # names
    extended: list  # names

    def minimal_elements(self) -> list:
        return [self.elements[n] for n in self.minimal]

    def extended_elements(self) -> list:
        return [self.elements[n] for n in self.extended]

    def block_prefix(self, index: int) -> str:
        return f"B{index + 1}."


def _to_global(block: Block, d: TreeDiagram) -> TreeDiagram:
    c = block.conjugator
    return rescale(multiply(multiply(c, d), inverse(c)), block.interval)


@lru_cache(maxsize=64)
def _generators(U: StabilizerSpec) -> GeneratorSet:
    blocks = [_make_block(iv, pts) for iv, pts in _block_cut(U)]
    elements: dict = {}
    minimal, extended = [], []
    for b, block in enumerate(blocks):
        pre = f"B{b + 1}."
        for name, d in block.standard.items():
            elements[pre + name] = _to_global(block, d)
        minimal += [pre + n for n in block.minimal_names]
        extended += [pre + n for n in block.extended_names]
    return GeneratorSet(U, blocks, elements, minimal, extended)


def generators(U) -> GeneratorSet:
    """Minimal (``2 m1 + m2 + 2`` elements) and extended generating sets of ``H_U``."""
    return _generators(make_spec(U))


def generation_certificate(U) -> dict:
    """For every extended generator, a word over the minimal set equal to it."""
    gs = generators(U)
    out = {}
    for b, block in enumerate(gs.blocks):
        pre = gs.block_prefix(b)
        for name, w in block.certificate.items():
            out[pre + name] = w.rename(pre)
    return out


def verify_certificate(U) -> dict:
    """Name -> whether the certificate word multiplies out to the generator."""
    gs = generators(U)
    return {
        name: w.evaluate(gs.elements) == gs.elements[name]
        for name, w in generation_certificate(U).items()
    }


# -- factorization -----------------------------------------------------------


def _factor_block(block: Block, h_local: TreeDiagram, pre: str) -> FactorWord:
    m = block.m
    c = block.conjugator
    k = multiply(multiply(inverse(c), h_local), c)
    left, right = FactorWord(), FactorWord()
    for j in range(1, m + 1):
        g = block.standard[f"g{j}"]
        ell, r = periodic_branch(k, block.leaves[2 * j - 1], block.periods[j - 1])
        k = multiply(multiply(g ** (-ell), k), g ** r)
        left = left * FactorWord.letter(f"g{j}", ell)
        right = FactorWord.letter(f"g{j}", -r) * right
    middle = FactorWord()
    for k_leaf in range(1, 2 * m + 2, 2):
        u = block.leaves[k_leaf - 1]
        piece = unrescale(k, word_interval(u)) if u else k
        for i, e in diagram_to_word(piece).letters:
            middle = middle * FactorWord.letter(f"x{i}[v{k_leaf}]", e)
    return (left * middle * right).rename(pre)


def factor(f: TreeDiagram, U) -> FactorWord:
    """Word over the extended generators equal to ``f``; ``f`` must lie in ``H_U``."""
    U = make_spec(U)
    if not member(f, U):
        raise DomainError("element does not fix every point of the set")
    gs = generators(U)
    out = FactorWord()
    for b, block in enumerate(gs.blocks):
        local = unrescale(f, block.interval)
        out = out * _factor_block(block, local, gs.block_prefix(b))
    return out


def random_member(U, rng: random.Random, length: int, role: str = "extended") -> tuple:
    """A random product of generators; returns ``(element, FactorWord)``."""
    gs = generators(U)
    names = gs.extended if role == "extended" else gs.minimal
    letters = tuple((rng.choice(names), rng.choice((1, -1))) for _ in range(length))
    w = FactorWord(letters)
    return w.evaluate(gs.elements), w


# -- ascending HNN structure -------------------------------------------------

HNN_STATED = {
    "same": None,
    ("j", "x0"): "x1 x0^-1",
    ("j", "x1"): "x1",
    ("j+1", "x0"): "x0 x1^-1",
    ("j+1", "x1"): "x1^2 x2^-1 x1^-1",
}


@dataclass
class HNNRow:
    letter: int
    factor: int
    generator: str
    computed: GroupWord
    stated: GroupWord
    status: str  # "equal", "inverse" or "other"


@dataclass
class HNNReport:
    m: int
    ascending_g: dict  # (j, i, gen) -> support containment under g_j
    ascending_t: dict  # the same for the halving stable letters t_j
    rows: list = field(default_factory=list)

    @property
    def ascending(self) -> bool:
        return all(self.ascending_g.values()) and all(self.ascending_t.values())

    def summary(self) -> dict:
        out: dict = {}
        for r in self.rows:
            out[r.status] = out.get(r.status, 0) + 1
        return out


def _halving_letter(m: int, j: int, v: list, period: str) -> TreeDiagram:
    """Stable letter fixing the left half of ``v_{2j-1}``, halving its right half,
    carrying ``v_{2j} s`` onto ``v_{2j}`` and halving the left half of ``v_{2j+1}``."""
    leaf = lambda k: v[k - 1]  # noqa: E731
    cons = []
    for k in range(1, 2 * m + 2):
        w = leaf(k)
        if k == 2 * j - 1:
            cons += [(w + "0", w + "0"), (w + "1", w + "10")]
        elif k == 2 * j:
            cons.append((w + period, w))
        elif k == 2 * j + 1:
            cons += [(w + "0", w + "01"), (w + "1", w + "1")]
        else:
            cons.append((w, w))
    return from_branch_pairs(cons)


def _inside(d: TreeDiagram, u: str) -> bool:
    a, b = word_interval(u)
    return all(a <= lo and hi <= b for lo, hi in support(d))


def hnn_check(U) -> HNNReport:
    """Conjugate the factor generators of ``K`` by each stable letter and compare
    the images with the stated endomorphism table."""
    U = make_spec(U)
    if U.m1:
        raise DomainError("the HNN check needs non-dyadic points only")
    block = generators(U).blocks[0]
    m, v = block.m, block.leaves
    gens = {"x0": X0, "x1": X1}
    report = HNNReport(m, {}, {})
    for j in range(1, m + 1):
        g = block.standard[f"g{j}"]
        t = _halving_letter(m, j, v, block.periods[j - 1])
        for i in range(1, m + 2):
            u = v[2 * i - 2]
            for gname, gen in gens.items():
                iota = copy_into(gen, u)
                report.ascending_g[(j, i, gname)] = _inside(conj(iota, g), u)
                img = conj(iota, t)
                ok = _inside(img, u)
                report.ascending_t[(j, i, gname)] = ok
                if not ok:
                    continue
                computed = diagram_to_word(unrescale(img, word_interval(u)) if u else img)
                if i == j:
                    stated = parse_word(HNN_STATED[("j", gname)])
                elif i == j + 1:
                    stated = parse_word(HNN_STATED[("j+1", gname)])
                else:
                    stated = parse_word(gname)
                cd, sd = word_to_diagram(computed), word_to_diagram(stated)
                if cd == sd:
                    status = "equal"
                elif cd == inverse(sd):
                    status = "inverse"
                else:
                    status = "other"
                report.rows.append(HNNRow(j, i, gname, computed, stated, status))
    return report


def fixes_all_neighborhoods(f: TreeDiagram, U) -> bool:
    U = make_spec(U)
    return all(fixes_neighborhood(f, p) for p in U.points)
