import random

import pytest
from hypothesis import given, settings, strategies as st

from thompson.builder import from_branch_pairs
from thompson.diagrams import IDENTITY, apply, fixes_neighborhood, generator, inverse, multiply
from thompson.errors import DomainError
from thompson.numbers import parse_point
from thompson.stabilizers import (
    FactorWord,
    factor,
    generation_certificate,
    generators,
    hnn_check,
    kernel_test,
    lengthen_prefixes,
    make_spec,
    member,
    random_member,
    rank,
    signature,
    verify_certificate,
)

X0, X1 = generator(0), generator(1)
G = from_branch_pairs([("0101", "01")])
FAMILY = [[], ["1/2"], ["1/3"], ["7/12"], ["1/3", "1/2"], ["1/3", "5/7"], ["1/4", "1/3", "1/2"]]


def spec(pts):
    return make_spec(parse_point(p) for p in pts)


def test_member_examples():
    half = spec(["1/2"])
    assert member(X1, half)
    assert not member(X0, half)
    assert member(IDENTITY, spec(["1/3", "5/7"]))


def test_signature_examples():
    assert signature(IDENTITY, spec(["1/3", "1/2"])) == (0, 0, 0, 0, 0)
    assert signature(X1, spec(["1/2"])) == (0, 0, 1, -1)
    # the canonical completion has gap pairs 00->000 and 1->11 at the ends
    assert signature(G, spec(["1/3"])) == (-1, 1, -1)
    pinned = from_branch_pairs([("000", "000"), ("0101", "01"), ("11", "11")])
    assert signature(pinned, spec(["1/3"])) == (0, 1, 0)
    with pytest.raises(DomainError):
        signature(X0, spec(["1/2"]))


def test_kernel_examples():
    assert kernel_test(IDENTITY, spec(["1/3"]))
    assert not kernel_test(X1, spec(["1/2"]))


@pytest.mark.parametrize(
    "pts, count",
    [([], 2), (["1/3"], 3), (["1/3", "1/2"], 5), (["1/2"], 4), (["1/3", "5/7"], 4)],
)
def test_generator_counts(pts, count):
    U = spec(pts)
    gs = generators(U)
    assert len(gs.minimal) == count == U.rank
    assert all(member(gs.elements[n], U) for n in gs.extended + gs.minimal)


def test_free_case_is_x0_x1():
    gs = generators(spec([]))
    assert {gs.elements[n] for n in gs.minimal} == {X0, X1}


def test_m1_certificate_is_single_letters():
    U = spec(["7/12"])
    cert = generation_certificate(U)
    gs = generators(U)
    singles = [n for n, w in cert.items() if len(w) == 1]
    assert len(singles) >= 3
    x, y = gs.minimal[:2]
    assert str(cert[gs.extended[0]]) == x and str(cert[gs.extended[2]]) == y
    assert all(verify_certificate(U).values())


def test_m2_certificate_uses_the_chain():
    U = spec(["1/3", "5/7"])
    cert = generation_certificate(U)
    assert all(verify_certificate(U).values())
    assert len(cert["B1.x0[v3]"]) > 1


@pytest.mark.parametrize("pts", FAMILY)
def test_factor_examples(pts):
    U = spec(pts)
    assert len(factor(IDENTITY, U)) == 0
    gs = generators(U)
    for n in gs.extended:
        w = factor(gs.elements[n], U)
        assert w.evaluate(gs.elements) == gs.elements[n]
    first = gs.extended[-1]
    assert str(factor(gs.elements[first], U)) == first


def test_factor_rejects_non_members():
    with pytest.raises(DomainError):
        factor(X0, spec(["1/2"]))


@pytest.mark.parametrize("pts", FAMILY)
def test_signature_is_homomorphism_and_kernel_fixes(pts):
    U = spec(pts)
    rng = random.Random(len(pts))
    for _ in range(30):
        f, _ = random_member(U, rng, 8)
        g, _ = random_member(U, rng, 8)
        fg = multiply(f, g)
        assert signature(fg, U) == tuple(a + b for a, b in zip(signature(f, U), signature(g, U)))
        assert signature(inverse(f), U) == tuple(-a for a in signature(f, U))
        k = multiply(multiply(inverse(f), inverse(g)), fg)
        assert kernel_test(k, U)
        assert all(fixes_neighborhood(k, p) for p in U.points)


@pytest.mark.parametrize("pts", FAMILY)
def test_minimal_signatures_have_full_rank(pts):
    U = spec(pts)
    gs = generators(U)
    rows = [signature(gs.elements[n], U) for n in gs.minimal]
    assert rank(rows) == U.rank


@pytest.mark.parametrize("pts", FAMILY)
@settings(max_examples=15)
@given(seed=st.integers(0, 10 ** 6))
def test_factor_round_trip(pts, seed):
    U = spec(pts)
    gs = generators(U)
    h, w = random_member(U, random.Random(seed), 30)
    assert w.evaluate(gs.elements) == h
    got = factor(h, U)
    assert got.evaluate(gs.elements) == h
    assert all(n in gs.elements for n, _ in got.letters)


def test_rank():
    assert rank([]) == 0
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0, 0], [0, 1, 0], [1, 1, 1]]) == 3


def test_factor_word_algebra():
    a, b = FactorWord.letter("a"), FactorWord.letter("b")
    assert len(a * a.inverse()) == 0
    assert str(a ** 3 * b) == "a^3 b"
    assert str(FactorWord()) == "e"


def test_lengthen_prefixes_disjoint():
    pts = [parse_point(t) for t in ("1/3", "2/3", "5/7")]
    words = lengthen_prefixes(pts)
    for i, a in enumerate(words):
        assert set(a) == {"0", "1"}
        for b in words[i + 1 :]:
            assert not a.startswith(b) and not b.startswith(a)


@pytest.mark.parametrize("pts", [["1/3"], ["1/3", "5/7"], ["1/7", "1/3", "5/7"]])
def test_hnn_check(pts):
    U = spec(pts)
    rep = hnn_check(U)
    assert rep.ascending
    assert all(rep.ascending_g) and all(rep.ascending_t)
    for r in rep.rows:
        if r.factor not in (r.letter, r.letter + 1):
            assert r.status == "equal"
    s = rep.summary()
    assert sum(s.values()) == len(rep.rows)


def test_hnn_single_point_has_four_rows():
    rep = hnn_check(spec(["1/3"]))
    assert len(rep.rows) == 4


def test_generators_fix_points():
    U = spec(["1/4", "1/3", "1/2"])
    gs = generators(U)
    for n in gs.minimal:
        assert all(apply(gs.elements[n], p) == p for p in U.points)
