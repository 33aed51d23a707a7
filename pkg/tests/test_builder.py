import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import pl_eval, random_element, sample_rationals
from thompson.builder import (
    comb_leaves,
    complete_branch_pairs,
    copy_into,
    from_branch_pairs,
    mirror,
    oplus,
    parse_constraint,
    recover_copy_x0,
    rescale,
    transport_point,
    uncopy,
    unrescale,
)
from thompson.diagrams import (
    IDENTITY,
    apply,
    conj,
    generator,
    inverse,
    multiply,
    slope,
    support,
    word_interval,
)
from thompson.errors import ConstraintError, DomainError
from thompson.numbers import from_fraction, parse_point, to_fraction

X0, X1 = generator(0), generator(1)
seeds = st.integers(0, 10 ** 6)
words = st.text("01", min_size=1, max_size=5)


def elem(seed, n=15):
    return random_element(random.Random(seed), n)


def maps_linearly(f, u, v):
    a, b = word_interval(u)
    c, d = word_interval(v)
    mid = (a + b) / 2
    return [pl_eval(f.pairs, x) for x in (a, mid, b)] == [c, (c + d) / 2, d]


def test_from_branch_pairs_examples():
    g = from_branch_pairs([("01", "10")])
    assert to_fraction(apply(g, from_fraction(Fraction(1, 4)))) == Fraction(1, 2)
    assert to_fraction(apply(g, from_fraction(Fraction(1, 2)))) == Fraction(3, 4)
    assert from_branch_pairs(parse_constraint("00->0;01->10;1->11")) == X0
    h = from_branch_pairs("0101->01")
    third = parse_point("1/3")
    assert apply(h, third) == third and slope(h, third) == 2


def test_empty_constraint_is_identity():
    assert from_branch_pairs([]) == IDENTITY
    assert parse_constraint("{}") == []


@pytest.mark.parametrize(
    "pairs, condition",
    [
        ([("0", "10")], 2),
        ([("1", "01")], 3),
        ([("00", "00"), ("01", "100")], 4),
        ([("0", "0"), ("01", "10")], None),
        ([("1", "1"), ("0", "0")], None),
    ],
)
def test_constraint_errors(pairs, condition):
    with pytest.raises(ConstraintError) as info:
        from_branch_pairs(pairs)
    assert info.value.condition == condition


@given(st.lists(st.tuples(words, words), max_size=3), seeds)
def test_feasible_constraints_are_realized(pairs, seed):
    try:
        g = from_branch_pairs(pairs)
    except ConstraintError:
        return
    for u, v in pairs:
        assert maps_linearly(g, u, v)
    assert from_branch_pairs(pairs) == g
    full = complete_branch_pairs(pairs)
    assert all(p in full for p in pairs)


def test_copy_examples():
    assert copy_into(X0, "1") == X1
    assert copy_into(IDENTITY, "0110") == IDENTITY
    assert copy_into(X0, "0").pairs == (("000", "00"), ("001", "010"), ("01", "011"), ("1", "1"))


def test_oplus_examples():
    assert oplus(IDENTITY, X0) == X1
    assert oplus(X1, IDENTITY) == copy_into(X1, "0")


def test_mirror_examples():
    assert mirror(X0) == inverse(X0)
    assert mirror(IDENTITY) == IDENTITY


def test_rescale_examples():
    assert rescale(X0, 0, 1) == X0
    assert rescale(X0, Fraction(1, 2), 1) == X1
    f = rescale(X0, Fraction(1, 4), 1)
    assert support(f) == ((Fraction(1, 4), Fraction(1)),)
    with pytest.raises(DomainError):
        rescale(X0, Fraction(1, 3), 1)


def test_transport_examples():
    assert transport_point((Fraction(1, 2), 1), parse_point("1/3")) == parse_point("2/3")
    p = parse_point("5/7")
    assert transport_point((0, 1), p) == p
    with pytest.raises(DomainError):
        transport_point((Fraction(1, 2), 1), parse_point("1/3"), "out")


def test_comb():
    assert comb_leaves(1) == [""]
    assert comb_leaves(3) == ["0", "10", "11"]


@given(seeds, seeds, words)
def test_copy_is_a_homomorphism(a, b, u):
    f, g = elem(a), elem(b)
    assert copy_into(multiply(f, g), u) == multiply(copy_into(f, u), copy_into(g, u))
    assert uncopy(copy_into(f, u), u) == f


@given(seeds, seeds)
def test_mirror_is_an_involutive_homomorphism(a, b):
    f, g = elem(a), elem(b)
    assert mirror(mirror(f)) == f
    assert mirror(multiply(f, g)) == multiply(mirror(f), mirror(g))


@given(seeds, words)
def test_mirror_flips_points(seed, u):
    rng = random.Random(seed)
    f = elem(seed)
    for x in sample_rationals(rng, 5):
        assert pl_eval(mirror(f).pairs, 1 - x) == 1 - pl_eval(f.pairs, x)


@given(seeds, words)
def test_lemma_left_and_right(a, u):
    f = elem(a)
    if set(u) != {"1"}:
        left = from_branch_pairs([(u, u + "0")])
        assert conj(copy_into(f, u), left) == copy_into(oplus(f, IDENTITY), u)
    if set(u) != {"0"}:
        right = from_branch_pairs([(u, u + "1")])
        assert conj(copy_into(f, u), right) == copy_into(oplus(IDENTITY, f), u)


INTERVALS = [
    (Fraction(1, 4), Fraction(1)),
    (Fraction(1, 8), Fraction(7, 8)),
    (Fraction(3, 16), Fraction(1, 2)),
    (Fraction(0), Fraction(5, 8)),
]


@pytest.mark.parametrize("iv", INTERVALS)
def test_rescale_homomorphism(iv):
    rng = random.Random(7)
    for _ in range(20):
        f, g = random_element(rng, 12), random_element(rng, 12)
        h = rescale(f, *iv)
        assert rescale(multiply(f, g), *iv) == multiply(h, rescale(g, *iv))
        assert unrescale(h, *iv) == f
        (a, b), = support(h) or ((iv[0], iv[1]),)
        assert iv[0] <= a and b <= iv[1]


@pytest.mark.parametrize("iv", INTERVALS + [(Fraction(0), Fraction(1))])
def test_transport_round_trip(iv):
    rng = random.Random(11)
    a, b = iv
    for x in sample_rationals(rng, 100):
        p = from_fraction(x)
        q = transport_point(iv, p, "in")
        assert a <= to_fraction(q) <= b
        assert q.point_class == p.point_class
        assert transport_point(iv, q, "out") == p
        y = a + (b - a) * x
        r = transport_point(iv, from_fraction(y), "out")
        assert transport_point(iv, r, "in") == from_fraction(y)


@pytest.mark.parametrize("iv", INTERVALS)
def test_transport_matches_rescale(iv):
    rng = random.Random(3)
    f = random_element(rng, 15)
    h = rescale(f, *iv)
    for x in sample_rationals(rng, 20):
        p = from_fraction(x)
        assert apply(h, transport_point(iv, p)) == transport_point(iv, apply(f, p))


@pytest.mark.parametrize("u, wl, wr", [("01", "11", "11"), ("10", "00", "00"), ("010", "11", "0111")])
def test_recover_copy_x0(u, wl, wr):
    g_l = from_branch_pairs(sorted([(u, u + "0"), (wl, wl)]))
    g_r = from_branch_pairs(sorted([(u, u + "1"), (wr, wr)]))
    x = copy_into(X0, u)
    rng = random.Random(u)
    for _ in range(10):
        h_l = copy_into(random_element(rng, 10), wl)
        h_r = copy_into(random_element(rng, 10), wr)
        assert recover_copy_x0(multiply(h_l, x), multiply(h_r, x), g_l, g_r) == x
