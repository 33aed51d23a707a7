"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and shown again in the terminal summary.
"""

import random
import statistics
from fractions import Fraction

import conftest
from oracles import corpus, pl_eval, random_element, sample_rationals
from thompson.builder import copy_into, from_branch_pairs, mirror, oplus, recover_copy_x0
from thompson.diagrams import (
    IDENTITY,
    TreeDiagram,
    apply,
    commutator,
    conj,
    fixed_set,
    fixes_neighborhood,
    generator,
    hamming,
    inverse,
    multiply,
    slope,
    support,
    word_interval,
)
from thompson.errors import ConstraintError
from thompson.limits import approximate, conjugate, eval_limit, make_conjugator, reverse
from thompson.numbers import from_fraction
from thompson.stabilizers import (
    factor,
    generators,
    hnn_check,
    make_spec,
    member,
    random_member,
    rank,
    signature,
    verify_certificate,
)
from thompson.wordcalc import diagram_to_word, word_length, word_to_diagram

FAMILY = [[], ["1/2"], ["1/3"], ["1/7"], ["1/3", "1/2"], ["1/3", "5/7"], ["1/4", "1/3", "1/2"]]
X0, X1 = generator(0), generator(1)


def record(n: int, title: str, ok: bool, detail: str = "", extra=()):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    print(line)
    for e in extra:
        print("    " + e)
    conftest.ACCEPTANCE_LINES.append(line)
    conftest.ACCEPTANCE_LINES.extend(f"    {e}" for e in extra)
    assert ok, line


def test_criterion_01_generator_fidelity():
    x0_pairs = (("00", "0"), ("01", "10"), ("1", "11"))
    x1_pairs = (("0", "0"), ("100", "10"), ("101", "110"), ("11", "111"))
    x2_pairs = (("0", "0"), ("10", "10"), ("1100", "110"), ("1101", "1110"), ("111", "1111"))
    ok = (
        generator(0).pairs == x0_pairs
        and generator(1).pairs == x1_pairs
        and generator(2) == word_to_diagram("x0^-1 x1 x0")
        and generator(2).pairs == x2_pairs
    )
    record(1, "generator fidelity", ok, "x0, x1 displays; x2 = x0^-1 x1 x0")


def test_criterion_02_presentation():
    a = word_to_diagram("x0 x1^-1")
    r1 = commutator(a, conj(X1, X0))
    r2 = commutator(a, conj(X1, X0 ** 2))
    bad = [
        (i, j)
        for i in range(1, 6)
        for j in range(i)
        if conj(generator(i), generator(j)) != generator(i + 1)
    ]
    ok = r1.is_identity and r2.is_identity and not bad
    record(2, "presentation relators", ok, f"both relators trivial; {15 - len(bad)}/15 x_i^x_j relations")


def test_criterion_03_group_axioms_and_evaluation():
    words = corpus(seed=3, size=1000, max_len=30)
    els = [word_to_diagram(w) for w in words]
    rng = random.Random(33)
    failures = 0
    for i, a in enumerate(els):
        b, c = els[(i + 1) % len(els)], els[(i + 2) % len(els)]
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            failures += 1
        if not (multiply(a, inverse(a)).is_identity and multiply(inverse(a), a).is_identity):
            failures += 1
        if multiply(a, IDENTITY) != a or multiply(IDENTITY, a) != a:
            failures += 1
        ab = multiply(a, b)
        for x in sample_rationals(rng, 50):
            p = from_fraction(x)
            img = apply(ab, p)
            if img != apply(b, apply(a, p)) or img.value != pl_eval(ab.pairs, x):
                failures += 1
    record(3, "group axioms and evaluation", failures == 0, f"1000 words, 50 points each, {failures} failures")


def test_criterion_04_word_round_trip():
    words = corpus(seed=4, size=1000, max_len=50)
    bad = sum(
        1 for w in words if word_to_diagram(diagram_to_word(word_to_diagram(w))) != word_to_diagram(w)
    )
    record(4, "word/diagram round trip", bad == 0, f"1000 words of length <= 50, {bad} failures")


def test_criterion_05_fixed_point_engine():
    rng = random.Random(5)
    mismatches = 0
    class2 = 0
    divisible = 0
    for _ in range(500):
        f = random_element(rng, 30)
        fs = fixed_set(f)
        pts = [from_fraction(x) for x in sample_rationals(rng, 200)]
        pts += list(fs.isolated_points)
        pts += [from_fraction(e) for iv in fs.fixed_intervals for e in iv]
        for p in pts:
            if (apply(f, p) == p) != fs.contains(p):
                mismatches += 1
        for beta in fs.isolated_points:
            if not beta.is_dyadic:
                class2 += 1
                if slope(f, beta, "right") % len(beta.period) == 0:
                    divisible += 1
    ok = mismatches == 0 and divisible == class2 and class2 > 0
    record(
        5, "fixed-point engine vs sampling", ok,
        f"{mismatches} mismatches; {divisible}/{class2} periodic fixed points with divisible slope",
    )


def test_criterion_06_copy_mirror_identities():
    rng = random.Random(6)
    bad = 0
    for _ in range(200):
        g, h = random_element(rng, 20), random_element(rng, 20)
        if mirror(oplus(g, h)) != oplus(mirror(h), mirror(g)):
            bad += 1
    ok = copy_into(X0, "1") == X1 and mirror(X0) == inverse(X0) and bad == 0
    record(6, "copy, sum and mirror identities", ok, f"200 random pairs, {bad} failures")


def _random_word(rng, lo, hi, forbid=None):
    while True:
        w = "".join(rng.choice("01") for _ in range(rng.randint(lo, hi)))
        if forbid is None or not forbid(w):
            return w


def _disjoint(a: str, b: str) -> bool:
    return not a.startswith(b) and not b.startswith(a)


def _lemma_x0_instance(rng):
    """Random hypotheses of the x0-recovery lemma; retries infeasible draws."""
    while True:
        u = _random_word(rng, 2, 4, forbid=lambda w: set(w) != {"0", "1"})
        wl = _random_word(rng, 1, 4, forbid=lambda w: not _disjoint(w, u))
        wr = _random_word(rng, 1, 4, forbid=lambda w: not _disjoint(w, u))
        try:
            g_l = from_branch_pairs(sorted([(u, u + "0"), (wl, wl)]))
            g_r = from_branch_pairs(sorted([(u, u + "1"), (wr, wr)]))
        except ConstraintError:
            continue
        h_l = copy_into(random_element(rng, 12), wl)
        h_r = copy_into(random_element(rng, 12), wr)
        return u, h_l, h_r, g_l, g_r


def test_criterion_07_lemma_realizations():
    rng = random.Random(7)
    bad_l = bad_r = bad_x = 0
    for _ in range(100):
        f = random_element(rng, 20)
        u = _random_word(rng, 1, 4, forbid=lambda w: set(w) <= {"1"})
        g = from_branch_pairs([(u, u + "0")])
        if conj(copy_into(f, u), g) != copy_into(oplus(f, IDENTITY), u):
            bad_l += 1
        u = _random_word(rng, 1, 4, forbid=lambda w: set(w) <= {"0"})
        g = from_branch_pairs([(u, u + "1")])
        if conj(copy_into(f, u), g) != copy_into(oplus(IDENTITY, f), u):
            bad_r += 1
    for _ in range(100):
        u, h_l, h_r, g_l, g_r = _lemma_x0_instance(rng)
        cu = copy_into(X0, u)
        a, b = word_interval(u)
        for h, g in ((h_l, g_l), (h_r, g_r)):
            # hypotheses: support of h off [u], g fixes it pointwise
            assert all(hi <= a or lo >= b for lo, hi in support(h))
            assert all(
                any(c <= lo and hi <= d for c, d in fixed_set(g).fixed_intervals) for lo, hi in support(h)
            )
        if recover_copy_x0(multiply(h_l, cu), multiply(h_r, cu), g_l, g_r) != cu:
            bad_x += 1
    ok = bad_l == bad_r == bad_x == 0
    record(7, "left/right/x0 lemma realizations", ok, f"failures left={bad_l} right={bad_r} x0={bad_x}")


def test_criterion_08_stabilizer_generators():
    rng = random.Random(8)
    details = []
    ok = True
    for U in FAMILY:
        S = make_spec(U)
        gs = generators(S)
        mins = gs.minimal_elements()
        size_ok = len(mins) == S.rank
        members_ok = all(member(g, S) for g in gs.elements.values())
        words_ok = all(member(random_member(S, rng, rng.randint(1, 20), "minimal")[0], S) for _ in range(500))
        r = rank([signature(g, S) for g in mins])
        ok = ok and size_ok and members_ok and words_ok and r == S.rank
        details.append(f"{S}:{len(mins)}/{S.rank} rank {r}")
    record(8, "stabilizer generating sets", ok, "; ".join(details))


def test_criterion_09_semidirect_structure():
    rng = random.Random(9)
    bad_add = bad_kernel = 0
    for U in FAMILY:
        S = make_spec(U)
        for _ in range(300):
            f, _ = random_member(S, rng, rng.randint(1, 12))
            g, _ = random_member(S, rng, rng.randint(1, 12))
            sf, sg, sfg = signature(f, S), signature(g, S), signature(multiply(f, g), S)
            if tuple(a + b for a, b in zip(sf, sg)) != sfg:
                bad_add += 1
            k = commutator(f, g)
            if any(signature(k, S)) or not all(fixes_neighborhood(k, p) for p in S.points):
                bad_kernel += 1
    ok = bad_add == 0 and bad_kernel == 0
    record(9, "semidirect structure", ok, f"additivity failures {bad_add}, kernel failures {bad_kernel}")


CERT_FAMILY = FAMILY + [["1/3", "2/5", "5/7"], ["1/3", "2/5", "5/7", "4/5"], ["1/5", "1/4", "2/3", "3/4"]]


def test_criterion_10_generation_certificates():
    total = bad = 0
    for U in CERT_FAMILY:
        for name, ok in verify_certificate(U).items():
            total += 1
            bad += not ok
    record(10, "generation certificates", bad == 0, f"{total - bad}/{total} certificate words exact")


def test_criterion_11_undistortion():
    rng = random.Random(11)
    details = []
    ok = True
    for U in FAMILY:
        S = make_spec(U)
        gs = generators(S)
        xs, ys = [], []
        for _ in range(200):
            h, _ = random_member(S, rng, rng.randint(0, 100))
            fw = factor(h, S)
            if fw.evaluate(gs.elements) != h:
                ok = False
            xs.append(word_length(h))
            ys.append(len(fw))
        C = max(Fraction(y, x) for x, y in zip(xs, ys))
        corr = statistics.correlation(xs, ys)
        ok = ok and all(y <= C * x for x, y in zip(xs, ys)) and corr >= 0.9
        details.append(f"{S}: C={float(C):.2f} r={corr:.3f}")
    record(11, "undistortion evidence", ok, "; ".join(details))


def test_criterion_12_conjugator_suite():
    L = make_conjugator("1/3", "1/7")
    R = reverse(L)
    S = make_spec(["1/3"])
    target = from_fraction(Fraction(1, 7))
    rng = random.Random(12)
    ok = eval_limit(L, from_fraction(Fraction(1, 3))) == target
    sample = []
    bad = 0
    for _ in range(200):
        g, _ = random_member(S, rng, rng.randint(1, 30))
        c = conjugate(g, L)
        sample.append((g, c))
        if not isinstance(c, TreeDiagram) or apply(c, target) != target or conjugate(c, R) != g:
            bad += 1
        for x in sample_rationals(rng, 5):
            p = from_fraction(x)
            if apply(c, p) != eval_limit(L, apply(g, eval_limit(R, p))):
                bad += 1
    hom_bad = 0
    for i in range(100):
        (g1, c1), (g2, c2) = sample[2 * i], sample[2 * i + 1]
        if conjugate(multiply(g1, g2), L) != multiply(c1, c2):
            hom_bad += 1
    ok = ok and bad == 0 and hom_bad == 0
    record(12, "conjugator suite", ok, f"200 members: {bad} failures; homomorphism failures {hom_bad}/100")


def test_criterion_13_hamming_metric():
    rng = random.Random(13)
    bad = 0
    for _ in range(500):
        f, g, h = (random_element(rng, 20) for _ in range(3))
        dfg, dgh, dfh = hamming(f, g), hamming(g, h), hamming(f, h)
        if dfg != hamming(g, f) or (dfg == 0) != (f == g) or dfh > dfg + dgh or hamming(f, f) != 0:
            bad += 1
    exact = hamming(X0, IDENTITY) == 2 and hamming(X1, IDENTITY) == 1
    L = make_conjugator("1/3", "1/7")
    approx = {m: approximate(L, m) for m in range(1, 13)}
    cauchy_bad = [
        (m, n)
        for m in range(1, 13)
        for n in range(m + 1, 13)
        if hamming(approx[m], approx[n]) > Fraction(4, 2 ** m)
    ]
    ok = bad == 0 and exact and not cauchy_bad
    record(13, "Hamming metric", ok, f"{bad} axiom failures; exact values {exact}; Cauchy violations {len(cauchy_bad)}")


def test_criterion_14_hnn_endomorphisms():
    ok = True
    extra = []
    counts = {}
    for U in (["1/3"], ["1/3", "5/7"]):
        rep = hnn_check(U)
        ok = ok and rep.ascending
        for r in rep.rows:
            counts[r.status] = counts.get(r.status, 0) + 1
            if r.factor not in (r.letter, r.letter + 1):
                ok = ok and r.status == "equal"
            extra.append(
                f"m={rep.m} t{r.letter} iota{r.factor}({r.generator}) -> {r.computed}"
                f" | stated {r.stated} | {r.status}"
            )
        ok = ok and len(rep.rows) == rep.m * 2 * (rep.m + 1)
    summary = ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
    record(14, "ascending HNN structure", ok, f"K^t <= K for m=1,2; table rows: {summary}", extra)
