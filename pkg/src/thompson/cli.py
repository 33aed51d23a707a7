"""Command-line front end.

Every verb reads elements in the pair grammar (``00->0;01->10;1->11``), as
aliases (``e``, ``x0``, ``x1``, ``x<k>``) or as words (``"x0 x1^-1"``).
Exit status is 0 on success, 1 on domain errors and 2 on parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction

from . import builder, diagrams, limits, stabilizers, wordcalc
from .diagrams import TreeDiagram, element_to_json, format_element
from .errors import DomainError, ParseError
from .numbers import max_depth
from .numbers import parse_point as _parse_point

JSON_FORMAT = 1


def parse_any_element(text: str) -> TreeDiagram:
    t = text.strip()
    if "->" in t:
        return diagrams.parse_element(t)
    if t == "e":
        return diagrams.IDENTITY
    if re.fullmatch(r"x\d+", t):
        return diagrams.generator(int(t[1:]))
    return wordcalc.word_to_diagram(wordcalc.parse_word(t))


def parse_point(text: str):
    return _parse_point(text, max_depth())


def _frac(text: str) -> Fraction:
    return parse_point(text).value


def _emit(args, text: str, data) -> None:
    if args.json:
        payload = {"format": JSON_FORMAT}
        payload.update(data)
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _iv(ivs) -> list:
    return [[str(a), str(b)] for a, b in ivs]


def _iv_text(ivs) -> str:
    return " ".join(f"[{a},{b}]" for a, b in ivs) if ivs else "empty"


def _element_out(args, d: TreeDiagram) -> None:
    _emit(args, format_element(d), {"element": element_to_json(d)})


# -- verbs --------------------------------------------------------------------


def cmd_mul(args):
    d = diagrams.IDENTITY
    for e in args.elements:
        d = diagrams.multiply(d, parse_any_element(e))
    _element_out(args, d)


def cmd_inv(args):
    _element_out(args, diagrams.inverse(parse_any_element(args.element)))


def cmd_reduce(args):
    _element_out(args, diagrams.reduce(diagrams.parse_pairs(args.pairs)))


def cmd_eq(args):
    same = parse_any_element(args.a) == parse_any_element(args.b)
    _emit(args, "true" if same else "false", {"equal": same})


def cmd_apply(args):
    p = diagrams.apply(parse_any_element(args.element), parse_point(args.point))
    text = str(p) if args.binary else p.fraction_str()
    _emit(args, text, {"point": str(p), "fraction": p.fraction_str()})


def cmd_slope(args):
    e = diagrams.slope(parse_any_element(args.element), parse_point(args.point), args.side)
    _emit(args, str(e), {"exponent": e})


def cmd_fixed(args):
    fs = diagrams.fixed_set(parse_any_element(args.element))
    pts = [str(p) for p in fs.isolated_points]
    text = f"intervals: {_iv_text(fs.fixed_intervals)}\npoints: {' '.join(pts) if pts else 'none'}"
    _emit(args, text, {"fixed_intervals": _iv(fs.fixed_intervals), "isolated_points": pts})


def cmd_support(args):
    s = diagrams.support(parse_any_element(args.element))
    _emit(args, _iv_text(s), {"support": _iv(s), "measure": str(diagrams.measure(s))})


def cmd_dist(args):
    d = diagrams.hamming(parse_any_element(args.a), parse_any_element(args.b))
    _emit(args, str(d), {"distance": str(d)})


def cmd_toword(args):
    d = parse_any_element(args.element)
    w = wordcalc.infinite_normal_form(d) if args.infinite else wordcalc.diagram_to_word(d)
    _emit(args, str(w), {"word": [[i, e] for i, e in w.letters]})


def cmd_fromword(args):
    _element_out(args, wordcalc.word_to_diagram(wordcalc.parse_word(args.word)))


def cmd_build(args):
    if args.partial:
        d = builder.from_branch_pairs(builder.parse_constraint(args.constraint))
    else:
        d = diagrams.parse_element(args.constraint)
    _element_out(args, d)


def cmd_copy(args):
    _element_out(args, builder.copy_into(parse_any_element(args.element), args.word))


def cmd_oplus(args):
    _element_out(args, builder.oplus(parse_any_element(args.a), parse_any_element(args.b)))


def cmd_mirror(args):
    _element_out(args, builder.mirror(parse_any_element(args.element)))


def cmd_rescale(args):
    _element_out(args, builder.rescale(parse_any_element(args.element), _frac(args.a), _frac(args.b)))


def _spec(args):
    return stabilizers.make_spec(parse_point(p) for p in (args.u or []))


def cmd_member(args):
    ok = stabilizers.member(parse_any_element(args.element), _spec(args))
    _emit(args, "true" if ok else "false", {"member": ok})


def cmd_sig(args):
    sig = stabilizers.signature(parse_any_element(args.element), _spec(args))
    _emit(args, " ".join(map(str, sig)), {"signature": list(sig)})


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name)


def cmd_gens(args):
    U = _spec(args)
    gs = stabilizers.generators(U)
    names = gs.extended if args.extended else gs.minimal
    cert = stabilizers.generation_certificate(U) if args.certificate else {}
    manifest = {
        "points": [p.fraction_str() for p in U.points],
        "type_word": U.type_word,
        "role": "extended" if args.extended else "minimal",
        "count": len(names),
        "generators": [
            {"name": n, "element": format_element(gs.elements[n])} for n in names
        ],
        "blocks": [
            {
                "interval": [str(b.interval[0]), str(b.interval[1])],
                "points": [str(p) for p in b.points],
                "leaves": b.leaves,
                "conjugator": format_element(b.conjugator),
            }
            for b in gs.blocks
        ],
    }
    if args.certificate:
        manifest["certificate"] = {n: str(w) for n, w in cert.items()}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for g in manifest["generators"]:
            g["file"] = _safe(g["name"]) + ".txt"
            with open(os.path.join(args.out, g["file"]), "w") as fh:
                fh.write(g["element"] + "\n")
        with open(os.path.join(args.out, "manifest.json"), "w") as fh:
            json.dump({"format": JSON_FORMAT, **manifest}, fh, indent=2, sort_keys=True)
    lines = [f"{len(names)} {manifest['role']} generators for U = {U}"]
    lines += [f"{g['name']}: {g['element']}" for g in manifest["generators"]]
    if args.certificate:
        lines += [f"{n} = {w}" for n, w in manifest["certificate"].items()]
    _emit(args, "\n".join(lines), manifest)


def cmd_factor(args):
    U = _spec(args)
    w = stabilizers.factor(parse_any_element(args.element), U)
    _emit(args, str(w), {"factor": [[n, e] for n, e in w.letters], "length": len(w)})


def cmd_hnncheck(args):
    rep = stabilizers.hnn_check(_spec(args))
    rows = [
        {
            "letter": r.letter,
            "factor": r.factor,
            "generator": r.generator,
            "computed": str(r.computed),
            "stated": str(r.stated),
            "status": r.status,
        }
        for r in rep.rows
    ]
    lines = [f"ascending: {'yes' if rep.ascending else 'no'}"]
    lines += [
        f"t{r['letter']}: iota{r['factor']}({r['generator']}) -> {r['computed']}"
        f"  [stated {r['stated']}: {r['status']}]"
        for r in rows
    ]
    _emit(args, "\n".join(lines), {"ascending": rep.ascending, "rows": rows, "summary": rep.summary()})


def _limit_from(args):
    if getattr(args, "limit", None):
        return limits.parse_limit(args.limit)
    src = [parse_point(p) for p in (args.u or [])]
    dst = [parse_point(p) for p in (args.to or [])]
    if not src or len(src) != len(dst):
        raise ParseError("give matching -u and --to point lists")
    if len(src) == 1 and not src[0].is_dyadic and not dst[0].is_dyadic:
        return limits.make_conjugator(src[0], dst[0])
    return limits.conjugate_stabilizer(src, dst).limit


def cmd_conj(args):
    L = _limit_from(args)
    data = {"limit": limits.format_limit(L)}
    lines = [limits.format_limit(L)]
    if args.g:
        img = limits.conjugate(parse_any_element(args.g), L)
        data["image"] = element_to_json(img)
        lines.append(format_element(img))
    _emit(args, "\n".join(lines), data)


def cmd_approx(args):
    L = _limit_from(args)
    d = limits.approximate(L, args.m)
    data = {"element": element_to_json(d)}
    text = format_element(d)
    if args.bound:
        b = limits.hamming_to_limit_bound(L, parse_any_element(args.bound))
        data["bound"] = str(b)
        text += f"\nbound: {b}"
    _emit(args, text, data)


def cmd_corpus(args):
    rng = random.Random(args.seed)
    words = [str(wordcalc.random_word(rng, rng.randint(0, args.max_len))) for _ in range(args.size)]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(words) + "\n")
    _emit(args, "\n".join(words), {"seed": args.seed, "words": words})


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="thompson", description="Exact computations in Thompson's group F.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    def upoints(sp):
        sp.add_argument("-u", action="append", metavar="POINT", help="stabilized point (repeatable)")

    verb("mul", cmd_mul, "product, left to right").add_argument("elements", nargs="+")
    verb("inv", cmd_inv, "inverse").add_argument("element")
    verb("reduce", cmd_reduce, "reduce a list of branch pairs").add_argument("pairs")
    sp = verb("eq", cmd_eq, "equality test")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = verb("apply", cmd_apply, "image of a point")
    sp.add_argument("element")
    sp.add_argument("point")
    sp.add_argument("--binary", action="store_true", help="print the binary point literal")
    sp = verb("slope", cmd_slope, "one-sided slope exponent")
    sp.add_argument("element")
    sp.add_argument("point")
    sp.add_argument("--side", choices=("left", "right"), default="right")
    verb("fixed", cmd_fixed, "fixed intervals and isolated fixed points").add_argument("element")
    verb("support", cmd_support, "support as closed intervals").add_argument("element")
    sp = verb("dist", cmd_dist, "Hamming distance")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = verb("toword", cmd_toword, "word in x0, x1")
    sp.add_argument("element")
    sp.add_argument("--infinite", action="store_true", help="normal form over all x_i")
    verb("fromword", cmd_fromword, "element of a word").add_argument("word")
    sp = verb("build", cmd_build, "element with prescribed branch pairs")
    sp.add_argument("constraint")
    sp.add_argument("--partial", action="store_true", help="input is a partial list of pairs")
    sp = verb("copy", cmd_copy, "copy of an element inside [w]")
    sp.add_argument("element")
    sp.add_argument("word")
    sp = verb("oplus", cmd_oplus, "sum of two elements")
    sp.add_argument("a")
    sp.add_argument("b")
    verb("mirror", cmd_mirror, "conjugate by t -> 1-t").add_argument("element")
    sp = verb("rescale", cmd_rescale, "copy inside a dyadic-endpoint interval [a,b]")
    sp.add_argument("element")
    sp.add_argument("a")
    sp.add_argument("b")
    for name, fn, h in (
        ("member", cmd_member, "does the element fix every point?"),
        ("sig", cmd_sig, "slope signature"),
        ("factor", cmd_factor, "word over the extended generators"),
    ):
        sp = verb(name, fn, h)
        sp.add_argument("element")
        upoints(sp)
    sp = verb("gens", cmd_gens, "generating sets of the stabilizer")
    upoints(sp)
    sp.add_argument("--extended", action="store_true")
    sp.add_argument("--certificate", action="store_true")
    sp.add_argument("--out", metavar="DIR", help="write element files and manifest.json")
    upoints(verb("hnncheck", cmd_hnncheck, "stable-letter action on the base group"))
    for name, fn, h in (
        ("conj", cmd_conj, "conjugator between stabilizers"),
        ("approx", cmd_approx, "finite approximation of a limit element"),
    ):
        sp = verb(name, fn, h)
        upoints(sp)
        sp.add_argument("--to", action="append", metavar="POINT")
        sp.add_argument("--limit", help="limit element literal")
    sp = sub.choices["conj"]
    sp.add_argument("-g", metavar="ELEMENT", help="element of the source stabilizer to conjugate")
    sp = sub.choices["approx"]
    sp.add_argument("-m", type=int, default=8, help="approximation depth")
    sp.add_argument("--bound", metavar="ELEMENT", help="report a distance bound to this element")
    sp = verb("corpus", cmd_corpus, "seeded random words in x0, x1")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--size", type=int, default=10)
    sp.add_argument("--max-len", type=int, default=30)
    sp.add_argument("--out", metavar="FILE")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RecursionError:  # pragma: no cover
        print("error: input too deep", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
