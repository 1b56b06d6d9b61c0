"""End-to-end acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary, or on
stdout when this file is run as a script) and then asserts every check.
"""

import itertools
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from dlaws.classifier import (
    LawCoefficients,
    classify,
    expected_dim,
    family4,
    iso_orbits,
    law_from_rules,
    substitute_generator,
    verify_law,
)
from dlaws.freeoperad import (
    COMMUTATIVE,
    NONE,
    GeneratorSpec,
    act,
    association_types,
    compose_perm,
    enumerate_basis,
    permutations,
)
from dlaws.groebner import Ideal, NotZeroDimensional, buchberger, is_zero_dimensional, zero_set
from dlaws.relations import CASES, build_R, build_RR, layout
from dlaws.smithform import distinct_entries, exact_rank, partial_smith, residual_ideal

sys.path.insert(0, str(Path(__file__).parent))
from conftest import DATA, parse_juxtaposed, read_polys  # noqa: E402

RESULTS = {}


class Checks:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failed = []

    def check(self, label, ok):
        if not ok:
            self.failed.append(label)

    def finish(self):
        status = "PASS" if not self.failed else "FAIL"
        line = f"criterion {self.number:>2} {status}  {self.title}"
        if self.failed:
            line += "  [failed: " + "; ".join(self.failed) + "]"
        RESULTS[self.number] = line
        assert not self.failed, line


NS_R = "+ - . . . . . .\n. . + - . . . .\n. . . . + . a b\n. . . . . + c d\n"
NS_L_PRIME = ["-a*d", "-b^2-b", "a^2-a*c", "b*d+d", "-a*c-a", "a*d", "b*d-d^2", "c^2+c",
              "-a*b-a", "-a^2-a*b", "-c*d-d^2", "-c*d-d", "-c^2-c"]
SYM_GB = ["a1", "a3", "a4", "a5", "a6", "b2", "b3", "b4", "b5", "b6", "c2", "c3", "c4", "c5", "c6",
          "d1", "d2", "d4", "d5", "d6", "a2^2 + a2", "a2 b1", "a2 c1", "b1^2 + b1", "b1 d3",
          "c1^2 + c1", "c1 d3", "d3^2 + d3"]
SYM_POINTS = [{}, {"c1": -1}, {"b1": -1}, {"b1": -1, "c1": -1}, {"d3": -1}, {"a2": -1},
              {"a2": -1, "d3": -1}]


def points_of(case_id, dicts):
    names = layout(case_id).params.names
    return {tuple(d.get(n, 0) for n in names) for d in dicts}


def test_criterion_01_ns_ass_ass():
    c = Checks(1, "ns Ass/Ass: [R], [RR], r = 32, L', basis, four points")
    ring = layout("ass-ass-ns").ring
    c.check("[R]", build_R("ass-ass-ns").dump() == NS_R)
    RR = build_RR("ass-ass-ns")
    c.check("[RR] golden", RR.dump() == (DATA / "ns_ass_ass_RR.txt").read_text())
    ps = partial_smith(RR)
    c.check("r = 32", ps.scalar_rank == 32)
    ideal = residual_ideal(ps.residual)
    c.check("monic residual set", set(ideal) == {ring.parse(s).monic() for s in NS_L_PRIME})
    gb = buchberger(ideal)
    c.check("Groebner basis", gb.as_set() == {ring.parse(s) for s in ("a", "d", "b^2+b", "c^2+c")})
    c.check("zero set", zero_set(gb).as_set() == {(0, 0, 0, 0), (0, 0, -1, 0), (0, -1, 0, 0), (0, -1, -1, 0)})
    c.finish()


def test_criterion_02_sym_ass_ass():
    c = Checks(2, "sym Ass/Ass: 960x960, r = 768, 575 entries, 28-element basis, 7 points, orbits 1/4/2")
    ring = layout("ass-ass").ring
    RR = build_RR("ass-ass")
    c.check("[RR] 960x960", RR.shape == (960, 960))
    ps = partial_smith(RR)
    c.check("r = 768", ps.scalar_rank == 768)
    c.check("residual 192x192", ps.residual_shape == (192, 192))
    entries = distinct_entries(ps.residual)
    c.check(f"575 nonzero entries (found {len(entries)})", len(entries) == 575)
    c.check("entries of degree <= 2", all(e.degree() <= 2 for e in entries))
    gb = buchberger(residual_ideal(ps.residual))
    c.check("Groebner basis", gb.as_set() == {parse_juxtaposed(ring, s) for s in SYM_GB})
    c.check("zero set", zero_set(gb).as_set() == points_of("ass-ass", SYM_POINTS))
    laws = [LawCoefficients("ass-ass", d) for d in SYM_POINTS]
    orbits = iso_orbits(laws)
    c.check("orbits 1, 4, 2", sorted(len(o) for o in orbits) == [1, 2, 4] and
            sorted(map(sorted, orbits)) == [[0], [1, 2, 4, 5], [3, 6]])
    c.finish()


def test_criterion_03_com_ass():
    c = Checks(3, "Com/Ass: [R], 540x405, r = 330, 43 generators, six-variable basis")
    ring = layout("com-ass").ring
    c.check("[R] golden", build_R("com-ass").dump() == (DATA / "com_ass_R.txt").read_text())
    RR = build_RR("com-ass")
    c.check("[RR] 540x405", RR.shape == (540, 405))
    ps = partial_smith(RR)
    c.check("r = 330", ps.scalar_rank == 330)
    c.check("residual 210x75", ps.residual_shape == (210, 75))
    ideal = residual_ideal(ps.residual)
    reference = {p.monic() for p in read_polys(ring, DATA / "com_ass_generators.txt")}
    c.check("43 monic generators", len(ideal) == 43 and set(ideal) == reference)
    gb = buchberger(ideal)
    c.check("basis = variables", gb.as_set() == set(ring.gens()))
    c.check("trivial solution only", zero_set(gb).points == [(0,) * 6])
    c.finish()


def test_criterion_04_com_com():
    c = Checks(4, "Com/Com: 360x120, r = 105, reference 33-item set, basis x1,x2,x3, dim 15")
    ring = layout("com-com").ring
    RR = build_RR("com-com")
    c.check("[RR] 360x120", RR.shape == (360, 120))
    ps = partial_smith(RR)
    c.check("r = 105", ps.scalar_rank == 105)
    ideal = residual_ideal(ps.residual)
    reference = {p.monic() for p in read_polys(ring, DATA / "com_com_residual.txt")}
    c.check(f"monic residual set equals reference ({len(set(ideal) ^ reference)} differ)", set(ideal) == reference)
    gb = buchberger(ideal)
    c.check("basis x1, x2, x3", gb.as_set() == set(ring.gens()))
    c.check("trivial solution only", zero_set(gb).points == [(0, 0, 0)])
    c.check("dimension 15 = 120 - 105", expected_dim("com-com", 4).value == 15 == RR.ncols - ps.scalar_rank)
    c.finish()


def test_criterion_05_lie_ass_com_lie():
    c = Checks(5, "Lie/Ass and Com/Lie: trivial law only")
    for cid in ("lie-ass", "com-lie"):
        r = classify(cid)
        c.check(f"{cid} trivial only", len(r.laws) == 1 and not r.laws[0].nonzero() and all(r.verified))
    c.finish()


def test_criterion_06_lie_com():
    c = Checks(6, "Lie/Com: trivial and Poisson; Poisson rule")
    r = classify("lie-com")
    poisson = law_from_rules("lie-com", {"[a·b,c]": "a·[b,c] + [a,c]·b"})
    c.check("two laws", len(r.laws) == 2 and all(r.verified))
    c.check("trivial and Poisson", set(r.laws) == {LawCoefficients("lie-com", {}), poisson})
    rule = [l for l in r.laws if l.nonzero()][0].rules()[0]
    lhs, rhs = rule.split(" -> ")
    c.check("rendered rule is the derivation rule", lhs == "[a·b,c]" and law_from_rules("lie-com", {lhs: rhs}) == poisson)
    c.finish()


def test_criterion_07_derivation_rejected():
    c = Checks(7, "Lie/Ass derivation rule is rejected")
    v = verify_law(law_from_rules("lie-ass", {"[ab,c]": "a[b,c] + [a,c]b"}))
    c.check("not a law", not v.ok)
    c.check(f"nonzero rank deficit ({v.rank} vs {v.required})", v.rank != v.required)
    c.finish()


def test_criterion_08_ass_mag():
    c = Checks(8, "Ass/Mag: sample laws, substitution t = 2, positive-dimensional ideal")
    truncated = LawCoefficients("ass-mag", {"c1": -1})
    f13 = family4(Fraction(1, 3), Fraction(2, 3))
    for name, law in [("trivial", LawCoefficients("ass-mag", {})), ("truncated", truncated),
                      ("family 4, 1/3", f13), ("family 4, 0", family4(0, 0))]:
        c.check(name, verify_law(law).ok)
    c.check("t = 2 gives truncated", substitute_generator(f13, 2) == truncated)
    r = classify("ass-mag")
    gb = buchberger(residual_ideal(partial_smith(build_RR("ass-mag")).residual))
    try:
        zero_set(gb)
        raised = False
    except NotZeroDimensional:
        raised = True
    c.check("NotZeroDimensional", raised and not is_zero_dimensional(gb) and not r.zero_dimensional)
    c.check("reports a Groebner basis", len(r.groebner_basis) > 0 and r.groebner_basis == gb.rendered())
    c.finish()


def test_criterion_09_counting():
    c = Checks(9, "Counting: association types and basis sizes")
    ass, ass2 = GeneratorSpec("∘", NONE, "juxt"), GeneratorSpec("•", NONE, "dot")
    com, com2 = GeneratorSpec("·", COMMUTATIVE, "dot"), GeneratorSpec("∗", COMMUTATIVE, "juxt")
    c.check("2,6,25,111", [len(association_types((ass, com), n)) for n in range(2, 6)] == [2, 6, 25, 111])
    c.check("2,4,14,44", [len(association_types((com2, com), n)) for n in range(2, 6)] == [2, 4, 14, 44])
    c.check("3,27,405", [len(enumerate_basis((ass, com), n)) for n in (2, 3, 4)] == [3, 27, 405])
    c.check("2,12,120", [len(enumerate_basis((com2, com), n)) for n in (2, 3, 4)] == [2, 12, 120])
    sizes = {cid: (len(layout(cid).t3), len(layout(cid).t4)) for cid in ("ass-ass-ns", "ass-ass", "com-ass", "com-com")}
    c.check("8/40, 48/960, 27/405, 12/120",
            sizes == {"ass-ass-ns": (8, 40), "ass-ass": (48, 960), "com-ass": (27, 405), "com-com": (12, 120)})
    c.check("ns tables", [len(enumerate_basis((ass, ass2), n, symmetric=False)) for n in (3, 4)] == [8, 40])
    c.finish()


def test_criterion_10_properties(request):
    c = Checks(10, "Properties: trivial laws, group action, rank certificate, basis order-independence")
    rng = random.Random(request.config.getoption("--seed"))
    for cid in CASES:
        c.check(f"trivial law {cid}", verify_law(LawCoefficients(cid, {})).ok)
    for cid in CASES:
        if not CASES[cid].symmetric:
            continue
        lay = layout(cid)
        ok = True
        for s, t in itertools.product(permutations(3), repeat=2):
            for i in range(len(lay.t3)):
                a1, j = act(t, i, lay.t3)
                a2, k = act(s, j, lay.t3)
                ok &= (a1 * a2, k) == tuple(act(compose_perm(s, t), i, lay.t3))
        p4 = permutations(4)
        for _ in range(200):
            s, t, i = rng.choice(p4), rng.choice(p4), rng.randrange(len(lay.t4))
            a1, j = act(t, i, lay.t4)
            a2, k = act(s, j, lay.t4)
            ok &= (a1 * a2, k) == tuple(act(compose_perm(s, t), i, lay.t4))
        c.check(f"group action {cid}", ok)
    for cid in CASES:
        RR = build_RR(cid)
        ps = partial_smith(RR)
        n = len(layout(cid).params)
        ok = True
        for _ in range(20):
            p = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n))
            ok &= exact_rank(RR.evaluate(p)) == ps.scalar_rank + exact_rank(ps.residual.evaluate(p))
        c.check(f"rank certificate {cid}", ok)
        ideal = residual_ideal(ps.residual)
        gens = list(ideal)
        rng.shuffle(gens)
        c.check(f"order-independent basis {cid}",
                buchberger(Ideal(ideal.ring, gens)).elements == buchberger(ideal).elements)
    c.finish()


if __name__ == "__main__":
    import pytest as _pytest

    code = _pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    for k in sorted(RESULTS):
        print(RESULTS[k])
    raise SystemExit(code)
