import json
from fractions import Fraction

import pytest

from dlaws.classifier import (
    LawCoefficients,
    SingularSubstitution,
    builtin_laws,
    classify,
    compose_mix,
    component_dim,
    expected_dim,
    family4,
    iso_orbits,
    law_from_rules,
    opposite_involutions,
    required_rank,
    substitute_generator,
    verify_law,
)
from dlaws.relations import CASES, build_R, layout
from dlaws.smithform import exact_rank

DIMS = {
    "ass-ass-ns": 8, "ass-ass": 192, "com-ass": 75, "lie-ass": 88,
    "com-com": 15, "com-lie": 26, "lie-com": 24, "ass-mag": 360,
}


@pytest.fixture(scope="module")
def reports():
    return {cid: classify(cid) for cid in CASES}


def test_component_dims():
    assert [component_dim("Com", n) for n in range(1, 6)] == [1, 1, 1, 1, 1]
    assert [component_dim("Ass", n) for n in range(1, 5)] == [1, 2, 6, 24]
    assert [component_dim("Lie", n) for n in range(1, 5)] == [1, 1, 2, 6]
    assert [component_dim("Mag", n) for n in range(1, 5)] == [1, 2, 12, 120]
    assert [component_dim("Ass", n, symmetric=False) for n in range(1, 5)] == [1, 1, 1, 1]


@pytest.mark.parametrize("cid", list(CASES))
def test_expected_dims(cid):
    assert expected_dim(cid, 4).value == DIMS[cid]
    assert required_rank(cid) == len(layout(cid).t4) - DIMS[cid]
    # at arity 3 the trivial law already realizes the composite
    zero = (0,) * len(layout(cid).params)
    assert expected_dim(cid, 3).value == len(layout(cid).t3) - exact_rank(build_R(cid).evaluate(zero))


def test_com_com_dim_bell():
    # Com o Com(4): set partitions of four points, each weighted by one
    assert expected_dim("com-com", 4).value == 15 == 120 - 105


@pytest.mark.parametrize("cid", list(CASES))
def test_builtin_laws(cid):
    for nl in builtin_laws(cid):
        v = verify_law(nl.law)
        assert v.ok is nl.expect, nl.name
        assert v.excess == (0 if nl.expect else v.rank - v.required)
        if not nl.expect:
            assert v.excess > 0


def test_ns_law_d():
    law = LawCoefficients("ass-ass-ns", {"a": 0, "b": -1, "c": -1, "d": 0})
    assert verify_law(law).ok
    assert law.rules() == ["(xy)·z -> x(y·z)", "x·(yz) -> (x·y)z"]


def test_derivation_law_rejected():
    law = law_from_rules("lie-ass", {"[ab,c]": "a[b,c] + [a,c]b"})
    v = verify_law(law)
    assert not v.ok and v.rank - v.required == 6


def test_classification_counts(reports):
    got = {cid: len(r.laws) for cid, r in reports.items()}
    assert got == {"ass-ass-ns": 4, "ass-ass": 7, "com-ass": 1, "lie-ass": 1,
                   "com-com": 1, "com-lie": 1, "lie-com": 2, "ass-mag": 0}
    for r in reports.values():
        assert all(r.verified)
        if r.laws:
            assert not any(r.laws[0].nonzero().values())


def test_sym_orbits(reports):
    r = reports["ass-ass"]
    assert sorted(len(o) for o in r.iso_orbits) == [1, 2, 4]
    by_vals = {tuple(sorted(l.nonzero().items())): i for i, l in enumerate(r.laws)}
    b = by_vals[(("c1", -1),)]
    e = by_vals[(("d3", -1),)]
    assert any(b in o and e in o for o in r.iso_orbits)


def test_involutions_square_to_identity(reports):
    laws = reports["ass-ass"].laws
    invs = opposite_involutions("ass-ass")
    assert [g.name for g in invs] == ["∘op", "•op", "∘op+•op"]
    for g in invs:
        for law in laws:
            assert g(g(law)) == law
    circ = invs[0]
    assert circ(LawCoefficients("ass-ass", {"c1": -1})) == LawCoefficients("ass-ass", {"d3": -1})


def test_orbit_edge_cases(reports):
    law = LawCoefficients("ass-ass", {"c1": -1})
    assert iso_orbits([law]) == [[0]]
    assert iso_orbits(reports["lie-com"].laws) == [[0], [1]]
    assert opposite_involutions("com-com") == []
    assert opposite_involutions("ass-ass-ns") == []


def test_poisson(reports):
    laws = reports["lie-com"].laws
    poisson = law_from_rules("lie-com", {"[a·b,c]": "a·[b,c] + [a,c]·b"})
    assert laws[1] == poisson
    (rule,) = poisson.rules()
    lhs, rhs = rule.split(" -> ")
    assert law_from_rules("lie-com", {lhs: rhs}) == poisson
    assert sorted(rhs.split(" + ")) == sorted(["[a,c]·b", "[b,c]·a"])


def test_ass_mag_positive_dimensional(reports):
    r = reports["ass-mag"]
    assert not r.zero_dimensional and r.zero_set is None
    assert len(r.groebner_basis) == 35
    assert any("positive-dimensional" in n for n in r.notes)


def test_substitution_to_truncated():
    law = family4(Fraction(1, 3), Fraction(2, 3))
    assert substitute_generator(law, 2) == LawCoefficients("ass-mag", {"c1": -1})
    assert substitute_generator(law, 0) == law


def test_substitution_errors():
    law = family4(0, 0)
    for t in (1, -1):
        with pytest.raises(SingularSubstitution):
            substitute_generator(law, t)
    with pytest.raises(ValueError):
        substitute_generator(LawCoefficients("com-ass", {}), Fraction(1, 2), which=1)
    with pytest.raises(ValueError):
        family4(1, 1)


def test_substitution_invariance(rng):
    bases = [nl.law for nl in builtin_laws("ass-mag") if nl.expect]
    def draw():
        while True:
            t = Fraction(rng.randint(-7, 7), rng.randint(2, 5))
            if t not in (1, -1):
                return t

    for _ in range(10):
        t, u = draw(), draw()
        law = rng.choice(bases)
        moved = substitute_generator(law, t)
        assert verify_law(moved).ok
        assert substitute_generator(moved, -t) == law
        if t * u != -1:
            assert substitute_generator(moved, u) == substitute_generator(law, compose_mix(t, u))


def test_substitution_keeps_non_laws(rng):
    bad = [nl.law for nl in builtin_laws("ass-mag") if not nl.expect][0]
    t = Fraction(rng.randint(2, 9), 7)
    assert not verify_law(substitute_generator(bad, t)).ok


def test_report_json(reports):
    doc = reports["ass-ass-ns"].to_json()
    text = json.dumps(doc)
    back = json.loads(text)
    assert back["schema"] == "operad-dlaw-report/1"
    assert back["matrices"]["scalar_rank"] == 32
    assert back["zero_set"] == [["0", "0", "0", "0"], ["0", "0", "-1", "0"], ["0", "-1", "0", "0"], ["0", "-1", "-1", "0"]]
    assert [l["rules"] for l in back["laws"]][3] == ["(xy)·z -> x(y·z)", "x·(yz) -> (x·y)z"]
    assert "4 solution(s)" in reports["ass-ass-ns"].to_text()


def test_law_coefficients_validation():
    with pytest.raises(ValueError):
        LawCoefficients("ass-ass-ns", {"q": 1})
    law = LawCoefficients("com-com", {"x1": "1/3"})
    assert law.values == {"x1": Fraction(1, 3), "x2": 0, "x3": 0}
    assert LawCoefficients.from_point("com-com", law.point) == law
    assert law.to_json() == {"case": "com-com", "values": {"x1": "1/3", "x2": "0", "x3": "0"}}
