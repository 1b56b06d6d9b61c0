from fractions import Fraction

import pytest

from dlaws.freeoperad import act_vector, permutations
from dlaws.relations import (
    CASES,
    axiom_rows,
    build_R,
    build_RR,
    get_case,
    law_rows,
    layout,
    render_rule,
)
from dlaws.smithform import exact_rank

NS_R = """\
+ - . . . . . .
. . + - . . . .
. . . . + . a b
. . . . . + c d
"""

COM_COM_R = """\
+ . - . . . . . . . . .
. - + . . . . . . . . .
- + . . . . . . . . . .
. . . . . . . . . + . -
. . . . . . . . . . - +
. . . . . . . . . - + .
. . . x1 x2 x3 + . . . . .
. . . x2 x3 x1 . . + . . .
. . . x3 x1 x2 . + . . . .
"""

RR_SHAPES = {
    "ass-ass-ns": (40, 40),
    "ass-ass": (960, 960),
    "com-ass": (540, 405),
    "lie-ass": (540, 405),
    "com-com": (360, 120),
    "com-lie": (340, 120),
    "lie-com": (340, 120),
    "ass-mag": (720, 960),
}


def random_point(case_id, rng):
    n = len(layout(case_id).params)
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))


def test_ns_R():
    assert build_R("ass-ass-ns").dump() == NS_R


def test_com_ass_R(data_dir):
    m = build_R("com-ass")
    assert m.shape == (15, 27)
    assert m.dump() == (data_dir / "com_ass_R.txt").read_text()


def test_com_com_R():
    assert build_R("com-com").dump() == COM_COM_R


def test_ns_RR(data_dir):
    m = build_RR("ass-ass-ns")
    assert m.shape == (40, 40)
    assert m.dump() == (data_dir / "ns_ass_ass_RR.txt").read_text()


@pytest.mark.parametrize("cid", list(CASES))
def test_RR_shapes(cid):
    assert build_RR(cid).shape == RR_SHAPES[cid]


def test_RR_without_dedupe():
    assert build_RR("com-com", dedupe=False).shape == (720, 120)
    assert build_RR("ass-ass", dedupe=False).shape == (960, 960)


def test_sym_RR_entries():
    m = build_RR("ass-ass")
    names = set(layout("ass-ass").params.names)
    seen = set()
    for c in m.entries():
        if c.is_constant():
            assert c.constant_value() in (1, -1)
        else:
            assert len(c) == 1 and c.degree() == 1
            seen.add(str(c).lstrip("-"))
    assert seen == names


def test_axiom_rows():
    t = layout("ass-ass-ns").t3
    assert axiom_rows("Ass", t, 0) == [{0: 1, 1: -1}]
    assert axiom_rows("Mag", layout("ass-mag").t3, 0) == []
    t = layout("com-com").t3
    rows = axiom_rows("Com", t, 1)
    assert len(rows) == 3
    names = t.names()
    assert rows[0] == {names.index("(a·b)·c"): 1, names.index("(b·c)·a"): -1}
    assert len(axiom_rows("Lie", layout("lie-ass").t3, 1)) == 1


def test_law_rows_at_zero_are_source_monomials():
    for cid in CASES:
        lay = layout(cid)
        zero = (0,) * len(lay.params)
        for r in law_rows(cid):
            ev = {j: c.evaluate(zero) for j, c in r.items()}
            ev = {j: v for j, v in ev.items() if v}
            assert len(ev) == 1
            (j, v), = ev.items()
            assert j in lay.source and v in (1, -1)


def test_sym_law_blocks():
    rows = law_rows("ass-ass")
    assert len(rows) == 12
    names = layout("ass-ass").params.names
    for k, r in enumerate(rows):
        letters = ("a", "b") if k < 6 else ("c", "d")
        vars_ = sorted(str(c) for c in r.values() if not c.is_constant())
        assert vars_ == sorted(n for n in names if n[0] in letters)


@pytest.mark.parametrize("cid", ["ass-ass", "com-ass", "lie-ass", "ass-mag"])
def test_R_stable_under_S3(cid, rng):
    lay = layout(cid)
    point = random_point(cid, rng)
    rows = build_R(cid).evaluate(point).rows
    r0 = exact_rank(rows)
    images = [act_vector(p, r, lay.t3) for p in permutations(3) for r in rows]
    assert exact_rank(rows + images) == r0


@pytest.mark.parametrize("cid", ["com-com", "com-lie", "lie-com"])
def test_R_keeps_cyclic_images_only(cid, rng):
    # the law source has a stabilizer of order two; only cyclic images are listed
    lay = layout(cid)
    point = random_point(cid, rng)
    m = build_R(cid)
    assert sum(1 for lab in m.labels if lab == "law") == 3
    rows = m.evaluate(point).rows
    images = [act_vector(p, r, lay.t3) for p in permutations(3) for r in rows]
    assert exact_rank(rows + images) > exact_rank(rows)


@pytest.mark.parametrize("cid", [c for c in CASES if CASES[c].symmetric])
def test_RR_stable_under_S4(cid, rng):
    lay = layout(cid)
    point = tuple(rng.randint(-3, 3) for _ in range(len(lay.params)))
    rows = build_RR(cid).evaluate(point).rows
    r0 = exact_rank(rows)
    perms = permutations(4)
    sample = rng.sample(rows, min(len(rows), 60))
    images = [act_vector(rng.choice(perms), r, lay.t4) for r in sample]
    assert exact_rank(rows + images) == r0


def test_sym_R_generated_by_four_rows(rng):
    lay = layout("ass-ass")
    point = random_point("ass-ass", rng)
    rows = build_R("ass-ass").evaluate(point).rows
    gens = [rows[i] for i in (0, 6, 12, 18)]
    orbit = [act_vector(p, r, lay.t3) for p in permutations(3) for r in gens]
    assert exact_rank(orbit) == exact_rank(rows) == exact_rank(rows + orbit)


def test_RR_at_point_equals_RR_of_point(rng):
    point = random_point("com-ass", rng)
    values = dict(zip(layout("com-ass").params.names, point))
    assert build_RR("com-ass", values).rows == build_RR("com-ass").evaluate(point).rows


def test_render_rule_ns():
    lay = layout("ass-ass-ns")
    src, pairs = lay.params.generators[0]
    assert render_rule(lay, src, {pairs[1][0]: -1}) == "(xy)·z -> x(y·z)"
    assert render_rule(lay, src, {}) == "(xy)·z -> 0"


def test_unknown_case():
    with pytest.raises(ValueError):
        get_case("ass-lie")
