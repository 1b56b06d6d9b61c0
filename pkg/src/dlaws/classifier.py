"""End-to-end classification and verification of distributive laws."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .freeoperad import NONE, BasisTable, is_leaf, parse_monomial
from .groebner import buchberger, is_zero_dimensional, zero_set
from .polyring import Coefficient, qnorm, qstr
from .relations import (
    CaseLayout,
    CaseSpec,
    axiom_rows,
    build_R,
    build_RR,
    get_case,
    layout,
    point_from_values,
    render_rule,
)
from .smithform import distinct_entries, exact_rank, partial_smith, residual_ideal

REPORT_SCHEMA = "operad-dlaw-report/1"

# Koszul duals of the classified cases
DUAL_CASE = {
    "ass-ass-ns": "ass-ass-ns",
    "ass-ass": "ass-ass",
    "com-ass": "lie-ass",
    "lie-ass": "com-ass",
    "com-com": "lie-lie",
    "com-lie": "lie-com",
    "lie-com": "com-lie",
    "ass-mag": "com-mag",
}


class SingularSubstitution(ValueError):
    """The generator change of basis ``x∘y -> x∘y + t y∘x`` is not invertible."""


# -- dimensions ----------------------------------------------------------------------

def component_dim(kind: str, n: int, symmetric: bool = True) -> int:
    if not symmetric:
        if kind != "Ass":
            raise ValueError("only Ass has a nonsymmetric version here")
        return 1
    if kind == "Ass":
        return math.factorial(n)
    if kind == "Com":
        return 1
    if kind == "Lie":
        return math.factorial(n - 1)
    if kind == "Mag":
        return math.factorial(2 * n - 2) // math.factorial(n - 1)
    raise ValueError(f"unknown operad kind {kind!r}")


def set_partitions(items: Sequence[int]):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for k in range(len(p)):
            yield p[:k] + [[first] + p[k]] + p[k + 1:]


def compositions(n: int):
    """Ordered splittings of ``range(n)`` into nonempty intervals."""
    for cuts in itertools.product((0, 1), repeat=n - 1):
        blocks, cur = [], [0]
        for i, c in enumerate(cuts, start=1):
            if c:
                blocks.append(cur)
                cur = [i]
            else:
                cur.append(i)
        blocks.append(cur)
        yield blocks


@dataclass(frozen=True)
class CompositeDim:
    case: str
    arity: int
    value: int


def expected_dim(case, n: int = 4) -> CompositeDim:
    """Dimension of the composite ``P2 ∘ P1`` in arity ``n`` by enumeration.

    ``P1`` is the inner operad (kind of ``gens[1]``) and ``P2`` the outer one.
    """
    case = get_case(case)
    total = 0
    if case.symmetric:
        blocks_iter = set_partitions(range(n))
    else:
        blocks_iter = compositions(n)
    for blocks in blocks_iter:
        inner = 1
        for b in blocks:
            inner *= component_dim(case.p1, len(b), case.symmetric)
        total += component_dim(case.p2, len(blocks), case.symmetric) * inner
    return CompositeDim(case.id, n, total)


def required_rank(case) -> int:
    case = get_case(case)
    return len(layout(case.id).t4) - expected_dim(case, 4).value


# -- laws ------------------------------------------------------------------------------

@dataclass
class LawCoefficients:
    case: CaseSpec
    values: Dict[str, Coefficient]

    def __post_init__(self):
        self.case = get_case(self.case)
        names = layout(self.case.id).params.names
        unknown = set(self.values) - set(names)
        if unknown:
            raise ValueError(f"unknown parameters for {self.case.id}: {', '.join(sorted(unknown))}")
        self.values = {n: qnorm(Fraction(self.values.get(n, 0))) for n in names}

    @property
    def point(self) -> Tuple[Coefficient, ...]:
        return point_from_values(layout(self.case.id), self.values)

    @classmethod
    def from_point(cls, case, point: Sequence[Coefficient]) -> "LawCoefficients":
        case = get_case(case)
        names = layout(case.id).params.names
        return cls(case, dict(zip(names, point)))

    def rules(self) -> List[str]:
        lay = layout(self.case.id)
        out = []
        for src, pairs in lay.params.generators:
            coeffs = {j: self.values[lay.params.names[v]] for j, v in pairs}
            out.append(render_rule(lay, src, coeffs))
        return out

    def nonzero(self) -> Dict[str, Coefficient]:
        return {k: v for k, v in self.values.items() if v}

    def to_json(self) -> dict:
        return {"case": self.case.id, "values": {k: qstr(v) for k, v in self.values.items()}}

    def __eq__(self, other):
        return isinstance(other, LawCoefficients) and self.case == other.case and self.values == other.values

    def __hash__(self):
        return hash((self.case.id, self.point))


@dataclass
class Verification:
    ok: bool
    rank: int
    required: int
    nrows: int
    ncols: int

    @property
    def excess(self) -> int:
        """How far the rank overshoots the rank a law must have (0 for laws)."""
        return self.rank - self.required


def verify_law(law: LawCoefficients) -> Verification:
    """Exact rank of [RR] at the law's point against the required rank."""
    rr = build_RR(law.case, law.values)
    rank = exact_rank(rr)
    req = required_rank(law.case)
    return Verification(rank == req, rank, req, *rr.shape)


def law_from_rules(case, rules: Mapping[str, str]) -> LawCoefficients:
    """Build a law from rewrite rules ``source -> combination`` in display notation.

    Sources must be orbit-generator monomials of the case.  Combination syntax:
    terms separated by ``+``/``-``, each an optional rational coefficient and a
    monomial.
    """
    case = get_case(case)
    lay = layout(case.id)
    values = {n: 0 for n in lay.params.names}
    by_src = {src: pairs for src, pairs in lay.params.generators}
    for lhs, rhs in rules.items():
        sign, src = lay.t3.index_of(parse_monomial(lhs, lay.gens))
        if src not in by_src:
            raise ValueError(f"{lhs!r} is not the source of a rewrite rule in {case.id}")
        target_var = {j: v for j, v in by_src[src]}
        for coeff, mono in _split_combination(rhs):
            s2, j = lay.t3.index_of(parse_monomial(mono, lay.gens))
            if j not in target_var:
                raise ValueError(f"{mono!r} is not a target monomial in {case.id}")
            name = lay.params.names[target_var[j]]
            # row = source + sum params*targets = 0, so params = -rhs coefficients
            values[name] = qnorm(values[name] - sign * s2 * coeff)
    return LawCoefficients(case, values)


def _split_combination(text: str) -> List[Tuple[Fraction, str]]:
    text = text.strip()
    if text == "0":
        return []
    out = []
    depth = 0
    cur = ""
    sign = 1
    terms = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            terms.append((sign, cur))
            cur = ""
            sign = 1 if ch == "+" else -1
        elif depth == 0 and ch in "+-":
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
    terms.append((sign, cur))
    for sign, body in terms:
        body = body.strip()
        k = 0
        while k < len(body) and (body[k].isdigit() or body[k] == "/"):
            k += 1
        coeff = Fraction(body[:k]) if k else Fraction(1)
        mono = body[k:].lstrip("* ").strip()
        out.append((sign * coeff, mono))
    return out


# -- transformations -------------------------------------------------------------------

def _transform_tree(t, which: int, mix: Coefficient, opposite: bool) -> Dict[object, Coefficient]:
    """Image of a planar tree under a change of generator ``which``.

    ``opposite``: ``g(l, r) -> g(r, l)``; otherwise ``g(l, r) -> g(l, r) + mix g(r, l)``.
    """
    if is_leaf(t):
        return {t: 1}
    op, left, right = t
    lefts = _transform_tree(left, which, mix, opposite)
    rights = _transform_tree(right, which, mix, opposite)
    out: Dict[object, Coefficient] = {}
    for (l, cl), (r, cr) in itertools.product(lefts.items(), rights.items()):
        c = cl * cr
        if op != which:
            terms = [((op, l, r), c)]
        elif opposite:
            terms = [((op, r, l), c)]
        else:
            terms = [((op, l, r), c), ((op, r, l), c * mix)]
        for tree, v in terms:
            if v:
                out[tree] = out.get(tree, 0) + v
    return {k: v for k, v in out.items() if v}


def _transform_row(row: Mapping[int, Coefficient], table: BasisTable, which: int, mix, opposite) -> Dict[int, Coefficient]:
    out: Dict[int, Coefficient] = {}
    for i, c in row.items():
        for tree, v in _transform_tree(table.monomials[i], which, mix, opposite).items():
            sign, j = table.index_of(tree)
            out[j] = out.get(j, 0) + sign * v * c
    return {j: qnorm(v) for j, v in out.items() if v}


def _law_rows_at(lay: CaseLayout, point) -> List[Dict[int, Coefficient]]:
    """Full S3-closed law rows at a rational point."""
    from .relations import law_rows

    rows = []
    for r in law_rows(lay.case):
        ev = {j: c.evaluate(point) for j, c in r.items()}
        rows.append({j: v for j, v in ev.items() if v})
    return rows


def _rref(rows: List[Dict[int, Coefficient]], order: List[int]) -> Dict[int, Dict[int, Coefficient]]:
    """Reduced echelon form with pivots searched in column ``order``; returns pivot -> row."""
    pos = {j: k for k, j in enumerate(order)}
    basis: Dict[int, Dict[int, Coefficient]] = {}
    for r in rows:
        v = dict(r)
        for p, b in list(basis.items()):
            if p in v:
                f = v[p]
                for j, c in b.items():
                    new = v.get(j, 0) - f * c
                    if new:
                        v[j] = new
                    else:
                        v.pop(j, None)
        if not v:
            continue
        lead = min(v, key=lambda j: pos[j])
        inv = Fraction(1) / v[lead]
        v = {j: c * inv for j, c in v.items()}
        for p, b in basis.items():
            if lead in b:
                f = b[lead]
                for j, c in v.items():
                    new = b.get(j, 0) - f * c
                    if new:
                        b[j] = new
                    else:
                        b.pop(j, None)
        basis[lead] = v
    return basis


def _in_span(vec: Dict[int, Coefficient], rows: List[Dict[int, Coefficient]], ncols: int) -> bool:
    return exact_rank(rows + [vec]) == exact_rank(rows)


def _conjugate(law: LawCoefficients, which: int, mix, opposite: bool) -> LawCoefficients:
    lay = layout(law.case.id)
    t3 = lay.t3
    # the new generator must satisfy the same axiom as the old one
    kinds = (law.case.p2, law.case.p1)
    for op, kind in enumerate(kinds):
        ax = [dict(r) for r in axiom_rows(kind, t3, op)]
        for r in ax:
            img = _transform_row(r, t3, which, mix, opposite)
            if img and not _in_span(img, ax, len(t3)):
                raise ValueError(f"the change of generator does not preserve the {kind} axiom")
    rows = [_transform_row(r, t3, which, mix, opposite) for r in _law_rows_at(lay, law.point)]
    order = lay.source + lay.target
    basis = _rref(rows, order)
    values = {}
    for src, pairs in lay.params.generators:
        b = basis.get(src)
        if b is None or any(j in b for j in lay.source if j != src):
            raise ValueError("transformed relations are not a rewrite rule")
        for j, v in pairs:
            values[lay.params.names[v]] = qnorm(b.get(j, 0))
    return LawCoefficients(law.case, values)


@dataclass(frozen=True)
class Involution:
    name: str
    ops: Tuple[int, ...]

    def __call__(self, law: LawCoefficients) -> LawCoefficients:
        for op in self.ops:
            law = _conjugate(law, op, 0, True)
        return law


def opposite_involutions(case) -> List[Involution]:
    """``∘ -> ∘op``, ``• -> •op`` and both, for generators without symmetry."""
    case = get_case(case)
    lay = layout(case.id)
    if not case.symmetric:
        return []
    free = [op for op, g in enumerate(lay.gens) if g.symmetry == NONE]
    out = []
    for k in range(1, len(free) + 1):
        for ops in itertools.combinations(free, k):
            out.append(Involution("+".join(f"{lay.gens[o].name}op" for o in ops), ops))
    return out


def iso_orbits(laws: Sequence[LawCoefficients], case=None) -> List[List[int]]:
    """Partition of ``laws`` (by index) into orbits of the opposite involutions."""
    if not laws:
        return []
    case = get_case(case or laws[0].case)
    invs = opposite_involutions(case)
    parent = list(range(len(laws)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    index = {law.point: i for i, law in enumerate(laws)}
    for i, law in enumerate(laws):
        for g in invs:
            j = index.get(g(law).point)
            if j is not None:
                parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(len(laws)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def substitute_generator(law: LawCoefficients, mix, which: int = 0) -> LawCoefficients:
    """The law satisfied by the new product ``x∘'y = x∘y + t (y∘x)``.

    Old relations are rewritten in terms of ``∘'`` using the inverse change of
    basis ``x∘y = (x∘'y - t y∘'x) / (1 - t^2)``; the scale drops out because
    every law row is linear in ``∘``.
    """
    mix = qnorm(Fraction(mix))
    if mix in (1, -1):
        raise SingularSubstitution(f"t = {qstr(mix)} makes the substitution singular")
    lay = layout(law.case.id)
    if lay.gens[which].symmetry != NONE:
        raise ValueError("only a generator without symmetry can be mixed with its opposite")
    if mix == 0:
        return LawCoefficients(law.case, dict(law.values))
    return _conjugate(law, which, -mix, False)


def compose_mix(t1, t2) -> Fraction:
    """Mixing parameter of two successive substitutions (up to an overall scale)."""
    t1, t2 = Fraction(t1), Fraction(t2)
    if t1 * t2 == -1:
        raise SingularSubstitution("composite substitution is singular")
    return qnorm((t1 + t2) / (1 + t1 * t2))


# -- reports ------------------------------------------------------------------------

@dataclass
class ClassificationReport:
    case: CaseSpec
    variables: List[str]
    basis3: List[str]
    basis4_size: int
    R_shape: Tuple[int, int]
    RR_shape: Tuple[int, int]
    scalar_rank: int
    residual_shape: Tuple[int, int]
    residual_entries: int
    residual_generators: int
    groebner_basis: List[str]
    zero_dimensional: bool
    zero_set: Optional[List[Tuple[Coefficient, ...]]]
    laws: List[LawCoefficients]
    verified: List[bool]
    iso_orbits: List[List[int]]
    expected_dim: int
    required_rank: int
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "case": self.case.id,
            "label": self.case.label,
            "variables": self.variables,
            "basis": {"arity3": self.basis3, "arity4_size": self.basis4_size},
            "matrices": {
                "R": list(self.R_shape),
                "RR": list(self.RR_shape),
                "scalar_rank": self.scalar_rank,
                "residual": list(self.residual_shape),
                "residual_entries": self.residual_entries,
                "residual_generators": self.residual_generators,
            },
            "expected_dim": self.expected_dim,
            "required_rank": self.required_rank,
            "groebner_basis": self.groebner_basis,
            "zero_dimensional": self.zero_dimensional,
            "zero_set": None if self.zero_set is None else [[qstr(v) for v in p] for p in self.zero_set],
            "laws": [
                {"values": {k: qstr(v) for k, v in law.nonzero().items()}, "rules": law.rules(), "verified": ok}
                for law, ok in zip(self.laws, self.verified)
            ],
            "iso_orbits": self.iso_orbits,
            "notes": self.notes,
        }

    def to_text(self) -> str:
        lines = [
            f"case {self.case.id} ({self.case.label})",
            f"  basis sizes: arity 3 = {len(self.basis3)}, arity 4 = {self.basis4_size}",
            f"  [R] {self.R_shape[0]}x{self.R_shape[1]}, [RR] {self.RR_shape[0]}x{self.RR_shape[1]}",
            f"  partial Smith: I_{self.scalar_rank} + residual {self.residual_shape[0]}x{self.residual_shape[1]}"
            f" ({self.residual_entries} distinct entries, {self.residual_generators} monic)",
            f"  composite dimension {self.expected_dim}, required rank {self.required_rank}",
            f"  Groebner basis ({len(self.groebner_basis)}): " + ", ".join(self.groebner_basis),
        ]
        if self.zero_set is None:
            lines.append("  ideal is not zero-dimensional")
        else:
            lines.append(f"  {len(self.zero_set)} solution(s)")
        for k, (law, ok) in enumerate(zip(self.laws, self.verified), start=1):
            vals = ", ".join(f"{n}={qstr(v)}" for n, v in law.nonzero().items()) or "trivial"
            lines.append(f"  law {k}: {vals} [{'verified' if ok else 'FAILED'}]")
            for r in law.rules():
                lines.append(f"      {r}")
        if self.iso_orbits:
            lines.append("  isomorphism classes: " + " ".join("{" + ",".join(str(i + 1) for i in o) + "}" for o in self.iso_orbits))
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines) + "\n"


def classify(case) -> ClassificationReport:
    case = get_case(case)
    lay = layout(case.id)
    R = build_R(case)
    RR = build_RR(case)
    ps = partial_smith(RR)
    ideal = residual_ideal(ps.residual, lay.ring)
    gb = buchberger(ideal)
    notes = [f"Koszul dual case: {DUAL_CASE[case.id]}"]
    zd = is_zero_dimensional(gb)
    points = None
    laws: List[LawCoefficients] = []
    if zd:
        points = sorted(zero_set(gb).points, key=lambda p: (sum(1 for v in p if v), [-v for v in p]))
        laws = [LawCoefficients.from_point(case, p) for p in points]
    else:
        notes.append("solution set is positive-dimensional; see builtin sample laws")
        if case.id == "ass-mag":
            notes.append("components with coefficients in Q(i) are not sampled (exact arithmetic is over Q only)")
    verified = [verify_law(law).ok for law in laws]
    orbits = iso_orbits(laws, case) if laws else []
    ed = expected_dim(case, 4).value
    return ClassificationReport(
        case=case,
        variables=list(lay.params.names),
        basis3=lay.t3.names(),
        basis4_size=len(lay.t4),
        R_shape=R.shape,
        RR_shape=RR.shape,
        scalar_rank=ps.scalar_rank,
        residual_shape=ps.residual_shape,
        residual_entries=len(distinct_entries(ps.residual)),
        residual_generators=len(ideal),
        groebner_basis=gb.rendered(),
        zero_dimensional=zd,
        zero_set=points,
        laws=laws,
        verified=verified,
        iso_orbits=orbits,
        expected_dim=ed,
        required_rank=len(lay.t4) - ed,
        notes=notes,
    )


# -- canned laws ----------------------------------------------------------------------

@dataclass
class NamedLaw:
    name: str
    law: LawCoefficients
    expect: bool


def family4(gamma, s) -> LawCoefficients:
    """Ass/Mag family with ``s**2 == gamma**2 + gamma``."""
    gamma, s = Fraction(gamma), Fraction(s)
    if s * s != gamma * gamma + gamma:
        raise ValueError("s must be a square root of gamma^2 + gamma")
    return LawCoefficients("ass-mag", {"c1": gamma, "c2": -s, "d3": -(gamma + 1), "d5": s})


def builtin_laws(case) -> List[NamedLaw]:
    case = get_case(case)
    L = lambda vals: LawCoefficients(case, vals)  # noqa: E731
    out = [NamedLaw("trivial", L({}), True)]
    if case.id == "ass-ass-ns":
        out += [
            NamedLaw("b", L({"c": -1}), True),
            NamedLaw("c", L({"b": -1}), True),
            NamedLaw("d", L({"b": -1, "c": -1}), True),
            NamedLaw("not-a-law", L({"a": 1}), False),
        ]
    elif case.id == "ass-ass":
        out += [
            NamedLaw("b", L({"c1": -1}), True),
            NamedLaw("c", L({"b1": -1}), True),
            NamedLaw("d", L({"b1": -1, "c1": -1}), True),
            NamedLaw("e", L({"d3": -1}), True),
            NamedLaw("f", L({"a2": -1}), True),
            NamedLaw("g", L({"a2": -1, "d3": -1}), True),
            NamedLaw("not-a-law", L({"a2": -1, "b1": -1}), False),
        ]
    elif case.id == "lie-com":
        out.append(NamedLaw("poisson", law_from_rules(case, {"[a·b,c]": "a·[b,c] + [a,c]·b"}), True))
    elif case.id == "lie-ass":
        out.append(NamedLaw("derivation", law_from_rules(case, {"[ab,c]": "a[b,c] + [a,c]b"}), False))
    elif case.id == "ass-mag":
        out += [
            NamedLaw("truncated", L({"c1": -1}), True),
            NamedLaw("family4-gamma=1/3", family4(Fraction(1, 3), Fraction(2, 3)), True),
            NamedLaw("family4-gamma=0", family4(0, 0), True),
            NamedLaw("family4-gamma=1/8", family4(Fraction(1, 8), Fraction(3, 8)), True),
            NamedLaw("not-a-law", L({"c1": Fraction(1, 3), "d3": Fraction(-4, 3)}), False),
        ]
    return out
