"""Quadratic relation matrices [R] and their arity-4 consequences [RR].

Generator convention: ``gens[0]`` is the operation of the *target* operad
(the root of the right-hand side of every rewrite rule) and ``gens[1]`` is the
operation of the *source* operad.  A rewrite rule sends a monomial whose root
is ``gens[1]`` with a ``gens[0]`` child (the space ``F12``) to a combination of
monomials whose root is ``gens[0]`` with a ``gens[1]`` child (``F21``).

Case ids name the pair ``p1-p2`` where ``p1`` is the kind of ``gens[1]`` and
``p2`` the kind of ``gens[0]``.
"""

from __future__ import annotations

import functools
import string
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .freeoperad import (
    ANTICOMMUTATIVE,
    COMMUTATIVE,
    NONE,
    BasisTable,
    GeneratorSpec,
    act,
    act_vector,
    canonical_shape,
    default_type_key,
    enumerate_basis,
    graft_consequences,
    is_leaf,
    parse_shape,
    permutations,
    render,
)
from .polyring import Coefficient, PolyRing, Polynomial, qstr

KIND_SYMMETRY = {"Ass": NONE, "Mag": NONE, "Com": COMMUTATIVE, "Lie": ANTICOMMUTATIVE}


@dataclass(frozen=True)
class CaseSpec:
    id: str
    p1: str
    p2: str
    symmetric: bool = True

    def __post_init__(self):
        for k in (self.p1, self.p2):
            if k not in KIND_SYMMETRY:
                raise ValueError(f"unknown operad kind {k!r}")

    @property
    def label(self) -> str:
        prefix = "ns " if not self.symmetric else ""
        return f"{prefix}{self.p1}/{self.p2}"


CASES: Dict[str, CaseSpec] = {
    c.id: c
    for c in (
        CaseSpec("ass-ass-ns", "Ass", "Ass", symmetric=False),
        CaseSpec("ass-ass", "Ass", "Ass"),
        CaseSpec("com-ass", "Com", "Ass"),
        CaseSpec("lie-ass", "Lie", "Ass"),
        CaseSpec("com-com", "Com", "Com"),
        CaseSpec("com-lie", "Com", "Lie"),
        CaseSpec("lie-com", "Lie", "Com"),
        CaseSpec("ass-mag", "Ass", "Mag"),
    )
}

# display conventions: (gens[0], gens[1]) as (symbol, style)
_DISPLAY = {
    "ass-ass-ns": (("∘", "juxt"), ("•", "dot")),
    "ass-ass": (("∘", "juxt"), ("•", "dot")),
    "ass-mag": (("∘", "juxt"), ("•", "dot")),
    "com-ass": (("juxt", "juxt"), ("·", "dot")),
    "com-com": (("juxt", "juxt"), ("·", "dot")),
    "lie-ass": (("juxt", "juxt"), ("[,]", "bracket")),
    "com-lie": (("[,]", "bracket"), ("·", "dot")),
    "lie-com": (("·", "dot"), ("[,]", "bracket")),
}

# Association-type orders, prefix notation op(left,right) over generator indices.
_NN3 = ["0(0(*,*),*)", "0(*,0(*,*))", "1(1(*,*),*)", "1(*,1(*,*))",
        "1(0(*,*),*)", "1(*,0(*,*))", "0(1(*,*),*)", "0(*,1(*,*))"]
_NS3 = ["1(1(*,*),*)", "1(0(*,*),*)", "0(1(*,*),*)", "0(0(*,*),*)",
        "0(*,1(*,*))", "0(*,0(*,*))"]
_NS4 = ["1(1(1(*,*),*),*)", "1(1(0(*,*),*),*)", "1(0(1(*,*),*),*)", "1(0(0(*,*),*),*)",
        "1(0(*,1(*,*)),*)", "1(0(*,0(*,*)),*)", "1(1(*,*),1(*,*))", "1(1(*,*),0(*,*))",
        "1(0(*,*),0(*,*))", "0(1(1(*,*),*),*)", "0(1(0(*,*),*),*)", "0(0(1(*,*),*),*)",
        "0(0(0(*,*),*),*)", "0(0(*,1(*,*)),*)", "0(0(*,0(*,*)),*)", "0(1(*,*),1(*,*))",
        "0(1(*,*),0(*,*))", "0(0(*,*),1(*,*))", "0(0(*,*),0(*,*))", "0(*,1(1(*,*),*))",
        "0(*,1(0(*,*),*))", "0(*,0(1(*,*),*))", "0(*,0(0(*,*),*))", "0(*,0(*,1(*,*)))",
        "0(*,0(*,0(*,*)))"]
_SS3 = ["0(0(*,*),*)", "0(1(*,*),*)", "1(0(*,*),*)", "1(1(*,*),*)"]
_SS4 = ["0(0(0(*,*),*),*)", "0(0(1(*,*),*),*)", "0(1(0(*,*),*),*)", "0(1(1(*,*),*),*)",
        "0(0(*,*),0(*,*))", "0(0(*,*),1(*,*))", "0(1(*,*),1(*,*))", "1(0(0(*,*),*),*)",
        "1(0(1(*,*),*),*)", "1(1(0(*,*),*),*)", "1(1(1(*,*),*),*)", "1(0(*,*),0(*,*))",
        "1(0(*,*),1(*,*))", "1(1(*,*),1(*,*))"]


def _templates(gens) -> Dict[int, List[str]]:
    sym0 = gens[0].symmetry != NONE
    sym1 = gens[1].symmetry != NONE
    if not sym0 and not sym1:
        return {3: _NN3}
    if not sym0 and sym1:
        return {3: _NS3, 4: _NS4}
    if sym0 and sym1:
        return {3: _SS3, 4: _SS4}
    raise ValueError("unsupported symmetry pattern")


def get_case(case) -> CaseSpec:
    if isinstance(case, CaseSpec):
        return case
    try:
        return CASES[case]
    except KeyError:
        raise ValueError(f"unknown case {case!r}; choose from {', '.join(CASES)}") from None


@dataclass
class ParamTable:
    """One parameter per (orbit-generator source monomial, target monomial)."""

    names: List[str]
    ring: PolyRing
    # per law generator: (source index in t3, [(target index in t3, var index)])
    generators: List[Tuple[int, List[Tuple[int, int]]]]

    def __len__(self):
        return len(self.names)

    def var(self, name: str) -> Polynomial:
        return self.ring.var(name)


@dataclass
class CaseLayout:
    case: CaseSpec
    gens: Tuple[GeneratorSpec, GeneratorSpec]
    t3: BasisTable
    t4: BasisTable
    source: List[int]
    target: List[int]
    params: ParamTable

    @property
    def ring(self) -> PolyRing:
        return self.params.ring


def _root_child_ops(t) -> Optional[Tuple[int, int]]:
    _, left, right = t
    child = left if not is_leaf(left) else right
    return t[0], child[0]


def _type_order(gens):
    explicit = {}
    for n, items in _templates(gens).items():
        explicit[n] = {canonical_shape(parse_shape(s), gens): k for k, s in enumerate(items)}
    return lambda s: default_type_key(s, explicit)


def _param_names(groups_per_gen: List[List[int]]) -> List[List[str]]:
    ngroups = sum(len(g) for g in groups_per_gen)
    if ngroups == 1:
        return [[f"x{k + 1}" for k in range(groups_per_gen[0][0])]]
    letters = iter(string.ascii_lowercase)
    out = []
    for gen_groups in groups_per_gen:
        names = []
        for size in gen_groups:
            letter = next(letters)
            names.extend([letter] if size == 1 else [f"{letter}{k + 1}" for k in range(size)])
        out.append(names)
    return out


@functools.lru_cache(maxsize=None)
def layout(case_id: str) -> CaseLayout:
    """Basis tables and parameter table for a case (cached)."""
    case = get_case(case_id)
    (n0, s0), (n1, s1) = _DISPLAY[case.id]
    if not case.symmetric:
        gens = (GeneratorSpec(n0, NONE, s0), GeneratorSpec(n1, NONE, s1))
    else:
        gens = (GeneratorSpec(n0, KIND_SYMMETRY[case.p2], s0),
                GeneratorSpec(n1, KIND_SYMMETRY[case.p1], s1))
    order = _type_order(gens)
    alphabet3, alphabet4 = ("xyz", "wxyz") if case.p2 in ("Ass", "Mag") and case.p1 == "Ass" else ("abc", "abcd")
    t3 = enumerate_basis(gens, 3, case.symmetric, order, alphabet3)
    t4 = enumerate_basis(gens, 4, case.symmetric, order, alphabet4)
    source = [i for i, m in enumerate(t3.monomials) if _root_child_ops(m) == (1, 0)]
    target = [i for i, m in enumerate(t3.monomials) if _root_child_ops(m) == (0, 1)]

    # orbit generators of F12
    gen_rows: List[int] = []
    covered = set()
    perms = permutations(3) if case.symmetric else [(0, 1, 2)]
    for i in source:
        if i in covered:
            continue
        gen_rows.append(i)
        covered.update(act(p, i, t3).index for p in perms)

    groups = []
    for _ in gen_rows:
        sizes = []
        last = None
        for j in target:
            ty = t3.type_of(j)
            if ty != last:
                sizes.append(0)
                last = ty
            sizes[-1] += 1
        groups.append(sizes)
    names = _param_names(groups)
    ring = PolyRing([n for ns in names for n in ns])
    generators = []
    for src, ns in zip(gen_rows, names):
        generators.append((src, [(j, ring.index(n)) for j, n in zip(target, ns)]))
    params = ParamTable([n for ns in names for n in ns], ring, generators)
    return CaseLayout(case, gens, t3, t4, source, target, params)


# -- matrices ---------------------------------------------------------------------------

def _entry_text(c) -> str:
    if isinstance(c, Polynomial):
        if c.is_constant():
            c = c.constant_value()
        else:
            terms = list(c.terms.items())
            if len(terms) == 1:
                mono, coeff = terms[0]
                if sum(mono) == 1 and coeff in (1, -1):
                    name = c.ring.names[mono.index(1)]
                    return name if coeff == 1 else "-" + name
            return "(" + str(c) + ")"
    if c == 0:
        return "."
    if c == 1:
        return "+"
    if c == -1:
        return "-"
    return "(" + qstr(c) + ")"


@dataclass
class RelationMatrix:
    """Sparse matrix: ``rows[i]`` maps column index to a nonzero coefficient."""

    rows: List[Dict[int, object]]
    ncols: int
    ring: Optional[PolyRing] = None
    basis: Optional[BasisTable] = None
    labels: List[str] = field(default_factory=list)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.ncols

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, 0)

    def dense(self) -> List[List[object]]:
        return [[r.get(j, 0) for j in range(self.ncols)] for r in self.rows]

    def evaluate(self, point: Sequence[Coefficient]) -> "RelationMatrix":
        """Substitute a parameter point, giving a matrix over Q."""
        rows = []
        for r in self.rows:
            out = {}
            for j, c in r.items():
                v = c.evaluate(point) if isinstance(c, Polynomial) else c
                if v:
                    out[j] = v
            rows.append(out)
        return RelationMatrix(rows, self.ncols, None, self.basis, list(self.labels))

    def entries(self):
        for r in self.rows:
            yield from r.values()

    def dump(self, sep: str = " ") -> str:
        lines = [sep.join(_entry_text(r.get(j, 0)) for j in range(self.ncols)) for r in self.rows]
        return "\n".join(lines) + ("\n" if lines else "")


def _poly_row(vec: Mapping[int, object], ring: PolyRing) -> Dict[int, Polynomial]:
    return {j: ring.coerce(c) for j, c in vec.items() if c}


def _head_stabilizer_order(head: int, table: BasisTable) -> int:
    return sum(1 for p in permutations(3) if act(p, head, table).index == head)


def orbit_rows(row: Mapping[int, object], head: int, table: BasisTable) -> List[Dict[int, object]]:
    """Images of a generator row under a transversal of the head's stabilizer.

    Trivial stabilizer: all six words in lexicographic order.  Order two: the
    cyclic words.  Exact repeats are dropped.
    """
    if not table.symmetric:
        return [dict(row)]
    k = _head_stabilizer_order(head, table)
    if k == 1:
        words = permutations(3)
    elif k == 2:
        words = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    else:
        words = [(0, 1, 2)]
    return dedupe_rows([act_vector(w, row, table) for w in words])


def _row_key(row: Mapping[int, object]):
    return frozenset(row.items())


def dedupe_rows(rows: Sequence[Mapping[int, object]]) -> List[Dict[int, object]]:
    """Drop zero rows and exact repeats of an earlier row."""
    seen = set()
    out = []
    for r in rows:
        if not r:
            continue
        key = _row_key(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(dict(r))
    return out


def axiom_generator(kind: str, table: BasisTable, op: int) -> Optional[Tuple[int, Dict[int, int]]]:
    """The defining relation of generator ``op`` as ``(head index, row)``; ``None`` for Mag."""
    if kind == "Mag":
        return None
    row: Dict[int, int] = {}

    def add(t, c):
        sign, j = table.index_of(t)
        v = row.get(j, 0) + sign * c
        if v:
            row[j] = v
        else:
            row.pop(j, None)

    if kind in ("Ass", "Com"):
        add((op, (op, 0, 1), 2), 1)
        add((op, 0, (op, 1, 2)), -1)
    elif kind == "Lie":
        add((op, (op, 0, 1), 2), 1)
        add((op, (op, 1, 2), 0), 1)
        add((op, (op, 2, 0), 1), 1)
    else:
        raise ValueError(f"unknown operad kind {kind!r}")
    head = table.index_of((op, (op, 0, 1), 2)).index
    return head, row


def axiom_rows(kind: str, table: BasisTable, op: int) -> List[Dict[int, int]]:
    """Axiom rows for generator ``op`` (an index into ``table.gens``), orbit included."""
    g = axiom_generator(kind, table, op)
    if g is None:
        return []
    head, row = g
    return orbit_rows(row, head, table)


def law_generators(lay: CaseLayout) -> List[Tuple[int, Dict[int, Polynomial]]]:
    ring = lay.ring
    out = []
    for src, pairs in lay.params.generators:
        row = {src: ring.one}
        for j, v in pairs:
            row[j] = ring.var(v)
        out.append((src, row))
    return out


def law_rows(case, params: Optional[ParamTable] = None, table: Optional[BasisTable] = None):
    lay = layout(get_case(case).id)
    rows = []
    for head, row in law_generators(lay):
        rows.extend(orbit_rows(row, head, lay.t3))
    return rows


def _kinds(case: CaseSpec) -> Tuple[str, str]:
    return case.p2, case.p1  # kinds of gens[0], gens[1]


def build_R(case, params=None) -> RelationMatrix:
    """Axiom rows of both generators followed by the law rows."""
    case = get_case(case)
    lay = layout(case.id)
    ring = lay.ring
    rows, labels = [], []
    for op, kind in enumerate(_kinds(case)):
        for r in axiom_rows(kind, lay.t3, op):
            rows.append(_poly_row(r, ring))
            labels.append(f"{kind}[{op}]")
    for r in law_rows(case):
        rows.append(_poly_row(r, ring))
        labels.append("law")
    m = RelationMatrix(rows, len(lay.t3), ring, lay.t3, labels)
    return _maybe_evaluate(m, lay, params)


def relation_generators(case) -> List[Tuple[str, Dict[int, Polynomial]]]:
    """Module generators of [R]: one row per orbit."""
    case = get_case(case)
    lay = layout(case.id)
    out = []
    for op, kind in enumerate(_kinds(case)):
        g = axiom_generator(kind, lay.t3, op)
        if g is not None:
            out.append((f"{kind}[{op}]", _poly_row(g[1], lay.ring)))
    for k, (_, row) in enumerate(law_generators(lay)):
        out.append((f"law{k + 1}", row))
    return out


def build_RR(case, params=None, dedupe: bool = True) -> RelationMatrix:
    """The ten consequences of every generator relation, closed under S4.

    Rows are ordered by (relation, consequence, permutation); with ``dedupe``
    exact repeats of an earlier row are dropped (a row and its negative are
    both kept, so the counts match the usual presentation).
    """
    case = get_case(case)
    lay = layout(case.id)
    perms = permutations(4) if case.symmetric else [(0, 1, 2, 3)]
    rows, labels = [], []
    for name, rel in relation_generators(case):
        for k, cons in enumerate(graft_consequences(rel, lay.t3, lay.t4)):
            for p in perms:
                rows.append(act_vector(p, cons, lay.t4) if case.symmetric else cons)
                labels.append(f"{name}:{k}:{''.join(map(str, p))}")
    if dedupe:
        keep, seen = [], set()
        for r, lab in zip(rows, labels):
            if not r:
                continue
            key = _row_key(r)
            if key in seen:
                continue
            seen.add(key)
            keep.append((r, lab))
        rows = [r for r, _ in keep]
        labels = [lab for _, lab in keep]
    m = RelationMatrix(rows, len(lay.t4), lay.ring, lay.t4, labels)
    return _maybe_evaluate(m, lay, params)


def _maybe_evaluate(m: RelationMatrix, lay: CaseLayout, params) -> RelationMatrix:
    if params is None or isinstance(params, ParamTable):
        return m
    values = params.values if hasattr(params, "values") and not isinstance(params, Mapping) else params
    point = point_from_values(lay, values)
    return m.evaluate(point)


def point_from_values(lay: CaseLayout, values: Mapping[str, Coefficient]) -> Tuple[Coefficient, ...]:
    names = lay.params.names
    unknown = set(values) - set(names)
    if unknown:
        raise ValueError(f"unknown parameters: {', '.join(sorted(unknown))}")
    return tuple(values.get(n, 0) for n in names)


def render_rule(lay: CaseLayout, src: int, coeffs: Mapping[int, Coefficient]) -> str:
    """``source -> combination`` with the law row moved to the right-hand side."""
    lhs = render(lay.t3.monomials[src], lay.gens, lay.t3.alphabet)
    parts = []
    for j in lay.target:
        c = -coeffs.get(j, 0)
        if not c:
            continue
        mono = render(lay.t3.monomials[j], lay.gens, lay.t3.alphabet)
        if c == 1:
            term = mono
        elif c == -1:
            term = "-" + mono
        else:
            term = f"{qstr(c)} {mono}"
        parts.append(term)
    rhs = " + ".join(parts).replace("+ -", "- ") if parts else "0"
    return f"{lhs} -> {rhs}"
