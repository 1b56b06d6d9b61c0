"""Tree monomials of the free operad on two binary generators.

A tree monomial is either a leaf (an ``int`` naming an argument, ``0..n-1``)
or a tuple ``(op, left, right)`` with ``op`` in ``{0, 1}``.  Generators may
be declared commutative or anticommutative; the canonical representative of
a monomial orders the children of every symmetric vertex, and anticommutative
swaps contribute a sign.

Multilinear monomials of a fixed arity are collected in a :class:`BasisTable`
whose ordering is "association type first, then leaf word in lexicographic
order".  The order of association types is supplied by the caller (the
:mod:`relations` layer knows the case-specific conventions); without one, a
recursive default is used.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

NONE = "none"
COMMUTATIVE = "commutative"
ANTICOMMUTATIVE = "anticommutative"
SYMMETRIES = (NONE, COMMUTATIVE, ANTICOMMUTATIVE)

Tree = Union[int, tuple]
LEAF = None  # erased leaf in an association type (shape)


@dataclass(frozen=True)
class GeneratorSpec:
    """A binary generator: display symbol, symmetry and rendering style.

    ``style`` is one of ``"juxt"`` (``xy``), ``"dot"`` (``x·y``) or
    ``"bracket"`` (``[x,y]``).
    """

    name: str
    symmetry: str = NONE
    style: str = "juxt"

    def __post_init__(self):
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        if self.style not in ("juxt", "dot", "bracket"):
            raise ValueError(f"unknown style {self.style!r}")


@dataclass(frozen=True)
class SignedIndex:
    sign: int
    index: int

    def __iter__(self):
        yield self.sign
        yield self.index


# -- basic tree utilities ---------------------------------------------------------

def is_leaf(t) -> bool:
    return not isinstance(t, tuple)


def arity(t) -> int:
    if is_leaf(t):
        return 1
    return arity(t[1]) + arity(t[2])


def leaves(t) -> Tuple:
    if is_leaf(t):
        return (t,)
    return leaves(t[1]) + leaves(t[2])


def shape(t):
    """Erase the leaf labels of ``t``."""
    if is_leaf(t):
        return LEAF
    return (t[0], shape(t[1]), shape(t[2]))


def ops_used(t) -> Tuple[int, ...]:
    if is_leaf(t):
        return ()
    return (t[0],) + ops_used(t[1]) + ops_used(t[2])


def relabel(t, mapping: Union[Sequence[int], Mapping[int, int]]) -> Tree:
    if is_leaf(t):
        return mapping[t]
    return (t[0], relabel(t[1], mapping), relabel(t[2], mapping))


def fill(s, labels: Iterable[int]) -> Tree:
    """Place ``labels`` (left to right) on the erased leaves of shape ``s``."""
    it = iter(labels)

    def rec(x):
        if x is LEAF:
            return next(it)
        return (x[0], rec(x[1]), rec(x[2]))

    return rec(s)


def substitute(t, slot: int, sub) -> Tree:
    """Graft ``sub`` into leaf ``slot`` of ``t``; leaves are renumbered left to right."""
    k = arity(sub)

    def rec(x):
        if is_leaf(x):
            if x == slot:
                return _shift(sub, slot)
            return x if x < slot else x + k - 1
        return (x[0], rec(x[1]), rec(x[2]))

    return rec(t)


def _shift(t, offset: int):
    if is_leaf(t):
        return t + offset
    return (t[0], _shift(t[1], offset), _shift(t[2], offset))


def shape_key(s):
    """Total order on shapes used to break ties at symmetric vertices."""
    if s is LEAF:
        return (0,)
    return (1, s[0], shape_key(s[1]), shape_key(s[2]))


def _child_key(t):
    return (-arity(t), shape_key(shape(t)), leaves(t))


def canonical(t, gens: Sequence[GeneratorSpec]) -> Tuple[int, Tree]:
    """Return ``(sign, canonical tree)`` for ``t`` under the generators' symmetries."""
    if is_leaf(t):
        return 1, t
    op, left, right = t
    s1, left = canonical(left, gens)
    s2, right = canonical(right, gens)
    sign = s1 * s2
    sym = gens[op].symmetry
    if sym != NONE and _child_key(right) < _child_key(left):
        left, right = right, left
        if sym == ANTICOMMUTATIVE:
            sign = -sign
    return sign, (op, left, right)


def canonical_shape(s, gens: Sequence[GeneratorSpec]):
    if s is LEAF:
        return LEAF
    op, left, right = s
    left = canonical_shape(left, gens)
    right = canonical_shape(right, gens)
    if gens[op].symmetry != NONE:
        kl = (-_shape_arity(left), shape_key(left))
        kr = (-_shape_arity(right), shape_key(right))
        if kr < kl:
            left, right = right, left
    return (op, left, right)


def _shape_arity(s) -> int:
    if s is LEAF:
        return 1
    return _shape_arity(s[1]) + _shape_arity(s[2])


def all_planar_shapes(n: int, nops: int = 2) -> List:
    if n == 1:
        return [LEAF]
    out = []
    for k in range(1, n):
        for left in all_planar_shapes(k, nops):
            for right in all_planar_shapes(n - k, nops):
                for op in range(nops):
                    out.append((op, left, right))
    return out


def association_types(gens: Sequence[GeneratorSpec], n: int, symmetric: bool = True) -> List:
    """Distinct association types of arity ``n`` modulo the generators' symmetries.

    Returned in the recursive default order.  Works for any ``n >= 1`` (it only
    builds shapes, never labelled monomials).
    """
    if n < 1:
        raise ValueError("arity must be positive")
    by_arity: Dict[int, List] = {1: [LEAF]}
    for m in range(2, n + 1):
        seen = {}
        for k in range(1, m):
            for left in by_arity[k]:
                for right in by_arity[m - k]:
                    for op in range(len(gens)):
                        c = canonical_shape((op, left, right), gens)
                        seen.setdefault(c, None)
        by_arity[m] = list(seen)
    types = by_arity[n]
    return sorted(types, key=default_type_key)


def default_type_key(s, explicit: Optional[Mapping[int, Mapping]] = None):
    """Recursive type order: root op, larger left part first, then subtrees.

    ``explicit`` maps an arity to a ``{shape: rank}`` table that overrides the
    recursion at that arity.
    """
    if s is LEAF:
        return ()
    n = _shape_arity(s)
    if explicit and n in explicit and s in explicit[n]:
        return (explicit[n][s],)
    op, left, right = s
    return (op, -_shape_arity(left), default_type_key(left, explicit), default_type_key(right, explicit))


# -- basis tables -------------------------------------------------------------------

@dataclass
class BasisTable:
    gens: Tuple[GeneratorSpec, ...]
    arity: int
    symmetric: bool
    monomials: List[Tree]
    lookup: Dict[Tree, int] = field(repr=False)
    alphabet: str = "abcd"

    def __len__(self):
        return len(self.monomials)

    def __getitem__(self, i):
        return self.monomials[i]

    def index_of(self, t) -> SignedIndex:
        """Canonicalize ``t`` and return its signed basis index."""
        if arity(t) != self.arity:
            raise ValueError(f"monomial has arity {arity(t)}, table has {self.arity}")
        if not self.symmetric and leaves(t) != tuple(range(self.arity)):
            raise ValueError("nonsymmetric tables only hold monomials with leaves in order")
        sign, c = canonical(t, self.gens)
        return SignedIndex(sign, self.lookup[c])

    def render(self, i: int) -> str:
        return render(self.monomials[i], self.gens, self.alphabet)

    def names(self) -> List[str]:
        return [self.render(i) for i in range(len(self))]

    def type_of(self, i: int):
        return shape(self.monomials[i])


def enumerate_basis(
    gens: Sequence[GeneratorSpec],
    n: int,
    symmetric: bool = True,
    type_order: Optional[Callable] = None,
    alphabet: Optional[str] = None,
) -> BasisTable:
    """All multilinear monomials of arity ``n``: type-major, then leaf word.

    ``type_order`` maps a canonical shape to a sort key (default: recursive).
    """
    gens = tuple(gens)
    if n < 1:
        raise ValueError("arity must be positive")
    if not symmetric and any(g.symmetry != NONE for g in gens):
        raise ValueError("nonsymmetric operads need generators without symmetry")
    key = type_order or default_type_key
    found = {}
    words = list(itertools.permutations(range(n))) if symmetric else [tuple(range(n))]
    for s in all_planar_shapes(n, len(gens)):
        for w in words:
            sign, c = canonical(fill(s, w), gens)
            found.setdefault(c, None)
    monos = sorted(found, key=lambda t: (key(shape(t)), leaves(t)))
    if alphabet is None:
        alphabet = "abcd" if n <= 4 else "abcdefghij"
    return BasisTable(gens, n, symmetric, monos, {t: i for i, t in enumerate(monos)}, alphabet)


def canonicalize(t, table: BasisTable) -> SignedIndex:
    return table.index_of(t)


def act(perm: Sequence[int], idx: int, table: BasisTable) -> SignedIndex:
    """Relabel leaves ``i -> perm[i]`` of basis monomial ``idx`` and canonicalize."""
    if len(perm) != table.arity or sorted(perm) != list(range(table.arity)):
        raise ValueError("permutation degree must equal the arity")
    return table.index_of(relabel(table.monomials[idx], perm))


def act_vector(perm: Sequence[int], vec: Mapping[int, object], table: BasisTable) -> Dict[int, object]:
    """Apply a permutation to a sparse coefficient vector over ``table``."""
    out: Dict[int, object] = {}
    for i, c in vec.items():
        sign, j = act(perm, i, table)
        _accumulate(out, j, c if sign > 0 else -c)
    return out


def _accumulate(vec: Dict[int, object], j: int, c) -> None:
    if j in vec:
        v = vec[j] + c
        if v:
            vec[j] = v
        else:
            del vec[j]
    elif c:
        vec[j] = c


def compose_perm(sigma: Sequence[int], tau: Sequence[int]) -> Tuple[int, ...]:
    """``(sigma tau)(i) = sigma(tau(i))``."""
    return tuple(sigma[tau[i]] for i in range(len(tau)))


def permutations(n: int) -> List[Tuple[int, ...]]:
    """All permutations of ``range(n)`` in lexicographic order of the word."""
    return list(itertools.permutations(range(n)))


def graft_consequences(
    rel: Mapping[int, object], t3: BasisTable, t4: BasisTable
) -> List[Dict[int, object]]:
    """The ten arity-4 consequences of an arity-3 relation.

    Order: ``rho(x0 x1, x2, x3)`` for each op, then the product in slot 2, then
    slot 3, then ``rho(...) op x3`` for each op, then ``x0 op rho(...)``.
    """
    nops = len(t3.gens)
    subs = []
    for slot in range(3):
        for op in range(nops):
            subs.append(("in", slot, op))
    for op in range(nops):
        subs.append(("left", None, op))
    for op in range(nops):
        subs.append(("right", None, op))
    out = []
    for kind, slot, op in subs:
        vec: Dict[int, object] = {}
        for i, c in rel.items():
            m = t3.monomials[i]
            if kind == "in":
                t = substitute(m, slot, (op, 0, 1))
            elif kind == "left":
                t = (op, m, 3)
            else:
                t = (op, 0, _shift(m, 1))
            sign, j = t4.index_of(t)
            _accumulate(vec, j, c if sign > 0 else -c)
        out.append(vec)
    return out


# -- rendering and parsing ---------------------------------------------------------

def render(t, gens: Sequence[GeneratorSpec], alphabet: str = "abcd") -> str:
    """Display notation: ``(ab)c``, ``(a·b)·c``, ``[a,b]·c``, ``[a·b,c]``."""

    def atom(x):
        if is_leaf(x):
            return alphabet[x] if x is not None else "*"
        if gens[x[0]].style == "bracket":
            return full(x)
        return "(" + full(x) + ")"

    def full(x):
        if is_leaf(x):
            return atom(x)
        g = gens[x[0]]
        if g.style == "bracket":
            return "[" + full(x[1]) + "," + full(x[2]) + "]"
        sep = "" if g.style == "juxt" else "·"
        return atom(x[1]) + sep + atom(x[2])

    return full(t)


def render_shape(s, gens: Sequence[GeneratorSpec]) -> str:
    return render(s, gens, alphabet="")


_MONO_TOKEN = re.compile(r"\s*([A-Za-z]|\*|∗|[()\[\],]|·|\.)")


def parse_monomial(text: str, gens: Sequence[GeneratorSpec]) -> Tree:
    """Parse display notation into a planar tree.

    Letters are mapped to ``0..n-1`` in alphabetical order; ``*`` placeholders
    are numbered left to right.  Juxtaposition binds tighter than ``·``.
    """
    styles = {g.style: i for i, g in enumerate(gens)}
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _MONO_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse monomial {text!r} at offset {pos}")
        toks.append(m.group(1))
        pos = m.end()
    i = 0
    stars = itertools.count()

    def peek():
        return toks[i] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"cannot parse monomial {text!r}: expected {expected!r}")
        i += 1
        return tok

    def dot_expr():
        acc = juxt_expr()
        while peek() in ("·", "."):
            take()
            if "dot" not in styles:
                raise ValueError("no dot-style generator in this case")
            acc = (styles["dot"], acc, juxt_expr())
        return acc

    def juxt_expr():
        acc = atom()
        while peek() is not None and peek() not in ("·", ".", ")", "]", ","):
            if "juxt" not in styles:
                raise ValueError("no juxtaposition generator in this case")
            acc = (styles["juxt"], acc, atom())
        return acc

    def atom():
        tok = take()
        if tok == "(":
            t = dot_expr()
            take(")")
            return t
        if tok == "[":
            if "bracket" not in styles:
                raise ValueError("no bracket generator in this case")
            left = dot_expr()
            take(",")
            right = dot_expr()
            take("]")
            return (styles["bracket"], left, right)
        if tok in ("*", "∗"):
            return ("*", next(stars))
        if tok.isalpha():
            return ("sym", tok)
        raise ValueError(f"unexpected {tok!r} in monomial {text!r}")

    tree = dot_expr()
    if peek() is not None:
        raise ValueError(f"trailing input in monomial {text!r}")

    letters = sorted({x[1] for x in _raw_leaves(tree) if x[0] == "sym"})
    index = {c: k for k, c in enumerate(letters)}

    def finish(x):
        if isinstance(x, tuple) and x and x[0] in ("sym", "*"):
            return index[x[1]] if x[0] == "sym" else x[1]
        return (x[0], finish(x[1]), finish(x[2]))

    return finish(tree)


def _raw_leaves(x):
    if isinstance(x, tuple) and x and x[0] in ("sym", "*"):
        return [x]
    return _raw_leaves(x[1]) + _raw_leaves(x[2])


def parse_shape(text: str):
    """Parse prefix type notation such as ``"1(0(*,*),*)"``."""
    text = text.replace(" ", "")
    pos = 0

    def rec():
        nonlocal pos
        if text[pos] == "*":
            pos += 1
            return LEAF
        op = int(text[pos])
        pos += 1
        assert text[pos] == "("
        pos += 1
        left = rec()
        assert text[pos] == ","
        pos += 1
        right = rec()
        assert text[pos] == ")"
        pos += 1
        return (op, left, right)

    s = rec()
    if pos != len(text):
        raise ValueError(f"trailing input in shape {text!r}")
    return s
