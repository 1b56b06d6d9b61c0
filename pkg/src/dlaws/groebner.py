"""Buchberger's algorithm, reduced bases and rational zero sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import (
    Coefficient,
    Monomial,
    Polynomial,
    PolyRing,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_key,
    mono_lcm,
    poly_key,
    qdiv,
    qnorm,
)


class NotZeroDimensional(ValueError):
    """The ideal has positive-dimensional solution variety."""


class IrrationalBranch(ValueError):
    """A univariate eliminant does not split into rational linear factors."""

    def __init__(self, polynomial: Polynomial, assignment: Dict[str, Coefficient]):
        self.polynomial = polynomial
        self.assignment = assignment
        where = ", ".join(f"{k}={v}" for k, v in assignment.items()) or "no assignment"
        super().__init__(f"eliminant {polynomial} has irrational roots (under {where})")


class Ideal:
    """Ideal generators, stored monic and deduplicated, in first-seen order."""

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial] = ()):
        self.ring = ring
        seen = set()
        gens = []
        for g in generators:
            g = ring.coerce(g)
            if not g:
                continue
            g = g.monic()
            if g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators: List[Polynomial] = gens

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


@dataclass
class GroebnerBasis:
    ring: PolyRing
    elements: List[Polynomial]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def as_set(self):
        return set(self.elements)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial() for g in self.elements]

    def contains(self, f: Polynomial) -> bool:
        return not normal_form(f, self.elements)

    def rendered(self) -> List[str]:
        return [str(g) for g in self.elements]


@dataclass
class ZeroSet:
    ring: PolyRing
    points: List[Tuple[Coefficient, ...]] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_set(self):
        return set(self.points)


# -- reduction ----------------------------------------------------------------

def _reduce(terms: Dict[Monomial, Coefficient], divisors, full: bool = True):
    """Reduce a term dict by ``divisors`` (list of (lm, lc, poly)); returns remainder dict."""
    p = dict(terms)
    rem: Dict[Monomial, Coefficient] = {}
    while p:
        m = max(p, key=mono_key)
        c = p[m]
        for lm, lc, g in divisors:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                f = qdiv(c, lc)
                for gm, gc in g.terms.items():
                    key = tuple(x + y for x, y in zip(gm, q))
                    v = p.get(key, 0) - f * gc
                    if v:
                        p[key] = qnorm(v)
                    else:
                        p.pop(key, None)
                break
        else:
            rem[m] = c
            del p[m]
            if not full:
                rem.update(p)
                return rem
    return rem


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Fully reduced remainder of ``f``; divisors tried in list order."""
    divisors = [(g.leading_monomial(), g.leading_coefficient(), g) for g in basis if g]
    return Polynomial(f.ring, _reduce(f.terms, divisors))


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), qdiv(1, f.leading_coefficient())) - g.mul_term(
        mono_div(lcm, lg), qdiv(1, g.leading_coefficient())
    )


# -- Buchberger ----------------------------------------------------------------

def _update(G, pairs, h_idx, lms):
    """Gebauer-Moeller installation of basis element ``h_idx``."""
    lh = lms[h_idx]
    C = [(g, mono_lcm(lms[g], lh)) for g in G]
    D = []
    while C:
        g1, l1 = C.pop(0)
        if mono_coprime(lms[g1], lh) or not any(
            mono_divides(l2, l1) for _, l2 in C + D
        ):
            D.append((g1, l1))
    E = [(g, h_idx, l) for g, l in D if not mono_coprime(lms[g], lh)]
    kept = [
        (i, j, l)
        for (i, j, l) in pairs
        if not (
            mono_divides(lh, l)
            and mono_lcm(lms[i], lh) != l
            and mono_lcm(lms[j], lh) != l
        )
    ]
    G = [g for g in G if not mono_divides(lh, lms[g])] + [h_idx]
    return G, kept + E


def buchberger(ideal, ring: Optional[PolyRing] = None) -> GroebnerBasis:
    """Reduced deglex Groebner basis, elements monic, sorted by leading monomial."""
    if not isinstance(ideal, Ideal):
        if ring is None:
            gens = list(ideal)
            if not gens:
                raise ValueError("ring required for an empty generator list")
            ring = gens[0].ring
        ideal = Ideal(ring, ideal)
    ring = ideal.ring
    gens = sorted(ideal.generators, key=lambda g: mono_key(g.leading_monomial()))
    if any(g.is_constant() for g in gens):
        return GroebnerBasis(ring, [ring.one])

    polys: List[Polynomial] = []
    lms: List[Monomial] = []
    G: List[int] = []
    pairs: List[Tuple[int, int, Monomial]] = []

    def install(h: Polynomial):
        nonlocal G, pairs
        h = h.monic()
        polys.append(h)
        lms.append(h.leading_monomial())
        G, pairs = _update(G, pairs, len(polys) - 1, lms)

    # inter-reduce the input cheaply first
    for g in gens:
        divisors = [(lms[i], 1, polys[i]) for i in G]
        h = Polynomial(ring, _reduce(g.terms, divisors))
        if h:
            if h.is_constant():
                return GroebnerBasis(ring, [ring.one])
            install(h)

    while pairs:
        # normal selection strategy: smallest lcm first
        k = min(range(len(pairs)), key=lambda t: mono_key(pairs[t][2]))
        i, j, _ = pairs.pop(k)
        s = s_polynomial(polys[i], polys[j])
        divisors = [(lms[t], 1, polys[t]) for t in G]
        h = Polynomial(ring, _reduce(s.terms, divisors))
        if h:
            if h.is_constant():
                return GroebnerBasis(ring, [ring.one])
            install(h)

    return GroebnerBasis(ring, _reduce_basis([polys[i] for i in G]))


def _reduce_basis(basis: List[Polynomial]) -> List[Polynomial]:
    # minimalise
    basis = sorted(basis, key=lambda g: mono_key(g.leading_monomial()))
    minimal = []
    for g in basis:
        lg = g.leading_monomial()
        if not any(mono_divides(h.leading_monomial(), lg) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = [(h.leading_monomial(), 1, h) for t, h in enumerate(minimal) if t != idx]
        r = Polynomial(g.ring, _reduce(g.terms, others)).monic()
        out.append(r)
    return sorted(out, key=lambda g: mono_key(g.leading_monomial()))


def is_groebner(basis: Sequence[Polynomial]) -> bool:
    """Post-hoc Buchberger criterion: every S-polynomial reduces to zero."""
    basis = [g for g in basis if g]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if mono_coprime(basis[i].leading_monomial(), basis[j].leading_monomial()):
                continue
            if normal_form(s_polynomial(basis[i], basis[j]), basis):
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    lms = gb.leading_monomials()
    for i, g in enumerate(gb.elements):
        if g.leading_coefficient() != 1:
            return False
        for m in g.terms:
            if any(j != i and mono_divides(lms[j], m) for j in range(len(lms))):
                return False
    return True


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    n = gb.ring.nvars
    if any(g.is_constant() for g in gb.elements):
        return False  # unit ideal: empty variety, treated as not zero-dimensional
    pure = set()
    for lm in gb.leading_monomials():
        nz = [i for i, e in enumerate(lm) if e]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == n


# -- rational zero sets ----------------------------------------------------------

def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _poly_eval_univariate(coeffs: List[Coefficient], x) -> Coefficient:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def rational_roots(coeffs: List[Coefficient]) -> Tuple[Dict[Coefficient, int], int]:
    """Rational roots (with multiplicity) of ``sum coeffs[k] x^k``; also returns the degree."""
    coeffs = [qnorm(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 0:
        raise ValueError("zero polynomial has every value as a root")
    roots: Dict[Coefficient, int] = {}
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots[0] = k
    work = coeffs[k:]
    if len(work) > 1:
        den = 1
        for c in work:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in work]
        cands = set()
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                cands.add(qnorm(Fraction(p, q)))
                cands.add(qnorm(Fraction(-p, q)))
        for r in sorted(cands):
            cur = list(work)
            mult = 0
            while len(cur) > 1 and _poly_eval_univariate(cur, r) == 0:
                # synthetic division by (x - r)
                out = [0] * (len(cur) - 1)
                carry = 0
                for i in range(len(cur) - 1, 0, -1):
                    carry = qnorm(carry * r + cur[i])
                    out[i - 1] = carry
                cur = out
                mult += 1
            if mult:
                roots[r] = mult
                work = cur
    return roots, deg


def _univariate_coeffs(p: Polynomial, var: int) -> List[Coefficient]:
    deg = max(m[var] for m in p.terms)
    coeffs = [0] * (deg + 1)
    for m, c in p.terms.items():
        coeffs[m[var]] = qnorm(coeffs[m[var]] + c)
    return coeffs


def _eliminant(gb: GroebnerBasis, var: int) -> Polynomial:
    """Minimal polynomial of ``var`` modulo a zero-dimensional basis (via normal forms)."""
    ring = gb.ring
    x = ring.var(var)
    rows: List[Dict[Monomial, Coefficient]] = []
    power = ring.one
    # echelon of normal forms NF(x^k), tracking combinations
    pivots: List[Tuple[Monomial, Dict[Monomial, Coefficient], Dict[int, Coefficient]]] = []
    k = 0
    while True:
        nf = normal_form(power, gb.elements).terms
        vec = dict(nf)
        combo = {k: 1}
        for pm, prow, pcombo in pivots:
            c = vec.get(pm, 0)
            if c:
                for m, v in prow.items():
                    nv = qnorm(vec.get(m, 0) - c * v)
                    if nv:
                        vec[m] = nv
                    else:
                        vec.pop(m, None)
                for i, v in pcombo.items():
                    nv = qnorm(combo.get(i, 0) - c * v)
                    if nv:
                        combo[i] = nv
                    else:
                        combo.pop(i, None)
        if not vec:
            coeffs = [combo.get(i, 0) for i in range(k + 1)]
            terms = {}
            for i, c in enumerate(coeffs):
                if c:
                    e = [0] * ring.nvars
                    e[var] = i
                    terms[tuple(e)] = c
            return ring.from_terms(terms).monic()
        pm = max(vec, key=mono_key)
        inv = qdiv(1, vec[pm])
        vec = {m: qnorm(v * inv) for m, v in vec.items()}
        combo = {i: qnorm(v * inv) for i, v in combo.items()}
        pivots.append((pm, vec, combo))
        rows.append(vec)
        power = power * x
        k += 1


def zero_set(gb: GroebnerBasis) -> ZeroSet:
    """All rational points of a zero-dimensional ideal, by triangular back-substitution."""
    if not is_zero_dimensional(gb):
        if any(g.is_constant() for g in gb.elements):
            return ZeroSet(gb.ring, [])
        raise NotZeroDimensional("ideal is not zero-dimensional")
    ring = gb.ring
    found = set()

    def assignment_names(assign):
        return {ring.names[i]: v for i, v in sorted(assign.items())}

    def solve(gens: List[Polynomial], assign: Dict[int, Coefficient]):
        spec = []
        for g in gens:
            h = g.partial_evaluate(assign) if assign else g
            if not h:
                continue
            if h.is_constant():
                return
            spec.append(h)
        free = [i for i in range(ring.nvars) if i not in assign]
        if not free:
            found.add(tuple(assign[i] for i in range(ring.nvars)))
            return
        uni = None
        for h in sorted(spec, key=lambda p: (p.degree(), poly_key(p))):
            vs = h.variables()
            if len(vs) == 1:
                uni = (h, vs[0])
                break
        if uni is None:
            sub = buchberger(Ideal(ring, spec))
            if any(g.is_constant() for g in sub.elements):
                return
            # assigned variables are absent from ``sub``; use the first free one
            var = free[0]
            elim = _eliminant(_with_assignment(sub, assign), var)
            uni = (elim, var)
        h, var = uni
        roots, deg = rational_roots(_univariate_coeffs(h, var))
        if sum(roots.values()) != deg:
            raise IrrationalBranch(h, assignment_names(assign))
        for r in sorted(roots):
            nxt = dict(assign)
            nxt[var] = r
            solve(spec, nxt)

    solve(list(gb.elements), {})
    points = sorted(found)
    return ZeroSet(ring, points)


def _with_assignment(gb: GroebnerBasis, assign: Dict[int, Coefficient]) -> GroebnerBasis:
    ring = gb.ring
    extra = [ring.var(i) - ring.const(v) for i, v in assign.items()]
    return buchberger(Ideal(ring, list(gb.elements) + extra))
