"""Sparse multivariate polynomials over the rationals.

Monomials are dense exponent tuples.  Coefficients are ``int`` whenever they
are integral and ``fractions.Fraction`` otherwise, which keeps the common
``0, +1, -1`` arithmetic on the fast integer path.

The monomial order is degree-lexicographic with the *last* declared variable
most significant, so that with variables declared ``a, b, c, d`` one has
``a < b < c < d``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]


def qnorm(value) -> Coefficient:
    """Return ``value`` as an exact rational, demoted to ``int`` when integral."""
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, _RationalABC):
        return qnorm(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return qnorm(Fraction(value.strip()))
    raise TypeError(f"not an exact rational: {value!r}")


def qdiv(a: Coefficient, b: Coefficient) -> Coefficient:
    if b == 0:
        raise ZeroDivisionError("division by zero rational")
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return qnorm(Fraction(a) / b)


def qstr(q: Coefficient) -> str:
    """Render a rational as ``"p"`` or ``"p/q"``."""
    q = qnorm(q)
    if isinstance(q, int):
        return str(q)
    return f"{q.numerator}/{q.denominator}"


# -- monomials ---------------------------------------------------------------

def mono_key(m: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key realising the deglex order (last variable most significant)."""
    return (sum(m), m[::-1])


def mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Three-way deglex comparison: -1, 0 or 1."""
    if len(m1) != len(m2):
        raise ValueError("monomials live in rings with different variable counts")
    k1, k2 = mono_key(m1), mono_key(m2)
    return (k1 > k2) - (k1 < k2)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(m1, m2))


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    """True if ``m1`` divides ``m2``."""
    return all(x <= y for x, y in zip(m1, m2))


def mono_div(m1: Monomial, m2: Monomial) -> Monomial:
    """``m1 / m2``; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(m1, m2))


def mono_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(m1, m2))


def mono_coprime(m1: Monomial, m2: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(m1, m2))


# -- rings and polynomials ----------------------------------------------------

class PolyRing:
    """The ring Q[v_1, ..., v_n] with a fixed tuple of variable names."""

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.nvars = len(names)
        self._index = {name: i for i, name in enumerate(names)}
        self._unit = (0,) * self.nvars

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {self._unit: 1})

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def const(self, value) -> "Polynomial":
        value = qnorm(value)
        return Polynomial(self, {self._unit: value} if value else {})

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def from_terms(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        out = {}
        for m, c in terms.items():
            if len(m) != self.nvars:
                raise ValueError("monomial length does not match the ring")
            c = qnorm(c)
            if c:
                out[tuple(m)] = c
        return Polynomial(self, out)

    def monomials(self, degree: int):
        """All monomials of exactly ``degree``, in increasing deglex order."""
        out = []

        def rec(i, left, acc):
            if i == self.nvars - 1:
                out.append(tuple(acc + [left]))
                return
            for e in range(left, -1, -1):
                rec(i + 1, left - e, acc + [e])

        if self.nvars == 0:
            return [()] if degree == 0 else []
        rec(0, degree, [])
        return sorted(out, key=mono_key)

    def parse(self, text: str) -> "Polynomial":
        """Parse expressions like ``"a1*(a2 + 1) - 1/2*b^2"`` (``**`` also accepted)."""
        return _Parser(self, text).parse()

    def coerce(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise ValueError("polynomial belongs to a different ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)


class Polynomial:
    """An immutable element of a :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, Coefficient]):
        # ``terms`` must already be normalised (no zero coefficients)
        self.ring = ring
        self.terms = terms
        self._lm = None

    # -- inspection
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._unit in self.terms)

    def constant_value(self) -> Coefficient:
        """Value of a constant polynomial (raises if not constant)."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(self.ring._unit, 0)

    def constant_term(self) -> Coefficient:
        return self.terms.get(self.ring._unit, 0)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=mono_key)
        return self._lm

    def leading_coefficient(self) -> Coefficient:
        return self.terms[self.leading_monomial()]

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(sorted(used))

    def sorted_terms(self):
        """Terms in decreasing monomial order."""
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    # -- arithmetic
    def _other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._other(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = qnorm(v)
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._other(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        out: Dict[Monomial, Coefficient] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, {m: qnorm(c) for m, c in out.items()})

    __rmul__ = __mul__

    def scale(self, q) -> "Polynomial":
        q = qnorm(q)
        if not q:
            return self.ring.zero
        return Polynomial(self.ring, {m: qnorm(c * q) for m, c in self.terms.items()})

    def mul_term(self, mono: Monomial, coeff) -> "Polynomial":
        """Multiply by the single term ``coeff * mono``."""
        coeff = qnorm(coeff)
        if not coeff:
            return self.ring.zero
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(m, mono)): qnorm(c * coeff) for m, c in self.terms.items()},
        )

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return Polynomial(self.ring, {m: qdiv(c, lc) for m, c in self.terms.items()})

    # -- evaluation / substitution
    def evaluate(self, point: Sequence) -> Coefficient:
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong length")
        point = [qnorm(p) for p in point]
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * x ** e
            total += t
        return qnorm(total)

    def partial_evaluate(self, assignment: Mapping[int, Coefficient]) -> "Polynomial":
        """Substitute values for the variables whose indices appear in ``assignment``."""
        out: Dict[Monomial, Coefficient] = {}
        for m, c in self.terms.items():
            new = list(m)
            v = c
            for i, val in assignment.items():
                e = m[i]
                if e:
                    v = v * val ** e
                    new[i] = 0
            if v:
                key = tuple(new)
                s = out.get(key, 0) + v
                if s:
                    out[key] = s
                else:
                    del out[key]
        return Polynomial(self.ring, {m: qnorm(c) for m, c in out.items()})

    # -- rendering
    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = qstr(a)
            elif a == 1:
                body = mono
            else:
                body = f"{qstr(a)}*{mono}"
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({self})"


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def evaluate(f: Polynomial, point: Sequence) -> Coefficient:
    return f.evaluate(point)


# -- a small expression parser --------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse polynomial {self.text!r} at offset {pos}")
            self.tokens.append(m.group(1) or m.group(2) or m.group(3))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"cannot parse polynomial {self.text!r}: expected {expected or 'token'}")
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ValueError("empty polynomial expression")
        p = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input in polynomial {self.text!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        acc = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                acc = acc * self.power()
            elif tok == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or not d:
                    raise ValueError("division only by nonzero constants")
                acc = acc.scale(qdiv(1, d.constant_value()))
            elif tok is not None and (tok == "(" or tok[0].isalnum() or tok[0] == "_"):
                acc = acc * self.power()  # implicit multiplication
            else:
                return acc

    def power(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            exp = self.take()
            if not exp.isdigit():
                raise ValueError("exponents must be nonnegative integers")
            return base ** int(exp)
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            p = self.expr()
            self.take(")")
            return p
        if tok[0].isdigit():
            return self.ring.const(Fraction(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return self.ring.var(tok)
        raise ValueError(f"unexpected token {tok!r} in {self.text!r}")


def poly_key(p: Polynomial):
    """Deterministic total order on polynomials (used for sorting result lists)."""
    return tuple((mono_key(m), str(c)) for m, c in p.sorted_terms())


def rationals(values: Iterable) -> Tuple[Coefficient, ...]:
    return tuple(qnorm(v) for v in values)
