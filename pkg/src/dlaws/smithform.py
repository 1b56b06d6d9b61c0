"""Partial Smith form over Q[X] and exact rank over Q.

Pivots are nonzero scalar entries.  Because the pivot is a unit, clearing its
column with row operations and then deleting the pivot row and column is the
same as the full row-and-column reduction to ``diag(1, L)``: the column
operations would only clear the pivot row, which is discarded.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .groebner import Ideal
from .polyring import Coefficient, PolyRing, Polynomial, qdiv
from .relations import RelationMatrix


def _scalar(c) -> Optional[Coefficient]:
    """The value of a nonzero scalar entry, or None."""
    if isinstance(c, Polynomial):
        if c.is_constant():
            v = c.constant_value()
            return v if v else None
        return None
    return c if c else None


@dataclass
class PartialSmith:
    scalar_rank: int
    residual: RelationMatrix
    row_ids: List[int]
    col_ids: List[int]
    pivots: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def residual_shape(self) -> Tuple[int, int]:
        return len(self.row_ids), len(self.col_ids)


def partial_smith(m: RelationMatrix, pivot: str = "rowmajor") -> PartialSmith:
    """Reduce ``m`` to ``diag(I_r, L)`` with ``L`` free of nonzero scalars.

    ``pivot="rowmajor"`` takes the first scalar entry in a row-major scan;
    ``pivot="markowitz"`` takes the scalar entry minimising fill-in.  Either
    gives the same ``r`` and an equivalent ``L``.
    """
    rows: Dict[int, Dict[int, object]] = {i: dict(r) for i, r in enumerate(m.rows)}
    cols: Dict[int, set] = {j: set() for j in range(m.ncols)}
    for i, r in rows.items():
        for j in r:
            cols[j].add(i)
    # rows holding at least one scalar entry
    scalar_rows = {i for i, r in rows.items() if any(_scalar(c) is not None for c in r.values())}
    pivots: List[Tuple[int, int]] = []

    def choose():
        if pivot == "rowmajor":
            i = min(scalar_rows)
            j = min(j for j, c in rows[i].items() if _scalar(c) is not None)
            return i, j
        best = None
        for i in scalar_rows:
            r = rows[i]
            ri = len(r) - 1
            for j, c in r.items():
                if _scalar(c) is None:
                    continue
                cost = ri * (len(cols[j]) - 1)
                key = (cost, i, j)
                if best is None or key < best:
                    best = key
                    if cost == 0:
                        return i, j
        return best[1], best[2]

    while scalar_rows:
        i, j = choose()
        prow = rows.pop(i)
        scalar_rows.discard(i)
        inv = qdiv(1, _scalar(prow[j]))
        for jj in prow:
            cols[jj].discard(i)
        targets = list(cols[j])
        for k in targets:
            r = rows[k]
            f = r[j] * inv
            for jj, c in prow.items():
                if jj == j:
                    continue
                new = r.get(jj, 0) - f * c if jj in r else -(f * c)
                if new:
                    if jj not in r:
                        cols[jj].add(k)
                    r[jj] = new
                elif jj in r:
                    del r[jj]
                    cols[jj].discard(k)
            del r[j]
            if any(_scalar(c) is not None for c in r.values()):
                scalar_rows.add(k)
            else:
                scalar_rows.discard(k)
        del cols[j]
        pivots.append((i, j))

    row_ids = sorted(rows)
    col_ids = sorted(cols)
    cidx = {j: n for n, j in enumerate(col_ids)}
    res_rows = [{cidx[j]: c for j, c in rows[i].items()} for i in row_ids]
    residual = RelationMatrix(res_rows, len(col_ids), m.ring, None)
    return PartialSmith(len(pivots), residual, row_ids, col_ids, pivots)


def prune_zero_lines(l: RelationMatrix) -> RelationMatrix:
    """Delete identically zero rows and columns."""
    used = sorted({j for r in l.rows for j in r})
    cidx = {j: n for n, j in enumerate(used)}
    rows = [{cidx[j]: c for j, c in r.items()} for r in l.rows if r]
    return RelationMatrix(rows, len(used), l.ring, None)


def residual_ideal(l: RelationMatrix, ring: Optional[PolyRing] = None) -> Ideal:
    """The ideal generated by the distinct nonzero entries, stored monic."""
    ring = ring or l.ring
    entries = [c for c in l.entries() if c]
    return Ideal(ring, [ring.coerce(c) for c in entries])


def distinct_entries(l: RelationMatrix) -> List[Polynomial]:
    seen = {}
    for c in l.entries():
        if c:
            seen.setdefault(c, None)
    return list(seen)


def _primitive(v: Dict[int, Coefficient]) -> Dict[int, int]:
    """Scale a rational row to coprime integers."""
    den = 1
    for c in v.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    ints = {j: int(c * den) for j, c in v.items()}
    g = 0
    for c in ints.values():
        g = math.gcd(g, c)
        if g == 1:
            return ints
    return {j: c // g for j, c in ints.items()}


def exact_rank(m) -> int:
    """Rank over Q of a scalar matrix (``RelationMatrix`` or sequence of sparse rows).

    Fraction-free sparse elimination on primitive integer rows.  The pivot row
    is a shortest remaining row and the pivot column the least populated
    column within it.
    """
    rows_in = m.rows if isinstance(m, RelationMatrix) else m
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for i, r in enumerate(rows_in):
        v = {j: (c.constant_value() if isinstance(c, Polynomial) else c) for j, c in r.items()}
        v = {j: c for j, c in v.items() if c}
        if v:
            rows[i] = _primitive(v)
            for j in v:
                cols.setdefault(j, set()).add(i)
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        n, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != n:
            continue
        j = min(r, key=lambda c: (len(cols[c]), c))
        del rows[i]
        for jj in r:
            cols[jj].discard(i)
        p = r[j]
        for k in list(cols[j]):
            t = rows[k]
            a = t[j]
            g = math.gcd(a, p)
            fp, fa = p // g, a // g
            if fp != 1:
                if fp == -1:
                    t = {jj: -c for jj, c in t.items()}
                else:
                    t = {jj: c * fp for jj, c in t.items()}
            for jj, c in r.items():
                new = t.get(jj, 0) - fa * c
                if new:
                    if jj not in t:
                        cols[jj].add(k)
                    t[jj] = new
                else:
                    t.pop(jj, None)
                    cols[jj].discard(k)
            if t:
                t = _primitive(t)
                rows[k] = t
                heapq.heappush(heap, (len(t), k))
            else:
                del rows[k]
        rank += 1
    return rank
