"""Exact rational linear programming (two-phase dense simplex, Bland's rule).

Every number handled here is an exact rational.  ``gmpy2.mpq`` is used when
available because it is an order of magnitude faster than
:class:`fractions.Fraction`; results are always handed back as ``Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

try:  # pragma: no cover - depends on environment
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

__all__ = ["LPResult", "maximize", "OPTIMAL", "INFEASIBLE", "UNBOUNDED"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = _Q(0)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _to_frac(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Row-major tableau: ``rows[i]`` holds coefficients followed by the rhs."""

    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r, c, obj_rows):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            for k, v in enumerate(row):
                if v:
                    row[k] = v * inv
        nz = [k for k, v in enumerate(row) if v]
        for other in list(self.rows[:r]) + list(self.rows[r + 1:]) + obj_rows:
            f = other[c]
            if f:
                for k in nz:
                    other[k] -= f * row[k]
        self.basis[r] = c

    def run(self, obj, allowed):
        """Maximise; ``obj`` holds reduced costs negated (standard z-row).

        Returns False when unbounded.
        """
        while True:
            enter = -1
            for j in allowed:
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return True
            leave = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        best = ratio
                        leave = i
            if leave < 0:
                return False
            self.pivot(leave, enter, [obj])


def maximize(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             a_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
             nonneg: Sequence[int] = ()) -> LPResult:
    """Maximise ``c.x`` subject to ``a_ub x <= b_ub`` and ``a_eq x = b_eq``.

    Variables are free unless their index is listed in ``nonneg``.
    """
    n = len(c)
    nonneg = set(nonneg)
    # column layout: for each original var j, one column (nonneg) or two (free)
    cols = []
    for j in range(n):
        cols.append((j, 1))
        if j not in nonneg:
            cols.append((j, -1))
    nstruct = len(cols)
    nslack = len(a_ub)
    m = len(a_ub) + len(a_eq)
    nart = m
    ncols = nstruct + nslack + nart

    rows = []
    for i, (arow, b) in enumerate(list(zip(a_ub, b_ub)) + list(zip(a_eq, b_eq))):
        row = [_ZERO] * (ncols + 1)
        for k, (j, s) in enumerate(cols):
            v = arow[j]
            if v:
                row[k] = _Q(v) * s
        if i < nslack:
            row[nstruct + i] = _Q(1)
        rhs = _Q(b)
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        row[nstruct + nslack + i] = _Q(1)
        row[-1] = rhs
        rows.append(row)

    basis = [nstruct + nslack + i for i in range(m)]
    tab = _Tableau(rows, basis, ncols)

    # phase 1: maximise -sum(artificials)
    obj1 = [_ZERO] * (ncols + 1)
    for row in rows:
        for k in range(nstruct + nslack):
            if row[k]:
                obj1[k] -= row[k]
        obj1[-1] -= row[-1]
    tab.run(obj1, range(nstruct + nslack))
    if obj1[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis
    art0 = nstruct + nslack
    keep = []
    for i in range(m):
        if tab.basis[i] >= art0:
            row = tab.rows[i]
            piv = next((k for k in range(art0) if row[k]), -1)
            if piv < 0:
                continue  # redundant row
            tab.pivot(i, piv, [])
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    for row in tab.rows:
        for k in range(art0, ncols):
            row[k] = _ZERO

    # phase 2
    obj = [_ZERO] * (ncols + 1)
    for k, (j, s) in enumerate(cols):
        if c[j]:
            obj[k] = -_Q(c[j]) * s
    for i, b in enumerate(tab.basis):
        f = obj[b]
        if f:
            row = tab.rows[i]
            for k, v in enumerate(row):
                if v:
                    obj[k] -= f * v
    if not tab.run(obj, range(art0)):
        return LPResult(UNBOUNDED)

    vals = [_ZERO] * ncols
    for i, b in enumerate(tab.basis):
        vals[b] = tab.rows[i][-1]
    x = [_ZERO] * n
    for k, (j, s) in enumerate(cols):
        if vals[k]:
            x[j] += vals[k] * s
    return LPResult(OPTIMAL, _to_frac(obj[-1]), tuple(_to_frac(v) for v in x))
