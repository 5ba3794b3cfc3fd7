"""Two-phase dense simplex over exact rationals with Bland's pivot rule.

All variables are nonnegative.  Problems here are desk sized (a few dozen
rows and columns), so the tableau is a list of ``Fraction`` rows and row
operations skip zero entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "linprog_exact", "feasible_point"]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        inv = 1 / p
        T[r] = row = [v * inv if v else v for v in row]
    nz = [k for k, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f:
            for k in nz:
                other[k] -= f * row[k]


def _simplex(T: list[list[Fraction]], basis: list[int], allowed: int) -> str:
    """Minimize the objective stored in the last row of ``T``.

    The objective row holds reduced costs with ``-z`` in the last column.
    Only columns below ``allowed`` may enter the basis.
    """
    m = len(T) - 1
    obj = T[-1]
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        leave = best[1]
        _pivot(T, leave, enter)
        basis[leave] = enter
        obj = T[-1]


def linprog_exact(c: Sequence, A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                  A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                  maximize: bool = False) -> LPResult:
    """Optimize ``c.x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub``, ``x >= 0``."""
    nvar = len(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(A_ub)
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        if len(a) != nvar:
            raise ValueError("constraint width does not match the objective")
        slack = [Fraction(0)] * nslack
        slack[k] = Fraction(1)
        rows.append([Fraction(v) for v in a] + slack)
        rhs.append(Fraction(b))
    for a, b in zip(A_eq, b_eq):
        if len(a) != nvar:
            raise ValueError("constraint width does not match the objective")
        rows.append([Fraction(v) for v in a] + [Fraction(0)] * nslack)
        rhs.append(Fraction(b))
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    ncol = nvar + nslack
    for i, b in enumerate(rhs):
        if b < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -b
    m = len(rows)

    # phase 1: an inequality row with nonnegative right-hand side starts with
    # its slack in the basis; every other row gets an artificial variable
    need = [i for i in range(m) if not (i < nslack and rows[i][nvar + i] == 1)]
    nart = len(need)
    art = {i: k for k, i in enumerate(need)}
    T = [rows[i] + [Fraction(int(art.get(i) == k)) for k in range(nart)] + [rhs[i]]
         for i in range(m)]
    basis = [ncol + art[i] if i in art else nvar + i for i in range(m)]
    obj = [Fraction(0)] * (ncol + nart + 1)
    for i in need:
        for k in range(ncol):
            obj[k] -= T[i][k]
        obj[-1] -= T[i][-1]
    T.append(obj)
    _simplex(T, basis, ncol + nart)
    if T[-1][-1] != 0:
        return LPResult("infeasible")

    # drive artificial variables out of the basis; drop redundant rows
    i = 0
    while i < len(T) - 1:
        if basis[i] >= ncol:
            col = next((k for k in range(ncol) if T[i][k] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    T = [r[:ncol] + [r[-1]] for r in T[:-1]]

    # phase 2
    sign = -1 if maximize else 1
    cost = [Fraction(v) * sign for v in c] + [Fraction(0)] * nslack
    obj = cost + [Fraction(0)]
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            obj = [o - f * t for o, t in zip(obj, T[i])]
    T.append(obj)
    status = _simplex(T, basis, ncol)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * ncol
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    value = sum((Fraction(cv) * xv for cv, xv in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x[:nvar]), value)


def feasible_point(A_ub: Sequence[Sequence], b_ub: Sequence,
                   A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> tuple[Fraction, ...] | None:
    """A point of ``{y free : A_ub y <= b_ub, A_eq y = b_eq}`` or ``None``.

    Free variables are split into differences of nonnegative ones.
    """
    width = len(A_ub[0]) if A_ub else len(A_eq[0])

    def split(rows):
        return [list(r) + [-v for v in r] for r in rows]

    res = linprog_exact([0] * (2 * width), split(A_eq), b_eq, split(A_ub), b_ub)
    if not res.ok:
        return None
    return tuple(res.x[k] - res.x[width + k] for k in range(width))
