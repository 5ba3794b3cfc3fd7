"""Cones of optimality, adjacency of tours and exact implication checks.

Every positive answer comes with something that can be checked by plain
evaluation: an integer witness matrix, nonnegative rational weights, or an
integer countermodel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .core import (AffineForm, CostMatrix, Tour, cost_ge, enumerate_tours,
                   eval_form, iter_offdiagonal, tour_length)
from .lp import feasible_point, linprog_exact
from .septree import ComparisonEvent, oriented_form

__all__ = [
    "cone_member", "lemma1_applicable", "lemma1_witness", "Witness",
    "Incompatible", "compatibility_check", "compatibility_check_form",
    "verify_witness", "LinearSystem", "FarkasCertificate", "NoImplication",
    "implies", "adjacent", "is_clique", "integer_matrix",
]


def cone_member(C: CostMatrix, y: Tour) -> bool:
    """Is ``y`` optimal (not necessarily uniquely) for ``C``?"""
    ly = tour_length(y, C)
    return all(cost_ge(tour_length(t, C), ly) for t in enumerate_tours(C.n))


def integer_matrix(n: int, values: dict) -> CostMatrix:
    """Plain integer matrix; missing off-diagonal cells are 0 and the
    diagonal holds ``4 n^2`` so that no cell is infinite."""
    rows = [[4 * n * n if i == j else int(values.get((i, j), 0))
             for j in range(1, n + 1)] for i in range(1, n + 1)]
    return CostMatrix.from_rows(rows, inf_diagonal=False)


def _is_01(f: AffineForm) -> bool:
    return f.constant == 0 and all(v == 1 for _, v in f.coeffs)


def lemma1_applicable(bplus: AffineForm, bminus: AffineForm, y: Tour) -> str | None:
    """``None`` when the construction applies, else the violated condition."""
    if not (_is_01(bplus) and _is_01(bminus)):
        return "coefficients are not 0/1"
    if bplus.support & bminus.support:
        return "supports overlap"
    if len(bplus.coeffs) != len(bminus.coeffs) or not bplus.coeffs:
        return "supports have different or zero cardinality"
    if len(bplus.support & y.arcs) > 2:
        return "more than two positive arcs lie on the tour"
    return None


def lemma1_witness(bplus: AffineForm, bminus: AffineForm, y: Tour) -> CostMatrix:
    """Input making ``<bplus - bminus, C> > 0`` with ``y`` the unique optimum.

    Off-diagonal cells start at 4, cells of ``bminus`` drop to 3, and the
    arcs of ``y`` outside ``bplus`` are set to 0.
    """
    why = lemma1_applicable(bplus, bminus, y)
    if why:
        raise ValueError(f"construction does not apply: {why}")
    vals = {a: 4 for a in iter_offdiagonal(y.n)}
    for a in bminus.support:
        vals[a] = 3
    for a in y.arcs - bplus.support:
        vals[a] = 0
    return integer_matrix(y.n, vals)


@dataclass(frozen=True)
class Witness:
    matrix: CostMatrix
    method: str  # "lemma1", "lp" or "constant"
    form_value: int


@dataclass(frozen=True)
class Incompatible:
    """``form > 0`` cannot hold on the cone.  ``weights`` pairs tours ``t``
    with ``mu_t >= 0`` such that ``sum mu_t (chi(y) - chi(t))`` equals the
    homogeneous part of the form, whose constant is then ``<= 0``."""

    reason: str
    weights: tuple[tuple[Tour, Fraction], ...] = ()

    def verify(self, form: AffineForm, y: Tour) -> bool:
        if form.constant > 0 or any(w < 0 for _, w in self.weights):
            return False
        acc: dict = {}
        for t, w in self.weights:
            for a in y.arcs:
                acc[a] = acc.get(a, 0) + w
            for a in t.arcs:
                acc[a] = acc.get(a, 0) - w
        return {a: v for a, v in acc.items() if v} == form.homogeneous().as_dict()


def verify_witness(form: AffineForm, y: Tour, C: CostMatrix) -> bool:
    return eval_form(form, C) > 0 and cone_member(C, y)


def _lcm_denominator(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


def _cone_lp_witness(form: AffineForm, y: Tour) -> CostMatrix | None:
    """Integer ``C`` in the cone of ``y`` with ``form(C) >= 1``, if any."""
    n = y.n
    arcs = list(iter_offdiagonal(n))
    col = {a: k for k, a in enumerate(arcs)}
    A, b = [], []
    for t in enumerate_tours(n):
        if t == y:
            continue
        row = [0] * len(arcs)
        for a in y.arcs:
            row[col[a]] += 1
        for a in t.arcs:
            row[col[a]] -= 1
        A.append(row)  # <y - t, C> <= 0
        b.append(0)
    row = [0] * len(arcs)
    for a, v in form.coeffs:
        row[col[a]] -= v
    A.append(row)  # -<B, C> <= -max(1, 1 - k)
    b.append(-max(1, 1 - form.constant))
    point = feasible_point(A, b)
    if point is None:
        return None
    scale = _lcm_denominator(point)
    return integer_matrix(n, {a: int(point[col[a]] * scale) for a in arcs})


def _cone_weights(form: AffineForm, y: Tour) -> tuple[tuple[Tour, Fraction], ...]:
    """Nonnegative ``mu`` with ``sum mu_t (chi(y) - chi(t)) = form``."""
    others = [t for t in enumerate_tours(y.n) if t != y]
    arcs = list(iter_offdiagonal(y.n))
    A_eq = [[int(a in y.arcs) - int(a in t.arcs) for t in others] for a in arcs]
    b_eq = [form.coeff(*a) for a in arcs]
    res = linprog_exact([0] * len(others), A_eq, b_eq)
    if not res.ok:
        return ()
    return tuple((t, w) for t, w in zip(others, res.x) if w)


def compatibility_check_form(form: AffineForm, y: Tour) -> Witness | Incompatible:
    """Can ``form(C) > 0`` hold for some ``C`` in the cone of ``y``?"""
    pos, neg = form.positive_part(), -form.negative_part()
    candidate = None
    method = ""
    if form.constant >= 0 and lemma1_applicable(pos, neg, y) is None:
        candidate, method = lemma1_witness(pos, neg, y), "lemma1"
    else:
        candidate = _cone_lp_witness(form, y)
        method = "lp"
        if candidate is None and form.constant >= 1:
            candidate, method = integer_matrix(y.n, {}), "constant"
    if candidate is None:
        weights = _cone_weights(form.homogeneous(), y)
        res = Incompatible(f"no cost matrix in the cone of {y} makes {form} positive", weights)
        if not res.verify(form, y):
            raise AssertionError(f"incompatibility certificate failed for {form}")
        return res
    if not verify_witness(form, y, candidate):
        raise AssertionError(f"{method} witness failed re-verification for {form}")
    return Witness(candidate, method, eval_form(form, candidate))


def compatibility_check(e: ComparisonEvent, y: Tour) -> Witness | Incompatible:
    """Strict version of the branch taken at ``e`` against the cone of ``y``."""
    return compatibility_check_form(oriented_form(e), y)


# -- linear implication ------------------------------------------------------

@dataclass(frozen=True)
class LinearSystem:
    """Hypotheses ``form > 0`` or ``form >= 0`` over an n x n input."""

    n: int
    hypotheses: tuple[tuple[AffineForm, str], ...]

    def __post_init__(self):
        hyps = tuple((f, rel) for f, rel in self.hypotheses)
        for f, rel in hyps:
            if rel not in (">", ">="):
                raise ValueError(f"unknown relation {rel!r}")
            if any(not (1 <= i <= self.n and 1 <= j <= self.n) for i, j in f.support):
                raise ValueError(f"form {f} leaves the {self.n} x {self.n} grid")
        object.__setattr__(self, "hypotheses", hyps)

    def extend(self, *more: tuple[AffineForm, str]) -> "LinearSystem":
        return LinearSystem(self.n, self.hypotheses + tuple(more))

    def holds_at(self, C: CostMatrix) -> bool:
        for f, rel in self.hypotheses:
            v = eval_form(f, C)
            if not (v > 0 if rel == ">" else v >= 0):
                return False
        return True


@dataclass(frozen=True)
class FarkasCertificate:
    """Weights with ``sum w_i * hyp_i == conclusion`` coefficient-wise."""

    weights: tuple[Fraction, ...]

    def verify(self, system: LinearSystem, conclusion: AffineForm) -> bool:
        if len(self.weights) != len(system.hypotheses):
            return False
        if any(w < 0 for w in self.weights):
            return False
        if not any(w > 0 and rel == ">" for w, (_, rel) in zip(self.weights, system.hypotheses)):
            return False
        acc: dict = {}
        const = Fraction(0)
        for w, (f, _) in zip(self.weights, system.hypotheses):
            for a, v in f.coeffs:
                acc[a] = acc.get(a, 0) + w * v
            const += w * f.constant
        acc = {a: v for a, v in acc.items() if v != 0}
        return acc == conclusion.as_dict() and const == conclusion.constant


@dataclass(frozen=True)
class NoImplication:
    """The implication fails; ``countermodel`` satisfies every hypothesis
    but not the conclusion (``None`` if the hypotheses are inconsistent)."""

    countermodel: CostMatrix | None


def implies(system: LinearSystem, conclusion: AffineForm) -> FarkasCertificate | NoImplication:
    """Decide ``hypotheses => conclusion > 0`` for homogeneous forms."""
    forms = [f for f, _ in system.hypotheses]
    if conclusion.constant or any(f.constant for f in forms):
        raise ValueError("implies() needs homogeneous forms")
    m = len(forms)
    strict = [k for k, (_, rel) in enumerate(system.hypotheses) if rel == ">"]
    arcs = sorted(set(conclusion.support).union(*(f.support for f in forms)))
    # variables: lambda_0..lambda_{m-1}, tau, eps
    nv = m + 2
    tau, eps = m, m + 1
    A_eq, b_eq = [], []
    for a in arcs:
        row = [0] * nv
        for k, f in enumerate(forms):
            row[k] = f.coeff(*a)
        row[tau] = -conclusion.coeff(*a)
        A_eq.append(row)
        b_eq.append(0)
    A_ub, b_ub = [], []
    row = [0] * nv
    row[eps], row[tau] = 1, -1
    A_ub.append(row)
    b_ub.append(0)
    row = [0] * nv
    row[eps] = 1
    for k in strict:
        row[k] = -1
    A_ub.append(row)
    b_ub.append(0)
    row = [0] * nv
    row[tau] = 1
    A_ub.append(row)
    b_ub.append(1)
    row = [0] * nv
    for k in strict:
        row[k] = 1
    A_ub.append(row)
    b_ub.append(1)
    obj = [0] * nv
    obj[eps] = 1
    res = linprog_exact(obj, A_eq, b_eq, A_ub, b_ub, maximize=True)
    if res.ok and res.value > 0:
        t = res.x[tau]
        return FarkasCertificate(tuple(res.x[k] / t for k in range(m)))
    return NoImplication(_countermodel(system, conclusion))


def _countermodel(system: LinearSystem, conclusion: AffineForm) -> CostMatrix | None:
    n = system.n
    arcs = list(iter_offdiagonal(n))
    col = {a: k for k, a in enumerate(arcs)}

    def row_of(f: AffineForm, sign: int) -> list[int]:
        row = [0] * len(arcs)
        for a, v in f.coeffs:
            row[col[a]] = sign * v
        return row

    A, b = [], []
    for f, rel in system.hypotheses:
        A.append(row_of(f, -1))
        b.append(-1 if rel == ">" else 0)
    A.append(row_of(conclusion, 1))
    b.append(0)
    point = feasible_point(A, b)
    if point is None:
        return None
    scale = _lcm_denominator(point)
    return integer_matrix(n, {a: int(point[col[a]] * scale) for a in arcs})


# -- adjacency ---------------------------------------------------------------

def adjacent(x: Tour, y: Tour) -> bool:
    """Is the segment between ``x`` and ``y`` an edge of the tour polytope?

    True iff the midpoint has no convex representation over all tours that
    puts weight below 1 on ``{x, y}``.  Tours using an arc outside
    ``x`` and ``y`` cannot appear in any representation, so only tours inside
    the union of their arcs enter the program.
    """
    if x.n != y.n:
        raise ValueError("tours have different sizes")
    if x == y:
        raise ValueError("adjacency needs two distinct tours")
    union = x.arcs | y.arcs
    candidates = [t for t in enumerate_tours(x.n) if t.arcs <= union]
    others = [t for t in candidates if t != x and t != y]
    if not others:
        return True
    tours = [x, y] + others
    arcs = sorted(union)
    A_eq = [[2 * int(a in t.arcs) for t in tours] for a in arcs]
    b_eq = [int(a in x.arcs) + int(a in y.arcs) for a in arcs]
    A_eq.append([1] * len(tours))
    b_eq.append(1)
    cost = [1, 1] + [0] * len(others)
    res = linprog_exact(cost, A_eq, b_eq)
    if not res.ok:
        raise AssertionError("midpoint representation LP must be feasible")
    return res.value == 1


def is_clique(Y: Sequence[Tour]) -> bool:
    if len(set(Y)) != len(Y):
        raise ValueError("clique candidates must be distinct")
    if len({t.n for t in Y}) > 1:
        raise ValueError("tours have different sizes")
    return all(adjacent(a, b) for a, b in combinations(Y, 2))
