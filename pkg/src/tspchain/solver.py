"""Little-Murty-Sweeney-Karel branch and bound, instrumented.

The control flow is written once against a *cell domain*.  The concrete
domain stores plain costs; the symbolic domain stores, next to each concrete
value, the affine form in the original input that the value equals.  Every
data-dependent comparison goes through :meth:`CellDomain.compare`, which is
where the trace is recorded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import (INF, AffineForm, CostMatrix, CostValue, Tour, cost_add,
                   cost_ge, cost_gt, cost_sub)
from .septree import ComparisonEvent, InstanceRecord, Provenance, TraceChain

__all__ = [
    "SymbolicCell", "CellDomain", "ConcreteDomain", "SymbolicDomain",
    "WorkMatrix", "ArcConstraints", "Solution", "reduce", "choose_arc",
    "forbidden_arc", "hamilton_completion", "branch_bound",
]


@dataclass(frozen=True)
class SymbolicCell:
    """A concrete value together with the affine form it was computed as."""

    value: CostValue
    form: AffineForm | None  # None exactly when the cell is infinite

    @property
    def infinite(self) -> bool:
        return self.value is INF


_SYM_INF = SymbolicCell(INF, None)


class CellDomain:
    """Concrete arithmetic; also the base class for symbolic tracking."""

    track_forms = False

    def __init__(self):
        self.events: list[ComparisonEvent] = []
        self.instance_id = 0
        self.depth = 0

    # cell constructors
    def lift(self, arc: tuple[int, int], value: CostValue):
        return value

    def const(self, k: int):
        return k

    inf = INF

    # accessors
    def value(self, cell) -> CostValue:
        return cell

    def form(self, cell) -> AffineForm | None:
        return None

    def is_inf(self, cell) -> bool:
        return self.value(cell) is INF

    def is_zero(self, cell) -> bool:
        return self.value(cell) == 0

    # arithmetic
    def add(self, a, b):
        return cost_add(a, b)

    def sub(self, a, b):
        return cost_sub(a, b)

    def compare(self, a, b, relation: str, provenance: Provenance) -> bool:
        """Evaluate ``a > b`` or ``a >= b`` and record it."""
        va, vb = self.value(a), self.value(b)
        if relation == ">":
            outcome = cost_gt(va, vb)
        elif relation == ">=":
            outcome = cost_ge(va, vb)
        else:
            raise ValueError(f"unknown relation {relation!r}")
        trivial = va is INF or vb is INF
        form = None
        if self.track_forms and not trivial:
            form = self.form(a) - self.form(b)
            # same outcome for every input: not a node of the separating tree
            trivial = not form.coeffs
        self.events.append(ComparisonEvent(form, relation, outcome, trivial,
                                           provenance, self.instance_id, self.depth))
        return outcome


class ConcreteDomain(CellDomain):
    pass


class SymbolicDomain(CellDomain):
    track_forms = True
    inf = _SYM_INF

    def lift(self, arc, value):
        if value is INF:
            return _SYM_INF
        return SymbolicCell(value, AffineForm.var(*arc))

    def const(self, k):
        return SymbolicCell(k, AffineForm.const(k))

    def value(self, cell):
        return cell.value

    def form(self, cell):
        return cell.form

    def add(self, a, b):
        if a.value is INF or b.value is INF:
            return _SYM_INF
        return SymbolicCell(a.value + b.value, a.form + b.form)

    def sub(self, a, b):
        if a.value is INF:
            return _SYM_INF
        if b.value is INF:
            raise ArithmeticError("finite - INF is undefined")
        return SymbolicCell(a.value - b.value, a.form - b.form)


class WorkMatrix:
    """Mutable matrix of cells over live row and column indices."""

    def __init__(self, n: int, rows: Iterable[int], cols: Iterable[int], cells: dict):
        self.n = n
        self.rows = sorted(rows)
        self.cols = sorted(cols)
        self.cells = cells

    @classmethod
    def from_cost_matrix(cls, C: CostMatrix, dom: CellDomain) -> "WorkMatrix":
        cells = {arc: dom.lift(arc, v) for arc, v in C.cells.items()}
        return cls(C.n, C.rows, C.cols, cells)

    def __getitem__(self, arc):
        return self.cells[arc]

    def __setitem__(self, arc, cell):
        self.cells[arc] = cell

    def copy(self) -> "WorkMatrix":
        return WorkMatrix(self.n, self.rows, self.cols, dict(self.cells))

    def without(self, i: int, j: int) -> "WorkMatrix":
        rows = [r for r in self.rows if r != i]
        cols = [c for c in self.cols if c != j]
        return WorkMatrix(self.n, rows, cols, {(r, c): self.cells[r, c] for r in rows for c in cols})

    def snapshot(self, dom: CellDomain) -> CostMatrix:
        return CostMatrix(self.n, tuple(self.rows), tuple(self.cols),
                          {arc: dom.value(c) for arc, c in self.cells.items()})


@dataclass(frozen=True)
class ArcConstraints:
    """Arcs forced into the tour; they must form vertex-disjoint simple paths."""

    n: int
    required: frozenset = frozenset()

    def __post_init__(self):
        req = frozenset((int(i), int(j)) for i, j in self.required)
        object.__setattr__(self, "required", req)
        succ, pred = {}, {}
        for i, j in req:
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"invalid arc {(i, j)}")
            if i in succ or j in pred:
                raise ValueError("a vertex has two required arcs in the same direction")
            succ[i], pred[j] = j, i
        if len(req) >= self.n:
            raise ValueError("required arcs close a full cycle")
        for start in succ:
            v, steps = succ[start], 1
            while v in succ and v != start:
                v, steps = succ[v], steps + 1
            if v == start:
                raise ValueError(f"required arcs contain a subcycle of length {steps}")

    def add(self, arc: tuple[int, int]) -> "ArcConstraints":
        return ArcConstraints(self.n, self.required | {arc})

    def paths(self) -> list[list[int]]:
        """Maximal paths, isolated vertices included as one-vertex paths."""
        succ = dict(self.required)
        heads = set(range(1, self.n + 1)) - {j for _, j in self.required}
        out = []
        for h in sorted(heads):
            path = [h]
            while path[-1] in succ:
                path.append(succ[path[-1]])
            out.append(path)
        return out


def forbidden_arc(arcs: ArcConstraints, new_arc: tuple[int, int]) -> tuple[int, int]:
    """End and start ``(l, k)`` of the maximal required path through ``new_arc``."""
    i, j = new_arc
    succ = dict(arcs.required)
    pred = {b: a for a, b in arcs.required}
    if i in succ or j in pred:
        raise ValueError(f"arc {new_arc} conflicts with the required arcs")
    k = i
    while k in pred:
        k = pred[k]
        if k == j:
            raise ValueError(f"arc {new_arc} closes a premature subcycle")
    l = j
    while l in succ:
        l = succ[l]
        if l == i:
            raise ValueError(f"arc {new_arc} closes a premature subcycle")
    if k == j:
        raise ValueError(f"arc {new_arc} closes a premature subcycle")
    return l, k


def hamilton_completion(arcs: ArcConstraints) -> Tour:
    """The unique tour containing every required arc."""
    paths = arcs.paths()
    if len(paths) == 1:
        p = paths[0]
        return Tour.from_cycle(p)
    if len(paths) == 2:
        return Tour.from_cycle(paths[0] + paths[1])
    raise ValueError(f"{len(arcs.required)} required arcs leave {len(paths)} paths; "
                     "the completion is not unique")


def reduce(M: WorkMatrix, total, dom: CellDomain | None = None):
    """Subtract row then column minima in place; return ``(M, total)``."""
    dom = dom or ConcreteDomain()
    for i in M.rows:
        m = dom.inf
        for j in M.cols:
            if dom.compare(m, M[i, j], ">", Provenance.ROW_MIN):
                m = M[i, j]
        total = dom.add(total, m)
        for j in M.cols:
            M[i, j] = dom.sub(M[i, j], m)
    for j in M.cols:
        m = dom.inf
        for i in M.rows:
            if dom.compare(m, M[i, j], ">", Provenance.COL_MIN):
                m = M[i, j]
        total = dom.add(total, m)
        for i in M.rows:
            M[i, j] = dom.sub(M[i, j], m)
    return M, total


def choose_arc(M: WorkMatrix, dom: CellDomain | None = None):
    """Zero cell of maximal regret; returns ``((i, j), w)``.

    The first strict maximizer in row-major order wins.
    """
    dom = dom or ConcreteDomain()
    w = dom.const(-1)
    best = None
    for i in M.rows:
        for j in M.cols:
            if dom.is_inf(M[i, j]) or not dom.is_zero(M[i, j]):
                continue
            m = dom.inf
            for t in M.cols:
                if t != j and dom.compare(m, M[i, t], ">", Provenance.REGRET_ROW):
                    m = M[i, t]
            k = dom.inf
            for t in M.rows:
                if t != i and dom.compare(k, M[t, j], ">", Provenance.REGRET_COL):
                    k = M[t, j]
            mk = dom.add(m, k)
            if dom.compare(mk, w, ">", Provenance.REGRET_RECORD):
                w = mk
                best = (i, j)
    if best is None:
        raise ValueError("matrix has no zero cell")
    return best, w


class Solution(tuple):
    """``(tour, length, trace)``; unpacks like a plain triple."""

    def __new__(cls, tour, length, trace):
        return super().__new__(cls, (tour, length, trace))

    tour = property(lambda self: self[0])
    length = property(lambda self: self[1])
    trace = property(lambda self: self[2])


@dataclass
class _Session:
    C: CostMatrix
    dom: CellDomain
    original: dict = field(default_factory=dict)
    hopt: Tour | None = None
    lopt: object = None
    counter: int = 0
    instances: list = field(default_factory=list)


def _branch_bound(s: _Session, M: WorkMatrix, arcs: ArcConstraints, total,
                  parent: int, depth: int, branch: str) -> None:
    dom = s.dom
    s.counter += 1
    iid = s.counter
    rec = InstanceRecord(iid, parent, depth, branch, tuple(sorted(arcs.required)),
                         M.snapshot(dom))
    s.instances.append(rec)
    dom.instance_id, dom.depth = iid, depth

    M, total = reduce(M, total, dom)
    rec.bound = dom.value(total)
    if dom.compare(total, s.lopt, ">=", Provenance.PRUNE):
        rec.exit = "prune"
        return
    (i, j), _ = choose_arc(M, dom)
    rec.chosen_arc = (i, j)
    with_arc = arcs.add((i, j))
    if len(M.rows) == 3:
        H = hamilton_completion(with_arc)
        length = dom.const(0)
        for arc in sorted(H.arcs):
            length = dom.add(length, s.original[arc])
        if dom.compare(s.lopt, length, ">", Provenance.BASE_CASE):
            s.hopt, s.lopt = H, length
            rec.improved = True
    else:
        Mnew = M.without(i, j)
        l, k = forbidden_arc(arcs, (i, j))
        if (l, k) in Mnew.cells:
            Mnew[l, k] = dom.inf
        _branch_bound(s, Mnew, with_arc, total, iid, depth + 1, "include")
        dom.instance_id, dom.depth = iid, depth
    M[i, j] = dom.inf
    _branch_bound(s, M, arcs, total, iid, depth + 1, "exclude")
    dom.instance_id, dom.depth = iid, depth


def branch_bound(C: CostMatrix, symbolic: bool = True) -> Solution:
    """Run the algorithm on a full matrix; diagonal cells are set to INF.

    With ``symbolic=True`` every recorded comparison carries its affine form
    in the input entries; otherwise only outcomes are recorded.
    """
    if not C.is_full:
        raise ValueError("branch_bound needs a full matrix")
    if C.n < 3:
        raise ValueError(f"branch and bound needs n >= 3, got {C.n}")
    C = C.replace({(i, i): INF for i in range(1, C.n + 1)})
    dom = SymbolicDomain() if symbolic else ConcreteDomain()
    s = _Session(C, dom)
    s.original = {arc: dom.lift(arc, v) for arc, v in C.cells.items()}
    s.lopt = dom.inf
    M = WorkMatrix.from_cost_matrix(C, dom)
    _branch_bound(s, M, ArcConstraints(C.n), dom.const(0), 0, 0, "root")
    lopt = dom.value(s.lopt)
    trace = TraceChain(C.n, tuple(dom.events), s.hopt, C.fingerprint(),
                       tuple(s.instances), lopt)
    return Solution(s.hopt, lopt, trace)
