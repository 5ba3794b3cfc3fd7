"""Root-to-leaf comparison chains of the branch-and-bound separating tree.

A chain is recorded per input.  Each event stores the compared difference
``left - right`` as an affine form in the input entries, the relation that
was tested against zero and the outcome that was taken.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import NamedTuple

from .core import INF, AffineForm, CostMatrix, CostValue, Tour, eval_form

__all__ = [
    "Provenance", "ComparisonEvent", "InstanceRecord", "TraceChain",
    "NormalForm", "filter_nontrivial", "replay_check", "oriented_form",
    "normal_form", "dumps_trace", "loads_trace", "instance_tree",
]

FORMAT_VERSION = 1


class Provenance(str, enum.Enum):
    ROW_MIN = "ROW_MIN"
    COL_MIN = "COL_MIN"
    REGRET_ROW = "REGRET_ROW"
    REGRET_COL = "REGRET_COL"
    REGRET_RECORD = "REGRET_RECORD"
    PRUNE = "PRUNE"
    BASE_CASE = "BASE_CASE"


@dataclass(frozen=True)
class ComparisonEvent:
    """One comparison ``form relation 0`` and the branch taken.

    An event is trivial when an operand was INF or when both operands are
    the same form, so the outcome does not depend on the input.  ``form`` is
    ``None`` for INF comparisons and for runs without form tracking.
    """

    form: AffineForm | None
    relation: str  # ">" or ">="
    outcome: bool
    trivial: bool
    provenance: Provenance
    instance_id: int
    depth: int

    @property
    def sign(self) -> int:
        """The branch sign: +1 when the tested relation held, else -1."""
        return 1 if self.outcome else -1

    def describe(self) -> str:
        if self.form is None:
            return f"[{self.provenance.value}] trivial -> {self.outcome}"
        rel = self.relation if self.outcome else ("<=" if self.relation == ">" else "<")
        return f"[{self.provenance.value}#{self.instance_id}] {self.form.homogeneous()} {rel} {-self.form.constant}"


@dataclass
class InstanceRecord:
    """One call of the branch-and-bound procedure."""

    instance_id: int
    parent: int  # 0 for the root call
    depth: int
    branch: str  # "root", "include" or "exclude"
    required: tuple[tuple[int, int], ...]
    entry_matrix: CostMatrix
    chosen_arc: tuple[int, int] | None = None
    exit: str = "return"  # "prune" when the bound test ends the call
    improved: bool = False
    bound: CostValue = INF  # the reduced sum compared with lopt


@dataclass(frozen=True)
class TraceChain:
    n: int
    events: tuple[ComparisonEvent, ...]
    leaf: Tour | None
    input_fingerprint: str
    instances: tuple[InstanceRecord, ...] = ()
    value: CostValue = INF

    def nontrivial(self) -> list[ComparisonEvent]:
        return [e for e in self.events if not e.trivial]


def filter_nontrivial(trace: TraceChain) -> TraceChain:
    return replace(trace, events=tuple(e for e in trace.events if not e.trivial))


def _holds(value: int, relation: str) -> bool:
    return value > 0 if relation == ">" else value >= 0


def replay_check(trace: TraceChain, C: CostMatrix) -> bool:
    """Does every nontrivial event reproduce its outcome at ``C``?"""
    if C.n != trace.n:
        raise ValueError(f"trace for n={trace.n}, matrix of size {C.n}")
    for e in trace.events:
        if e.trivial:
            continue
        if e.form is None:
            raise ValueError("event was recorded without form tracking")
        if _holds(eval_form(e.form, C), e.relation) != e.outcome:
            return False
    return True


def oriented_form(e: ComparisonEvent) -> AffineForm:
    """Form ``f`` such that the branch taken at ``e`` reads ``f > 0`` in its
    strict open version."""
    if e.trivial or e.form is None:
        raise ValueError("trivial events have no oriented form")
    return e.form if e.outcome else -e.form


class NormalForm(NamedTuple):
    """``<bplus, C> - <bminus, C> (relation) constant`` for the taken branch."""

    bplus: AffineForm
    bminus: AffineForm
    constant: int
    relation: str
    standard: bool  # 0/1 coefficients, equal nonzero cardinality, constant 0

    @property
    def balanced(self) -> bool:
        """0/1 coefficients with equal nonzero cardinality; constant ignored."""
        p, m = self.bplus.coeffs, self.bminus.coeffs
        return (all(v == 1 for _, v in p) and all(v == 1 for _, v in m)
                and len(p) == len(m) > 0)


def normal_form(e: ComparisonEvent) -> NormalForm:
    f = oriented_form(e)
    if e.outcome:
        relation = e.relation
    else:
        relation = ">=" if e.relation == ">" else ">"
    bplus = f.positive_part()
    bminus = -f.negative_part()
    constant = -f.constant
    nf = NormalForm(bplus, bminus, constant, relation, False)
    return nf._replace(standard=nf.balanced and constant == 0)


def instance_tree(trace: TraceChain) -> dict[int, list[int]]:
    """Children of each instance, rebuilt from ids and depths alone."""
    children: dict[int, list[int]] = {0: []}
    stack: list[int] = [0]
    for rec in sorted(trace.instances, key=lambda r: r.instance_id):
        while len(stack) > rec.depth + 1:
            stack.pop()
        if len(stack) != rec.depth + 1:
            raise ValueError(f"instance {rec.instance_id} skips a nesting level")
        children[stack[-1]].append(rec.instance_id)
        children[rec.instance_id] = []
        stack.append(rec.instance_id)
    return children


# -- serialization -----------------------------------------------------------

def _form_to_json(f: AffineForm | None):
    if f is None:
        return None
    return {"coeffs": {f"{i},{j}": v for (i, j), v in f.coeffs}, "constant": f.constant}


def _form_from_json(d) -> AffineForm | None:
    if d is None:
        return None
    coeffs = tuple((tuple(int(x) for x in k.split(",")), v) for k, v in d["coeffs"].items())
    return AffineForm(coeffs, d["constant"])


def _cost_json(v: CostValue):
    return None if v is INF else v


def _matrix_to_json(C: CostMatrix):
    return {"n": C.n, "rows": list(C.rows), "cols": list(C.cols), "cells": C.to_rows()}


def _matrix_from_json(d) -> CostMatrix:
    cells = {}
    for r, i in enumerate(d["rows"]):
        for c, j in enumerate(d["cols"]):
            cells[i, j] = d["cells"][r][c]
    return CostMatrix(d["n"], tuple(d["rows"]), tuple(d["cols"]), cells)


def dumps_trace(trace: TraceChain) -> str:
    """JSON Lines: one header object, then one object per event."""
    header = {
        "format": "tspchain-trace",
        "version": FORMAT_VERSION,
        "n": trace.n,
        "input_fingerprint": trace.input_fingerprint,
        "leaf": list(trace.leaf.order) if trace.leaf else None,
        "value": _cost_json(trace.value),
        "instances": [
            {
                "id": r.instance_id, "parent": r.parent, "depth": r.depth,
                "branch": r.branch, "required": [list(a) for a in r.required],
                "entry_matrix": _matrix_to_json(r.entry_matrix),
                "chosen_arc": list(r.chosen_arc) if r.chosen_arc else None,
                "exit": r.exit, "improved": r.improved, "bound": _cost_json(r.bound),
            }
            for r in trace.instances
        ],
        "events": len(trace.events),
    }
    lines = [json.dumps(header, sort_keys=True)]
    for e in trace.events:
        lines.append(json.dumps({
            "form": _form_to_json(e.form),
            "relation": e.relation,
            "outcome": e.outcome,
            "trivial": e.trivial,
            "provenance": e.provenance.value,
            "instance_id": e.instance_id,
            "depth": e.depth,
        }, sort_keys=True))
    return "\n".join(lines) + "\n"


def loads_trace(text: str) -> TraceChain:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty trace")
    header = json.loads(lines[0])
    if header.get("format") != "tspchain-trace":
        raise ValueError("not a trace file")
    events = []
    for ln in lines[1:]:
        d = json.loads(ln)
        events.append(ComparisonEvent(_form_from_json(d["form"]), d["relation"], d["outcome"],
                                      d["trivial"], Provenance(d["provenance"]),
                                      d["instance_id"], d["depth"]))
    if len(events) != header["events"]:
        raise ValueError(f"header announces {header['events']} events, found {len(events)}")
    instances = tuple(
        InstanceRecord(r["id"], r["parent"], r["depth"], r["branch"],
                       tuple(tuple(a) for a in r["required"]),
                       _matrix_from_json(r["entry_matrix"]),
                       tuple(r["chosen_arc"]) if r["chosen_arc"] else None,
                       r["exit"], r["improved"],
                       INF if r["bound"] is None else r["bound"])
        for r in header["instances"]
    )
    leaf = Tour.from_cycle(header["leaf"]) if header["leaf"] else None
    value = INF if header["value"] is None else header["value"]
    return TraceChain(header["n"], tuple(events), leaf, header["input_fingerprint"],
                      instances, value)
