"""Turnkey audits: the node-B counterexample on five vertices, the chain of
C* against its second-best tour, chain audits for arbitrary inputs, and the
randomized check of the cone witness construction."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any

from .core import (INF, AffineForm, CostMatrix, Tour, enumerate_tours, eval_form,
                   iter_offdiagonal, tour_length)
from .fixtures import (NODE_B_FORM, Section4Fixture, Section5Fixture,
                       node_b_conditions, section4_fixture, section5_fixture)
from .geometry import (FarkasCertificate, LinearSystem, Witness,
                       adjacent, compatibility_check, implies, is_clique,
                       lemma1_applicable, lemma1_witness)
from .septree import normal_form, oriented_form, replay_check
from .solver import branch_bound

__all__ = [
    "CheckItem", "AuditReport", "verify_section4", "verify_section5",
    "audit_chain", "lemma1_case", "lemma1_property_suite",
    "mutation_sites", "apply_mutation", "mutation_sensitivity",
]


@dataclass
class CheckItem:
    id: str
    description: str
    verdict: bool
    evidence: Any = None


@dataclass
class AuditReport:
    title: str
    items: list[CheckItem] = field(default_factory=list)
    conclusion: str = ""
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.items) and all(it.verdict for it in self.items)

    def item(self, item_id: str) -> CheckItem:
        for it in self.items:
            if it.id == item_id:
                return it
        raise KeyError(item_id)

    def add(self, item_id: str, description: str, verdict: bool, evidence=None) -> CheckItem:
        it = CheckItem(item_id, description, bool(verdict), evidence)
        self.items.append(it)
        return it

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "overall": "PASS" if self.passed else "FAIL",
            "conclusion": self.conclusion,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
            "items": [{"id": it.id, "description": it.description,
                       "verdict": "PASS" if it.verdict else "FAIL",
                       "evidence": it.evidence} for it in self.items],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def summary(self) -> str:
        lines = [self.title]
        for it in self.items:
            lines.append(f"  [{'PASS' if it.verdict else 'FAIL'}] {it.id}: {it.description}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        if self.degenerate:
            lines.append("  degenerate query: the tour is the leaf of the chain")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}"
                     + (f" ({self.conclusion})" if self.conclusion else ""))
        return "\n".join(lines)


# -- evidence encoders -------------------------------------------------------

def _matrix_ev(C: CostMatrix) -> list:
    return C.to_rows()


def _form_ev(f: AffineForm) -> str:
    return str(f)


def _weights_ev(cert: FarkasCertificate) -> list[str]:
    return [str(w) for w in cert.weights]


def _cost_ev(v):
    return None if v is INF else v


def _tour_ev(t: Tour | None):
    return list(t.order) if t is not None else None


def _lengths(C: CostMatrix) -> list[tuple[Tour, object]]:
    return [(t, tour_length(t, C)) for t in enumerate_tours(C.n)]


# -- node B on five vertices -------------------------------------------------

def _load_tours(raw: dict, report: AuditReport) -> dict[str, Tour] | None:
    tours, errors = {}, {}
    for name, chi in raw.items():
        try:
            tours[name] = Tour.from_chi(chi)
        except ValueError as exc:
            errors[name] = str(exc)
    ok = not errors
    report.add("fixtures", "every fixture 0/1 matrix is a Hamiltonian cycle", ok,
               {"cycles": {k: _tour_ev(t) for k, t in tours.items()}, "errors": errors})
    return tours if ok else None


def verify_section4(fixture: Section4Fixture | None = None) -> AuditReport:
    """Node B (the test c41 > c42) violates the direct-type condition."""
    fx = fixture or section4_fixture()
    rep = AuditReport("node B on 5 vertices: the direct-type condition fails")
    rep.notes.append("on the c41 <= c42 branch the dropped pair is x, y "
                     "(not a second copy of z, w in R_B^+)")
    tours = _load_tours(fx.tours, rep)
    mats = {k: CostMatrix.from_rows(v) for k, v in fx.matrices.items()}
    path = node_b_conditions()
    system = LinearSystem(5, tuple(path))

    # (a) the four inputs satisfy the path conditions to node B
    ev = {}
    ok_a = True
    for name, C in mats.items():
        vals = [eval_form(f, C) for f, _ in path]
        held = [v > 0 if rel == ">" else v >= 0 for v, (_, rel) in zip(vals, path)]
        ev[name] = {"values": vals, "held": held}
        ok_a &= all(held)
    rep.add("a", "C_x, C_y, C_z, C_w satisfy the nine conditions leading to node B", ok_a, ev)

    # (b) the node inequality splits them
    ev, ok_b = {}, True
    for name, C in mats.items():
        v = eval_form(NODE_B_FORM, C)
        want = name in ("x", "y")
        ev[name] = {"c41 - c42": v, "expected_positive_branch": want}
        ok_b &= (v > 0) == want
    rep.add("b", "c41 > c42 holds for C_x, C_y and fails for C_z, C_w", ok_b, ev)

    if tours is None:
        for item_id in ("c", "chain", "d", "e", "f"):
            rep.add(item_id, "skipped: tour fixtures are invalid", False)
        rep.conclusion = "INCONCLUSIVE"
        return rep

    # (c) each tour is the unique optimum of its matrix, with value 5
    ev, ok_c = {}, True
    for name, C in mats.items():
        t = tours[name]
        lengths = _lengths(C)
        own = tour_length(t, C)
        others = [v for s, v in lengths if s != t]
        ok = own == fx.value and all(v > own for v in others)
        ev[name] = {"tour": _tour_ev(t), "value": _cost_ev(own),
                    "lengths": [[_tour_ev(s), _cost_ev(v)] for s, v in lengths]}
        ok_c &= ok
    rep.add("c", f"each of x, y, z, w is the unique optimum of its matrix with value {fx.value}",
            ok_c, ev)

    # the algorithm itself reaches node B through exactly these conditions
    ev, ok_chain = {}, True
    for name, C in mats.items():
        sol = branch_bound(C)
        events = sol.trace.nontrivial()
        prefix = []
        node = None
        for e in events:
            if e.form is not None and e.form.homogeneous() in (NODE_B_FORM, -NODE_B_FORM):
                node = e
                break
            nf = normal_form(e)
            prefix.append((oriented_form(e), nf.relation))
        ok = (node is not None and prefix == path and sol.tour == tours[name]
              and node.outcome == (name in ("x", "y")))
        ev[name] = {"prefix": [f"{_form_ev(f)} {rel} 0" for f, rel in prefix],
                    "node": node.describe() if node else None,
                    "leaf": _tour_ev(sol.tour)}
        ok_chain &= ok
    rep.add("chain", "the traced run on each C_t meets node B right after those conditions "
            "and ends at leaf t", ok_chain, ev)

    # (d) domination certificates
    pos = system.extend((NODE_B_FORM, ">"))
    neg = system.extend((-NODE_B_FORM, ">="))
    ev, ok_d = {}, True
    for name, dom, sys_, label in (("z", "z'", pos, "+"), ("w", "w'", pos, "+"),
                                   ("x", "x'", neg, "-"), ("y", "y'", neg, "-")):
        concl = AffineForm.from_tour(tours[name]) - AffineForm.from_tour(tours[dom])
        res = implies(sys_, concl)
        if isinstance(res, FarkasCertificate):
            ok = res.verify(sys_, concl)
            ev[name] = {"branch": label, "conclusion": f"{_form_ev(concl)} > 0",
                        "weights": _weights_ev(res)}
        else:
            ok = False
            ev[name] = {"branch": label, "conclusion": f"{_form_ev(concl)} > 0",
                        "countermodel": _matrix_ev(res.countermodel) if res.countermodel else None}
        ok_d &= ok
    rep.add("d", "under the conditions and c41 > c42, z and w are beaten by z', w'; "
            "under c41 <= c42, x and y are beaten by x', y'", ok_d, ev)

    # (e) clique
    Y = [tours[k] for k in ("x", "y", "z", "w")]
    try:
        ok_e = is_clique(Y)
    except ValueError:
        ok_e = False
    rep.add("e", "{x, y, z, w} is a clique", ok_e, {"tours": [_tour_ev(t) for t in Y]})

    # (f) conclusion
    r_plus = ["z", "w"] if ok_a and ok_b and ok_c and ok_chain and ok_d else []
    r_minus = ["x", "y"] if r_plus else []
    ok_f = ok_e and min(len(r_plus), len(r_minus)) >= 2
    rep.add("f", "|R_B^+ n Y| >= 2 and |R_B^- n Y| >= 2, so min(...) <= 1 fails at node B", ok_f,
            {"R_plus": r_plus, "R_minus": r_minus})
    rep.conclusion = "NOT DIRECT-TYPE" if rep.passed else "INCONCLUSIVE"
    return rep


# -- chains against a cone ---------------------------------------------------

def _event_checks(events, y: Tour) -> list:
    results = []
    for e in events:
        f = oriented_form(e)
        res = compatibility_check(e, y)
        if isinstance(res, Witness):
            ev = {"event": e.describe(), "strict": f"{_form_ev(f)} > 0", "result": "witness",
                  "method": res.method, "form_value": res.form_value,
                  "matrix": _matrix_ev(res.matrix)}
        else:
            ev = {"event": e.describe(), "strict": f"{_form_ev(f)} > 0",
                  "result": "incompatible", "reason": res.reason,
                  "cone_weights": [[_tour_ev(t), str(w)] for t, w in res.weights]}
        results.append((e, res, ev))
    return results


def audit_chain(C: CostMatrix, y: Tour) -> AuditReport:
    """Check condition (*) for the chain of ``C`` and the tour ``y``."""
    rep = AuditReport(f"chain of the given input against the cone of {y}")
    sol = branch_bound(C)
    leaf = sol.tour

    rep.add("trace", "the recorded chain replays on the input", replay_check(sol.trace, C),
            {"leaf": _tour_ev(leaf), "value": _cost_ev(sol.length),
             "events": len(sol.trace.events), "nontrivial": len(sol.trace.nontrivial())})
    if C.n <= 6 and leaf is not None and leaf != y:
        rep.notes.append(f"leaf and tour adjacent: {adjacent(leaf, y)}")
    if leaf == y:
        rep.degenerate = True
        rep.add("query", "the tour differs from the leaf", False, {"leaf": _tour_ev(leaf)})
        rep.conclusion = "DEGENERATE"
        return rep
    witnessed = 0
    for k, (e, res, ev) in enumerate(_event_checks(sol.trace.nontrivial(), y), 1):
        rep.add(f"event{k}", "strict branch condition checked against the cone", True, ev)
        witnessed += isinstance(res, Witness)
    total = len(sol.trace.nontrivial())
    rep.conclusion = "VIOLATES(*)" if witnessed == total else "SATISFIES(*)"
    return rep


def verify_section5(fixture: Section5Fixture | None = None, y: Tour | None = None) -> AuditReport:
    """Condition (*) fails for the chain of C* and its second-best tour."""
    fx = fixture or section5_fixture()
    rep = AuditReport("chain of C* on 4 vertices: condition (*) fails")
    tours = _load_tours(fx.tours, rep)
    C = CostMatrix.from_rows(fx.matrix)
    sol = branch_bound(C)
    trace = sol.trace
    recs = {r.instance_id: r for r in trace.instances}

    x = tours["x"] if tours else None
    structure = {r.instance_id: {"parent": r.parent, "branch": r.branch, "exit": r.exit,
                                 "chosen_arc": list(r.chosen_arc) if r.chosen_arc else None,
                                 "entry": {"rows": list(r.entry_matrix.rows),
                                           "cols": list(r.entry_matrix.cols),
                                           "cells": r.entry_matrix.to_rows()}}
                 for r in trace.instances}
    expected = {1: (0, "root"), 2: (1, "include"), 3: (2, "exclude"), 4: (1, "exclude")}
    ok_a = (x is not None and sol.tour == x and sol.length == 0 and len(recs) == 4
            and all(recs[k].parent == p and recs[k].branch == b for k, (p, b) in expected.items())
            and recs[3].exit == "prune" and recs[4].exit == "prune"
            and all(recs[k].chosen_arc == tuple(a) for k, a in fx.chosen_arcs.items())
            and all(structure[k]["entry"] == v for k, v in fx.instance_inputs.items()))
    rep.add("a", "leaf x with value 0; four calls nested 1 > 2 > 3 and 1 > 4, calls 3 and 4 "
            "stop at the bound test; arcs (2,3) then (1,2); call inputs C', C'', C'''", ok_a,
            {"leaf": _tour_ev(sol.tour), "value": _cost_ev(sol.length), "instances": structure})

    if y is None:
        y = tours["y"] if tours else None
    if x is None or y is None:
        for item_id in ("b", "c", "d", "prune3", "e"):
            rep.add(item_id, "skipped: tour fixtures are invalid", False)
        rep.conclusion = "INCONCLUSIVE"
        return rep

    lengths = _lengths(C)
    ly = tour_length(y, C)
    lx = tour_length(x, C)
    ok_b = (ly == fx.y_value and lx < ly
            and all(v > ly for t, v in lengths if t not in (x, y)))
    rep.add("b", f"y has value {fx.y_value} and is second-best after x", ok_b,
            {"y": _tour_ev(y), "value": _cost_ev(ly),
             "lengths": [[_tour_ev(t), _cost_ev(v)] for t, v in lengths]})

    all4 = list(enumerate_tours(4))
    rep.add("c", "the 6 tours on 4 vertices are pairwise adjacent", is_clique(all4),
            {"pairs": len(all4) * (len(all4) - 1) // 2})

    if y == sol.tour:
        rep.degenerate = True
        rep.add("d", "degenerate: y is the leaf, its own cone needs no refutation", False)
        rep.add("e", "condition (*) verdict", False, {"verdict": "DEGENERATE"})
        rep.conclusion = "DEGENERATE"
        return rep

    events = trace.nontrivial()
    checks = _event_checks(events, y)
    ok_d = bool(checks) and all(isinstance(res, Witness) for _, res, _ in checks)
    rep.add("d", "every nontrivial comparison of the chain, taken separately, is compatible "
            "with C in K(y)", ok_d, [ev for _, _, ev in checks])

    target = AffineForm.parse("c14 - c12 + c42 - c41")
    prune3 = [(e, res) for e, res, _ in checks
              if e.instance_id == 3 and e.provenance.value == "PRUNE"]
    ok_p = (len(prune3) == 1 and oriented_form(prune3[0][0]) == target
            and isinstance(prune3[0][1], Witness))
    rep.add("prune3", "the bound test of call 3, (c14 - c12) + (c42 - c41) > 0, has a witness",
            ok_p, {"matrix": _matrix_ev(prune3[0][1].matrix)} if ok_p else None)

    ok_e = ok_d and adjacent(sol.tour, y)
    rep.add("e", "y is adjacent to the leaf and no comparison separates it: (*) fails", ok_e,
            {"verdict": "VIOLATES(*)" if ok_e else "SATISFIES(*)"})
    rep.conclusion = "NOT \"DIRECT-TYPE\"" if rep.passed else "INCONCLUSIVE"
    return rep


# -- randomized witness construction ----------------------------------------

def lemma1_case(y: Tour, bplus: AffineForm, bminus: AffineForm) -> tuple[str, dict]:
    """``("pass" | "fail" | "skipped", evidence)`` for one constructed witness,
    verified by enumerating every tour."""
    why = lemma1_applicable(bplus, bminus, y)
    ev = {"y": _tour_ev(y), "bplus": _form_ev(bplus), "bminus": _form_ev(bminus)}
    if why:
        ev["reason"] = why
        return "skipped", ev
    C = lemma1_witness(bplus, bminus, y)
    form = bplus - bminus
    value = eval_form(form, C)
    lengths = {t: tour_length(t, C) for t in enumerate_tours(y.n)}
    ly = lengths[y]
    unique = all(v > ly for t, v in lengths.items() if t != y)
    ev.update(matrix=_matrix_ev(C), form_value=value, y_value=ly,
              runner_up=min(v for t, v in lengths.items() if t != y))
    return ("pass" if value >= 1 and unique else "fail"), ev


def _random_case(rng: random.Random, n: int) -> tuple[Tour, AffineForm, AffineForm]:
    tours = enumerate_tours(n)
    y = tours[rng.randrange(len(tours))]
    on = sorted(y.arcs)
    off = sorted(set(iter_offdiagonal(n)) - y.arcs)
    k = rng.randint(1, n)
    a = rng.randint(0, min(2, k))
    plus = rng.sample(on, a) + rng.sample(off, k - a)
    rest = sorted(set(iter_offdiagonal(n)) - set(plus))
    minus = rng.sample(rest, k)
    return (y, AffineForm(tuple((p, 1) for p in plus)),
            AffineForm(tuple((m, 1) for m in minus)))


def lemma1_property_suite(seed: int = 1, cases: int = 500, n: int = 5) -> AuditReport:
    if not 4 <= n <= 6:
        raise ValueError("the property suite runs for 4 <= n <= 6")
    rng = random.Random(seed)
    rep = AuditReport(f"cone witness construction, {cases} random cases, n={n}, seed={seed}")
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    records = []
    for _ in range(cases):
        y, bp, bm = _random_case(rng, n)
        status, ev = lemma1_case(y, bp, bm)
        counts[status] += 1
        ev["status"] = status
        records.append(ev)
    rep.add("cases", f"{counts['pass']}/{cases} witnesses confirmed by enumeration",
            counts["pass"] == cases, {"counts": counts, "cases": records})
    rep.conclusion = f"{counts['pass']}/{cases}"
    return rep


# -- mutation sensitivity ----------------------------------------------------

def mutation_sites() -> list[tuple[str, str, int, int]]:
    """Every off-diagonal number of the built-in fixtures as
    ``(section, name, row, col)``; matrices are named ``C_*``."""
    sites = []
    s4, s5 = section4_fixture(), section5_fixture()
    for name in s4.matrices:
        sites += [("4", f"C_{name}", i, j) for i in range(5) for j in range(5) if i != j]
    for name in s4.tours:
        sites += [("4", name, i, j) for i in range(5) for j in range(5) if i != j]
    sites += [("5", "C_*", i, j) for i in range(4) for j in range(4) if i != j]
    for name in s5.tours:
        sites += [("5", name, i, j) for i in range(4) for j in range(4) if i != j]
    return sites


def apply_mutation(site, rng: random.Random):
    """Fixture copy with one number changed, plus ``(old, new)``."""
    section, name, i, j = site
    fx = section4_fixture() if section == "4" else section5_fixture()
    if name.startswith("C_"):
        grid = fx.matrices[name[2:]] if section == "4" else fx.matrix
        old = grid[i][j]
        new = rng.choice([v for v in range(10) if v != old])
    else:
        grid = fx.tours[name]
        old = grid[i][j]
        new = 1 - old
    grid[i][j] = new
    return fx, old, new


def mutation_sensitivity(seed: int = 0, trials: int = 20) -> list[dict]:
    """Rerun the matching audit on ``trials`` random single-number mutations."""
    rng = random.Random(seed)
    sites = mutation_sites()
    out = []
    for _ in range(trials):
        site = sites[rng.randrange(len(sites))]
        fx, old, new = apply_mutation(site, rng)
        try:
            rep = verify_section4(fx) if site[0] == "4" else verify_section5(fx)
            failed = [it.id for it in rep.items if not it.verdict]
        except Exception as exc:  # a crash counts as a detected mutation
            failed = [f"error: {type(exc).__name__}: {exc}"]
        out.append({"section": site[0], "fixture": site[1], "entry": (site[2] + 1, site[3] + 1),
                    "old": old, "new": new, "failed_items": failed, "detected": bool(failed)})
    return out
