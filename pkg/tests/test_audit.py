import json
import random

from tspchain.audit import (apply_mutation, audit_chain, lemma1_case, lemma1_property_suite,
                            mutation_sensitivity, mutation_sites, verify_section4,
                            verify_section5)
from tspchain.core import AffineForm, CostMatrix, Tour, enumerate_tours, eval_form, tour_length
from tspchain.fixtures import section4_fixture, section5_fixture
from tspchain.geometry import FarkasCertificate, LinearSystem
from tspchain.fixtures import NODE_B_FORM, node_b_conditions


def _failed(rep):
    return [it.id for it in rep.items if not it.verdict]


def test_section4_passes():
    rep = verify_section4()
    assert rep.passed, rep.summary()
    assert [it.id for it in rep.items] == ["fixtures", "a", "b", "c", "chain", "d", "e", "f"]
    assert rep.item("f").evidence == {"R_plus": ["z", "w"], "R_minus": ["x", "y"]}
    assert any("dropped pair is x, y" in n for n in rep.notes)


def test_section4_evidence_rechecks_independently():
    rep = verify_section4()
    fx = section4_fixture()
    # lengths listed as evidence agree with a fresh enumeration
    for name, ev in rep.item("c").evidence.items():
        C = CostMatrix.from_rows(fx.matrices[name])
        listed = {tuple(t): v for t, v in ev["lengths"]}
        assert listed == {t.order: tour_length(t, C) for t in enumerate_tours(5)}
        assert ev["value"] == 5
    # certificates re-verify from their printed weights
    base = LinearSystem(5, tuple(node_b_conditions()))
    from fractions import Fraction
    for name, ev in rep.item("d").evidence.items():
        system = base.extend((NODE_B_FORM, ">") if ev["branch"] == "+" else (-NODE_B_FORM, ">="))
        concl = AffineForm.parse(ev["conclusion"][:-4])
        assert FarkasCertificate(tuple(Fraction(w) for w in ev["weights"])).verify(system, concl)


def test_section4_mutation_examples():
    fx = section4_fixture()
    fx.matrices["x"][3][0] = 0
    assert "b" in _failed(verify_section4(fx))
    fx = section4_fixture()
    fx.tours["x'"] = fx.tours["x"]
    assert "d" in _failed(verify_section4(fx))


def test_section4_is_deterministic():
    assert verify_section4().to_json() == verify_section4().to_json()


def test_section5_passes():
    rep = verify_section5()
    assert rep.passed, rep.summary()
    assert not rep.degenerate
    assert rep.item("e").evidence == {"verdict": "VIOLATES(*)"}


def test_section5_witnesses_recheck_independently():
    rep = verify_section5()
    y = Tour.from_cycle([1, 4, 2, 3])
    for ev in rep.item("d").evidence:
        C = CostMatrix.from_rows(ev["matrix"], inf_diagonal=False)
        assert eval_form(AffineForm.parse(ev["strict"][:-4]), C) > 0
        ly = tour_length(y, C)
        assert all(tour_length(t, C) >= ly for t in enumerate_tours(4))
    assert len(rep.item("d").evidence) == 55


def test_section5_degenerate_query():
    rep = verify_section5(y=Tour.from_cycle([1, 2, 3, 4]))
    assert rep.degenerate and not rep.passed and rep.conclusion == "DEGENERATE"


def test_section5_mutation_example():
    fx = section5_fixture()
    fx.matrix[0][2] = 1
    assert "a" in _failed(verify_section5(fx))


def test_audit_chain_verdicts(cstar):
    assert audit_chain(cstar, Tour.from_cycle([1, 4, 2, 3])).conclusion == "VIOLATES(*)"
    rep = audit_chain(cstar, Tour.from_cycle([1, 3, 2, 4]))
    assert rep.conclusion in ("VIOLATES(*)", "SATISFIES(*)")
    assert all("result" in it.evidence for it in rep.items if it.id.startswith("event"))
    assert any(n.startswith("leaf and tour adjacent") for n in rep.notes)
    deg = audit_chain(cstar, Tour.from_cycle([1, 2, 3, 4]))
    assert deg.degenerate and deg.conclusion == "DEGENERATE"


# n = 6 input whose leaf 1-3-5-4-2-6 is not adjacent to the tour 1-2-3-4-6-5
C_SEP = [[None, 13, 10, 19, 20, 6], [17, None, 15, 14, 16, 8], [1, 17, None, 0, 2, 12],
         [20, 0, 19, None, 15, 10], [7, 10, 2, 6, None, 18], [7, 7, 4, 17, 14, None]]


def test_audit_chain_finds_a_separating_comparison():
    C = CostMatrix.from_rows(C_SEP)
    y = Tour.from_cycle([1, 2, 3, 4, 6, 5])
    rep = audit_chain(C, y)
    assert rep.conclusion == "SATISFIES(*)"
    assert "leaf and tour adjacent: False" in rep.notes
    bad = [it.evidence for it in rep.items
           if it.id.startswith("event") and it.evidence["result"] == "incompatible"]
    assert bad
    # the strict form is <y, C> - <t, C> for the tour t listed as certificate
    for ev in bad:
        (t_order, w), = ev["cone_weights"]
        t = Tour.from_cycle(t_order)
        assert w == "1"
        assert AffineForm.parse(ev["strict"][:-4]) == AffineForm.from_tour(y) - AffineForm.from_tour(t)


def test_lemma1_suite_and_skips():
    rep = lemma1_property_suite(seed=1, cases=60, n=5)
    assert rep.passed and rep.conclusion == "60/60"
    y = Tour.from_cycle([1, 2, 3, 4, 5])
    status, ev = lemma1_case(y, AffineForm.parse("c12 + c23 + c34"),
                             AffineForm.parse("c13 + c24 + c35"))
    assert status == "skipped" and "two" in ev["reason"]
    status, _ = lemma1_case(y, AffineForm.parse("c12 + c14"), AffineForm.parse("c14 + c35"))
    assert status == "skipped"


def test_report_serializes():
    data = json.loads(verify_section5().to_json())
    assert data["overall"] == "PASS" and data["items"][0]["verdict"] == "PASS"


def test_mutation_sites_and_application():
    sites = mutation_sites()
    assert len(sites) == 4 * 20 + 8 * 20 + 12 + 2 * 12
    fx, old, new = apply_mutation(("5", "C_*", 0, 2), random.Random(0))
    assert old == 2 and new != 2 and fx.matrix[0][2] == new
    assert section5_fixture().matrix[0][2] == 2


def test_mutations_of_tours_and_cstar_are_always_detected():
    rng = random.Random(3)
    for site in mutation_sites():
        if site[1] == "C_*" or not site[1].startswith("C_"):
            fx, _, _ = apply_mutation(site, rng)
            rep = verify_section4(fx) if site[0] == "4" else verify_section5(fx)
            assert not rep.passed, site


def test_mutation_sensitivity_report_shape():
    out = mutation_sensitivity(seed=0, trials=5)
    assert len(out) == 5 and all(set(r) >= {"fixture", "old", "new", "detected"} for r in out)
