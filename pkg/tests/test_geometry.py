import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from scipy.optimize import linprog

from tspchain.core import AffineForm, CostMatrix, Tour, enumerate_tours, eval_form, tour_length
from tspchain.fixtures import CHI_5, node_b_conditions, NODE_B_FORM
from tspchain.geometry import (FarkasCertificate, Incompatible, LinearSystem, NoImplication,
                               Witness, adjacent, compatibility_check, compatibility_check_form,
                               cone_member, implies, is_clique, lemma1_applicable,
                               lemma1_witness)
from tspchain.septree import oriented_form
from tspchain.solver import branch_bound

F = AffineForm.parse


def _tour5(name):
    return Tour.from_chi(CHI_5[name])


def _lengths(C, n):
    return sorted(tour_length(t, C) for t in enumerate_tours(n))


# -- cones ------------------------------------------------------------------

def test_cone_member_examples(cstar, x4, y4):
    assert cone_member(cstar, x4)
    assert not cone_member(cstar, y4)
    zero = CostMatrix.from_rows([[0] * 4 for _ in range(4)], inf_diagonal=False)
    assert all(cone_member(zero, t) for t in enumerate_tours(4))


# -- witness construction ---------------------------------------------------

def test_lemma1_small_example():
    y = Tour.from_cycle([1, 4, 2, 3])
    C = lemma1_witness(F("c31"), F("c34"), y)
    assert tour_length(y, C) == 4
    others = [tour_length(t, C) for t in enumerate_tours(4) if t != y]
    assert min(others) >= 9
    assert eval_form(F("c31 - c34"), C) == 1


def test_lemma1_two_positive_arcs_on_the_tour():
    y = Tour.from_cycle([1, 2, 3, 4, 5])
    C = lemma1_witness(F("c12 + c23"), F("c13 + c24"), y)
    assert tour_length(y, C) == 8
    assert eval_form(F("c12 + c23 - c13 - c24"), C) > 0
    assert all(tour_length(t, C) > 8 for t in enumerate_tours(5) if t != y)


def test_lemma1_positive_part_off_the_tour():
    y = Tour.from_cycle([1, 2, 3, 4, 5])
    C = lemma1_witness(F("c13 + c35"), F("c14 + c25"), y)
    assert tour_length(y, C) == 0


@pytest.mark.parametrize("bplus,bminus", [
    ("c12 + c23 + c34", "c13 + c24 + c35"),  # three positive arcs on the tour
    ("c12 + c14", "c14 + c35"),              # overlapping supports
    ("c13", "c14 + c24"),                    # unequal sizes
    ("2*c13", "c14 + c24"),                  # not 0/1
])
def test_lemma1_preconditions(bplus, bminus):
    y = Tour.from_cycle([1, 2, 3, 4, 5])
    assert lemma1_applicable(F(bplus), F(bminus), y) is not None
    with pytest.raises(ValueError):
        lemma1_witness(F(bplus), F(bminus), y)


def test_compatibility_of_cstar_events(cstar, y4):
    events = branch_bound(cstar).trace.nontrivial()
    for e in events:
        res = compatibility_check(e, y4)
        assert isinstance(res, Witness)
        # independent re-check by enumeration
        assert eval_form(oriented_form(e), res.matrix) > 0
        ly = tour_length(y4, res.matrix)
        assert all(tour_length(t, res.matrix) >= ly for t in enumerate_tours(4))


def test_compatibility_named_events(y4):
    assert isinstance(compatibility_check_form(F("c31 - c34"), y4), Witness)
    assert isinstance(compatibility_check_form(F("c14 - c12 + c42 - c41"), y4), Witness)


def test_incompatible_with_own_cone(x4, y4):
    form = AffineForm.from_tour(y4) - AffineForm.from_tour(x4)
    res = compatibility_check_form(form, y4)
    assert isinstance(res, Incompatible)
    assert res.weights == ((x4, 1),) and res.verify(form, y4)
    assert not Incompatible("forged", ((x4, 2),)).verify(form, y4)


def test_lp_witness_for_non_lemma_shape(x4):
    res = compatibility_check_form(F("2*c13 - c12 - c14"), x4)
    assert isinstance(res, Witness) and res.method == "lp"
    assert eval_form(F("2*c13 - c12 - c14"), res.matrix) > 0


def test_constant_forms():
    y = Tour.from_cycle([1, 2, 3, 4])
    assert isinstance(compatibility_check_form(AffineForm.const(1), y), Witness)
    assert isinstance(compatibility_check_form(AffineForm.const(-1), y), Incompatible)


# -- implication ------------------------------------------------------------

def _node_b_negative():
    return LinearSystem(5, tuple(node_b_conditions())).extend((-NODE_B_FORM, ">="))


def test_farkas_expected_combination():
    system = _node_b_negative()
    concl = AffineForm.from_tour(_tour5("x")) - AffineForm.from_tour(_tour5("x'"))
    assert concl == F("c14 + c31 + c42 - c12 - c34 - c41")
    # weight 1 on c12 <= c14, c31 > c32, c32 > c34, c41 <= c42
    picked = {F("c14 - c12"), F("c31 - c32"), F("c32 - c34"), F("c42 - c41")}
    weights = tuple(Fraction(int(f in picked)) for f, _ in system.hypotheses)
    assert sum(weights) == 4
    assert FarkasCertificate(weights).verify(system, concl)
    found = implies(system, concl)
    assert isinstance(found, FarkasCertificate) and found.verify(system, concl)


def test_farkas_identity():
    system = LinearSystem(4, ((F("c13 - c12"), ">="), (F("c21 - c23"), ">")))
    cert = implies(system, F("c21 - c23"))
    assert isinstance(cert, FarkasCertificate)
    assert cert.weights == (0, 1)


def test_no_implication_has_countermodel():
    system = LinearSystem(4, ((F("c13 - c12"), ">="),))
    res = implies(system, F("c14 - c12"))
    assert isinstance(res, NoImplication)
    C = res.countermodel
    assert system.holds_at(C) and eval_form(F("c14 - c12"), C) <= 0


def test_weak_hypotheses_do_not_give_strict_conclusions():
    system = LinearSystem(4, ((F("c13 - c12"), ">="),))
    assert isinstance(implies(system, F("c13 - c12")), NoImplication)


def test_implies_is_monotone():
    system = _node_b_negative()
    concl = AffineForm.from_tour(_tour5("y")) - AffineForm.from_tour(_tour5("y'"))
    assert isinstance(implies(system, concl), FarkasCertificate)
    bigger = system.extend((F("c53 - c52"), ">="), (F("c24 - c21"), ">"))
    cert = implies(bigger, concl)
    assert isinstance(cert, FarkasCertificate) and cert.verify(bigger, concl)


def test_implies_rejects_constants():
    with pytest.raises(ValueError):
        implies(LinearSystem(4, ((F("c13 - c12 + 1"), ">"),)), F("c13"))


# -- adjacency --------------------------------------------------------------

def _adjacent_full_lp(x, y):
    """Float cross-check over every tour, without pruning."""
    tours = enumerate_tours(x.n)
    A = np.array([t.chi for t in tours], dtype=float).T
    mid = (np.array(x.chi) + np.array(y.chi)) / 2
    A_eq = np.vstack([A, np.ones(len(tours))])
    b_eq = np.append(mid, 1.0)
    cost = np.array([1.0 if t in (x, y) else 0.0 for t in tours])
    res = linprog(cost, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun > 1 - 1e-9


@pytest.mark.parametrize("n", [4, 5])
def test_small_polytopes_are_neighborly(n):
    tours = enumerate_tours(n)
    assert all(adjacent(a, b) for a, b in combinations(tours, 2))


def test_adjacency_matches_full_lp_at_n6():
    rng = random.Random(0)
    pairs = list(combinations(enumerate_tours(6), 2))
    sample = rng.sample(pairs, 150)
    verdicts = [adjacent(a, b) for a, b in sample]
    assert verdicts == [_adjacent_full_lp(a, b) for a, b in sample]
    assert not all(verdicts)


def test_adjacency_matches_full_lp_at_n5_sample():
    pairs = list(combinations(enumerate_tours(5), 2))[::11]
    assert all(_adjacent_full_lp(a, b) for a, b in pairs)


def test_adjacency_symmetric_and_errors(x4, y4):
    assert adjacent(x4, y4) == adjacent(y4, x4)
    with pytest.raises(ValueError):
        adjacent(x4, x4)
    with pytest.raises(ValueError):
        adjacent(x4, Tour.from_cycle([1, 2, 3, 4, 5]))


def test_clique_examples():
    assert is_clique([_tour5(k) for k in "xyzw"])
    assert is_clique(list(enumerate_tours(4)))
    assert is_clique([Tour.from_cycle([1, 2, 3])])
    with pytest.raises(ValueError):
        is_clique([Tour.from_cycle([1, 2, 3])] * 2)
