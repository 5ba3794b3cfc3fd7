"""Exact branch and bound for the asymmetric TSP with a recorded chain of
linear comparisons, plus the geometry needed to audit such chains."""
from .core import (INF, AffineForm, CostMatrix, Tour, enumerate_tours, eval_form,
                   format_matrix, load_matrix, parse_matrix, tour_length, unique_optimum)
from .solver import Solution, branch_bound
from .septree import (ComparisonEvent, TraceChain, dumps_trace, filter_nontrivial,
                      loads_trace, normal_form, replay_check)
from .geometry import (FarkasCertificate, Incompatible, LinearSystem, NoImplication,
                       Witness, adjacent, compatibility_check, cone_member, implies,
                       is_clique, lemma1_witness)
from .audit import (AuditReport, audit_chain, lemma1_property_suite, mutation_sensitivity,
                    verify_section4, verify_section5)

__version__ = "0.1.0"

__all__ = [
    "INF", "AffineForm", "CostMatrix", "Tour", "enumerate_tours", "eval_form",
    "format_matrix", "load_matrix", "parse_matrix", "tour_length", "unique_optimum",
    "Solution", "branch_bound", "ComparisonEvent", "TraceChain", "dumps_trace",
    "filter_nontrivial", "loads_trace", "normal_form", "replay_check",
    "FarkasCertificate", "Incompatible", "LinearSystem", "NoImplication", "Witness",
    "adjacent", "compatibility_check", "cone_member", "implies", "is_clique",
    "lemma1_witness", "AuditReport", "audit_chain", "lemma1_property_suite",
    "mutation_sensitivity", "verify_section4", "verify_section5",
]
