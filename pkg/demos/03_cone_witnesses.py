"""Every input-dependent comparison on the 4-vertex run can be satisfied by an
input whose unique optimum is the runner-up tour 1-4-2-3."""
from tspchain import CostMatrix, Tour, branch_bound, compatibility_check, tour_length
from tspchain.audit import verify_section5
from tspchain.fixtures import C_STAR
from tspchain.septree import oriented_form

C = CostMatrix.from_rows(C_STAR)
y = Tour.from_cycle([1, 4, 2, 3])
print("runner-up", y, "length", tour_length(y, C))

methods = {}
for e in branch_bound(C).trace.nontrivial():
    w = compatibility_check(e, y)
    methods[w.method] = methods.get(w.method, 0) + 1
    if e.provenance.value == "PRUNE":
        print(f"call {e.instance_id} bound test: {oriented_form(e)} > 0 holds at")
        for row in w.matrix.to_rows():
            print("   ", row)
print("witness methods:", methods)

print()
print(verify_section5().summary())
