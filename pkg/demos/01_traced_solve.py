"""Solve a small instance and look at the recorded comparisons."""
from tspchain import CostMatrix, branch_bound, enumerate_tours, tour_length
from tspchain.septree import instance_tree, normal_form

# A 4-vertex input whose rows and columns already contain a zero.
C = CostMatrix.from_rows([
    [None, 0, 2, 1],
    [2, None, 0, 2],
    [1, 2, None, 0],
    [0, 1, 2, None],
])

tour, length, trace = branch_bound(C)
print("optimal tour:", tour, "length:", length)

# brute force agrees
for t in enumerate_tours(4):
    print(f"  {t}  {tour_length(t, C)}")

# four calls: 1 branches into 2 (include) and 4 (exclude), 2 into 3
print("call tree:", instance_tree(trace))
for rec in trace.instances:
    print(f"  call {rec.instance_id}: {rec.branch:8s} parent={rec.parent} "
          f"arc={rec.chosen_arc} bound={rec.bound} exit={rec.exit}")

# Most of the 148 comparisons touch an infinite cell and carry no information.
events = trace.nontrivial()
print(f"{len(trace.events)} comparisons, {len(events)} depend on the input")
for e in events[:8]:
    nf = normal_form(e)
    print(f"  {e.describe():45s} B+={nf.bplus}  B-={nf.bminus}  const={nf.constant}")
print("  ...")
