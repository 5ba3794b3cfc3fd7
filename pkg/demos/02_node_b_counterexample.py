"""Four 5-vertex inputs reach the same node of the search tree yet keep two
optimal tours alive on each side of it."""
from tspchain import AffineForm, CostMatrix, LinearSystem, Tour, branch_bound, implies
from tspchain.audit import verify_section4
from tspchain.fixtures import CHI_5, NODE_B_FORM, node_b_conditions, section4_fixture

fx = section4_fixture()
tours = {k: Tour.from_chi(v) for k, v in CHI_5.items()}

# each matrix makes its own tour the unique optimum, at length 5
for name, rows in fx.matrices.items():
    sol = branch_bound(CostMatrix.from_rows(rows))
    print(f"C_{name}: leaf {sol.tour} length {sol.length}")

# the nine comparisons that lead to the node, then the node itself
for f, rel in node_b_conditions():
    print(f"  {f} {rel} 0")
print(f"node: {NODE_B_FORM} > 0 ?")

# On the '>' side z and w are beaten by z', w'; on the '<=' side x and y by x', y'.
system = LinearSystem(5, tuple(node_b_conditions()))
for t, dom, extra in [("z", "z'", (NODE_B_FORM, ">")), ("x", "x'", (-NODE_B_FORM, ">="))]:
    concl = AffineForm.from_tour(tours[t]) - AffineForm.from_tour(tours[dom])
    cert = implies(system.extend(extra), concl)
    used = [f"{w}*({f})" for w, (f, _) in zip(cert.weights, system.extend(extra).hypotheses) if w]
    print(f"<{t} - {dom}, C> = {concl} > 0 follows from:", " + ".join(used))

print()
print(verify_section4().summary())
