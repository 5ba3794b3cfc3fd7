"""Which pairs of tours span an edge of the tour polytope?"""
from itertools import combinations

from tspchain import adjacent, enumerate_tours

for n in (4, 5, 6):
    pairs = list(combinations(enumerate_tours(n), 2))
    hits = sum(adjacent(a, b) for a, b in pairs)
    print(f"n={n}: {hits}/{len(pairs)} pairs adjacent")

# at n = 6 a midpoint can be rewritten with other tours
a, b = next((a, b) for a, b in combinations(enumerate_tours(6), 2) if not adjacent(a, b))
print("first non-adjacent pair:", a, b)
