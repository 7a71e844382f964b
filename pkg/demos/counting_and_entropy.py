"""Counting tilings with Kasteleyn determinants, checked by enumeration."""

import random

from dimerstats.geometry import Model, build_region, random_region, rectangle_faces
from dimerstats.kasteleyn import count_region, count_torus, entropy_limit, entropy_per_site
from dimerstats.oracle import enumerate_matchings

print("domino rectangles (faces w x h)")
for w, h in [(1, 1), (3, 1), (3, 3), (5, 3), (7, 7)]:
    print(f"  {w}x{h}: {count_region(build_region(Model.DOMINO, rectangle_faces(w, h)))}")

print("\nrandom regions: determinant vs enumeration")
rng = random.Random(3)
for k in range(6):
    model = (Model.LOZENGE, Model.DOMINO)[k % 2]
    R = random_region(model, rng.randint(2, 6), rng, max_vertices=24)
    print(f"  {model.value:<8} {len(R.vertices):>2} vertices: "
          f"det {count_region(R):>3}  enum {len(enumerate_matchings(R, cap=None)):>3}")

print("\ntori (four-determinant formula)")
for model, m, n in [(Model.LOZENGE, 2, 2), (Model.LOZENGE, 4, 4), (Model.DOMINO, 2, 2), (Model.DOMINO, 4, 4)]:
    print(f"  {model.value:<8} ({m},{n}): {count_torus(model, m, n)}")

print("\nlozenge entropy per vertex on n x n tori")
for s in (4, 8, 16, 32):
    print(f"  n={s:>2}: {entropy_per_site(Model.LOZENGE, s, s):.6f}")
print(f"  limit: {entropy_limit(Model.LOZENGE):.6f}")
