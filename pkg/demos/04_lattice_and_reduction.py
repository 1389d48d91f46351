"""
Translations and the fundamental domain
=======================================

All star vertices, the centre and the translation vectors live in the
Eisenstein lattice Z[omega].  Rotations normalise it, the group of rotations
and translations acts freely off the lattice, and every point of the plane
can be pulled back into the star.
"""

import random

import a5flat.symmetry as sy
from a5flat.exact_plane import CycNum

for k, u in sy.LATTICE_GENERATORS.items():
    print(f"u{k} = {u}   (coords {sy.lattice_coords(u)})")

# the tabulated rule R^h u_k = +-u_(h+k) only holds for even h
for h in range(6):
    row = "".join("x" if sy.closure_rule_holds(h, k) else "." for k in range(1, 7) if h + k >= 1)
    print(f"h = {h}: {row}")
print("R u1 =", sy.generator_image(1, 1), "= u1 + u3")

rng = random.Random(1)
g = sy.random_affine(rng)
z = CycNum(1, 1, 0, 2)
print(g, "moves", z, "to", sy.act(g, z), "free:", sy.freeness_check(g, z))

for z in (CycNum(3, 1, -2, 0), 4.3 - 2.2j):
    z0, h = sy.reduce_to_fundamental(z)
    print(f"{z} = {h} applied to {z0}")

for key, (segs, pairs) in sy.tiling_edge_classes(4.0).items():
    print(f"direction {key}: {len(segs)} tiling edges, star pairs {sorted(pairs)}")
