"""
Gluing the star
===============

Edges of the star are glued in parallel pairs by the reflections
S_m(z) = omega**(2m+1) conj(z).  The quotient by the rotations is a closed
surface of genus 2.
"""

import a5flat.star_complex as sc
import a5flat.symmetry as sy

star = sc.build_star()
for e in star.edges:
    print(f"{e.name:3s} label {e.label:+d}  {e.start} -> {e.end}  normal {e.normal}")

print()
for p in sc.edge_pairs():
    print(f"pair {p.name}: S{p.m} glues {p.edges[0].name} and {p.edges[1].name}, labels {p.labels}")

print("orbits of pairs:", [sorted(o) for o in sy.gvee_orbits()])
print("orbits of vertices:", [sorted(o) for o in sy.vertex_orbits()])

for level in ("base", "identified", "orbit"):
    t = sc.quotient_triangulation(level)
    print(f"{level:10s} V,E,F = {t.counts}  chi = {t.euler}")

orbit = sc.quotient_triangulation("orbit")
print("genus", sc.genus_from_counts(*orbit.counts), "closed:", orbit.is_closed_surface())
fine = sc.barycentric_refinement(orbit)
print("after refinement", fine.counts, "chi", fine.euler)

# the xi-sphere and the two-sheeted cover branched over the six roots
for t in (sc.sphere_triangulation(), sc.double_cover_triangulation()):
    print(t.name, t.counts, "genus", sc.genus_from_counts(*t.counts))
