"""
Billiards in the star
=====================

A ball reflects at open edges and turns back at vertices.  Unfolding
replaces each reflection by a reflected copy of the star, turning the path
into one straight line; folding the line gives the path back.
"""

import cmath
import math

import a5flat.analytic as an
import a5flat.billiards as bl
import a5flat.star_complex as sc

star = sc.build_star()

# a periodic orbit: from an edge midpoint at 60 degrees to the edge
e = star.edge(1)
t = complex(e.q) - complex(e.p)
d = t / abs(t) * cmath.exp(1j * math.pi / 3)
tr = bl.trace(bl.BilliardState(e.midpoint, d, 0.0, 1), 12)
for ev in tr.events[:7]:
    print(f"t = {ev.time:6.3f}  {ev.kind:15s} {ev.ident}  at {ev.location:.4f}")

# unfold and fold back a generic path
start = bl.BilliardState(0.31 + 0.12j, cmath.exp(0.93j))
tr = bl.trace(start, 40)
line = bl.unfold(tr)
back = bl.fold(line)
print("bounces", len(tr.bounces), "crossings", line.crossings)
print("round trip error", max(abs(a.position - b.position) for a, b in zip(tr.states, back.states)))

# the same motion seen on the surface through the developing map
C = an.constant_C()
rep = bl.surface_geodesic_compare(an.inverse_develop(0.1 * C), cmath.exp(0.5j), 3.0)
print("flow vs straight line", rep.line_deviation, " folded line vs billiard", rep.billiard_deviation)
