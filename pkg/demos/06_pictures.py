"""
Pictures
========

Write the star, a patch of the tiling and a billiard path as SVG files in
the current directory.
"""

import cmath

import a5flat.billiards as bl
from a5flat import svg

with open("star.svg", "w") as fh:
    fh.write(svg.render_star())

with open("tiling.svg", "w") as fh:
    fh.write(svg.render_tiling(4.0))

tr = bl.trace(bl.BilliardState(0.3 + 0.1j, cmath.exp(0.4j)), 25)
with open("trace.svg", "w") as fh:
    fh.write(svg.render_trace(tr.polyline, tr.events))

print("wrote star.svg, tiling.svg, trace.svg")
