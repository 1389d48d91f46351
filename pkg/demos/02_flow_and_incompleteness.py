"""
Holomorphic Hamiltonian flow
============================

Real-time integral curves of X_H with H = eta**2 / 2 + xi**6 - 1, developed
into the plane, run along straight lines at unit speed.  Some lines reach
a hexagon vertex (a branch point) in finite time, others run off to
infinity in xi while their image lands at the middle of a tip triangle.
"""

import cmath
import math

import numpy as np

import a5flat.analytic as an

C = an.constant_C()

start = an.SurfacePoint.on_sheet(0.2 + 0.1j)
alpha = cmath.exp(0.7j)
tr = an.hamiltonian_flow(start, alpha, 0.5)
dev = an.developed_flow(tr)
line = an.developing_map(start) + tr.times * alpha
print(f"{tr.n_steps} steps, max |H| {tr.max_drift:.1e}")
print("distance of the developed curve from a straight line:", np.max(np.abs(dev - line)))

# through the midpoint of the top hexagon edge, along that edge
mid = an.inverse_develop(1j * math.sqrt(3) / 2 * C)
fwd = an.hamiltonian_flow(mid, 1.0, 2 * C)
bwd = an.hamiltonian_flow(mid, 1.0, -2 * C)
print("forward hits", fwd.branch_point, "at t =", fwd.incomplete_at)
print("backward hits", bwd.branch_point, "at t =", bwd.incomplete_at)
print("edge traversal time", fwd.incomplete_at - bwd.incomplete_at, "C =", C)

# toward a tip: xi escapes to infinity
up = an.hamiltonian_flow(an.SurfacePoint.on_sheet(0), cmath.exp(1j * math.pi / 6), 3.0)
print("escaped:", up.escaped, "at t =", up.incomplete_at)
print("expected", math.gamma(1 / 6) * math.gamma(1 / 3) / math.gamma(1 / 2) / (6 * math.sqrt(2)))
