"""
The side constant and the developing integral
=============================================

The integral of dw / sqrt(2 (1 - w**6)) from 0 sends the disk onto the
hexagon at the middle of the star.  Its value at w = 1 is the side length C.
"""

import cmath
import math

import a5flat.analytic as an

# two independent routes to the same number
raw = an.raw_integral()
beta = an.raw_constant_beta()
C = an.constant_C()
print(f"quadrature  {raw:.15f}")
print(f"Beta form   {beta:.15f}")
print(f"C           {C:.15f}")

# the six branch points go to the six hexagon vertices
for k in range(6):
    w = cmath.exp(1j * math.pi * k / 3)
    z = an.develop(an.PlanePath([0, w], allow_branch_end=True))
    print(f"F(w^{k}) / C = {z / C:.12f}")

# rotating the argument rotates the image
xi = 0.41 + 0.27j
w = cmath.exp(1j * math.pi / 3)
print("equivariance error", abs(an.develop([0, w * xi]) - w * an.develop([0, xi])))

# the footnote root squares to xi**6 - 1, a quarter turn away from the root used for eta
print("footnote / principal =", an.sqrt_footnote(xi) / an.principal_sqrt(xi))
