"""A tour of the semiclassical constants and their duality.

The kinetic constant K(d, q) multiplies the Thomas-Fermi integral in the
kinetic lower bound; the eigenvalue constant L(d) multiplies mu^(1+d/2) in
the Riesz-mean asymptotics.  The two are Legendre-dual:

    L = (1 + d/2)^(-1) * ((1 + 2/d) K)^(-d/2)

and the map is an involution, which this script checks numerically.
"""

import math

from ltlab import (
    SemiclassicalConstants,
    eigenvalue_constant_from_kinetic,
    kinetic_constant_from_eigenvalue,
)

print("d  q  ball volume     K(d,q)          L(d,q)")
for d in (1, 2, 3, 4):
    for q in (1, 2):
        c = SemiclassicalConstants.for_dimension(d, q)
        print(f"{d}  {q}  {c.ball_volume:<14.10f}  {c.kinetic:<14.10f}  {c.eigenvalue:.10f}")

# The d = 1 and d = 3 values have familiar closed forms.
print()
print("K(1,1) - pi^2/3              =", SemiclassicalConstants.for_dimension(1, 1).kinetic - math.pi**2 / 3)
print("K(3,1) - (3/5)(6 pi^2)^(2/3) =",
      SemiclassicalConstants.for_dimension(3, 1).kinetic - 0.6 * (6 * math.pi**2) ** (2 / 3))
print("L(1,1) - 2/(3 pi)            =",
      SemiclassicalConstants.for_dimension(1, 1).eigenvalue - 2 / (3 * math.pi))

# Round-tripping through the duality returns the input to machine accuracy.
print()
for d in (1, 2, 3, 5):
    kin = SemiclassicalConstants.for_dimension(d, 1).kinetic
    back = kinetic_constant_from_eigenvalue(d, eigenvalue_constant_from_kinetic(d, kin))
    print(f"d={d}: K -> L -> K relative drift {abs(back - kin) / kin:.2e}")
