"""Ball volumes, the two-sided growth bound, and the growth dimension.

Volumes are degree sums of closed balls.  A ball in G_n is an exact ball of
the infinite graph as long as its radius stays below the center's distance to
the top boundary (its "safe radius"), so every number below is exact for the
limit graph, only the choice of centers is finite.
Run with:  python3 demos/03_growth_dimension.py
"""

import math

from ssgrowth import builtin, check_growth_sandwich, estimate_dimensions, generate
from ssgrowth.growth import global_growth

sier = builtin("sierpinski")
hg = generate(sier, 7)
print("Sierpinski G_7, lower and upper growth at r = 2^n:")
for n in range(1, 6):
    g = global_growth(hg, 2 ** n)
    print(f"  r={2 ** n:3d}  min V={g.lower:6d}  max V={g.upper:6d}  (3^n*6={3 ** n * 6}, 3^n*24+18={3 ** n * 24 + 18})")

rep = check_growth_sandwich(sier, n_values=range(1, 5), depth=7)
print(f"growth sandwich on G_7: {rep.status}\n")

print("least-squares slopes of log V against log r on the radii nu, nu^2, ...:")
for name, n in (("line", 9), ("sierpinski", 7), ("tree4", 8)):
    est = estimate_dimensions(generate(builtin(name), n))
    print(f"  {name:10s} G_{n}: lower {est.slope_lower:.3f}  upper {est.slope_upper:.3f}  "
          f"log mu/log nu = {est.dim_predicted:.3f}")

# The fitted slope for the tree is held down by its small radii: the lower
# growth at r = 2, 4, 8 is dominated by leaves.  Slopes over three consecutive
# radii keep rising towards log 4 / log 2 = 2.
est = estimate_dimensions(generate(builtin("tree4"), 9))
print("\ntree4 G_9 local slopes of the lower growth:", [round(s, 3) for s in est.window_slopes_lower])
print("target:", math.log(4) / math.log(2))
