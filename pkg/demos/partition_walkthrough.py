"""Stopping-time decomposition of a density into dyadic cubes.

Subdivision halves every cube whose mass exceeds the threshold lambda, so
leaves carry mass <= lambda while their parents carry more.  Leaves then
join groups built around the 2^d children of fully-subdivided nodes, and
each group satisfies the quantitative inequality

    sum_Q |Q|^(-2/d) (C lambda^(-1/d) M_Q^(1+2/d) - M_Q^(1+1/d)) >= 0

with C = 4^(d+2)/3.  The walkthrough prints the tree, the groups, and the
per-group values for a two-bump density.
"""

from ltlab import (
    density,
    generate,
    group,
    group_constant,
    group_inequality_check,
    subdivide,
)

state = generate("gaussian_bumps", 2, 64, 3, seed=5)
rho = density(state)
lam = 0.22 * rho.mass()
print(f"d=2 density of mass {rho.mass():.4f}, threshold lambda = {lam:.4f}")

tree = subdivide(rho, lam)
print(f"tree: {len(tree.cubes)} cubes, {len(tree.leaves())} leaves, "
      f"max depth {max(c.depth for c in tree.cubes)}")
print()
print("depth  side      mass      kind")
for i, cube in enumerate(tree.cubes):
    kind = "leaf" if not tree.children[i] else "internal"
    print(f"{cube.depth:<5d}  {cube.side:<8.4f}  {cube.mass:<8.4f}  {kind}")

# Leaf masses respect the threshold; internal masses exceed it.
assert all(tree.cubes[i].mass <= lam for i in tree.leaves())
assert all(tree.cubes[i].mass > lam for i in tree.internal())

groups = group(tree)
print()
print(f"grouping: {len(groups)} groups, constant C = {group_constant(2):.4f}")
check = group_inequality_check(groups, 2, lam)
for g, value, bounds in zip(groups, check.per_group, check.bounds):
    members = len(g.member_indices)
    print(f"  {members} cubes, mass {g.mass:.4f}: group value {value:10.4f}  "
          f"lead {bounds.lead_term:.4f} >= {bounds.lead_lower_bound:.4f}, "
          f"sizes {bounds.size_sum:.4f} <= {bounds.size_upper_bound:.4f}")
print(f"total over groups: {check.total:.4f} (nonnegative as required)")
