import json
import math

import numpy as np
import pytest

from ltlab import (
    DensityField,
    PreconditionError,
    density,
    generate,
    group,
    group_constant,
    group_inequality_check,
    partition_to_json,
    root_cube,
    subdivide,
    write_partition_file,
)


def _uniform_density(n=64):
    return DensityField(1, (0.0,), (1.0,), n, np.full(n, 1.0))


def _random_density(rng, d, n):
    shape = (n,) * d
    values = rng.uniform(0.0, 1.0, size=shape) ** 2
    if rng.uniform() < 0.3:
        mask = np.zeros(shape, dtype=bool)
        sl = tuple(slice(n // 4, n - n // 8) for _ in range(d))
        mask[sl] = True
        values = np.where(mask, values, 0.0)
    if not values.any():
        values.flat[0] = 1.0
    return DensityField(d, (0.0,) * d, (1.0,) * d, n, values)


def test_group_constant_values():
    assert group_constant(1) == pytest.approx(64.0 / 3.0, rel=1e-14)
    assert group_constant(2) == pytest.approx(256.0 / 3.0, rel=1e-14)
    assert group_constant(3) == pytest.approx(1024.0 / 3.0, rel=1e-14)


def test_uniform_quarters_hand_example():
    # Uniform unit mass, lam = 0.3: quarters of mass 1/4 in two groups of two.
    rho = _uniform_density()
    tree = subdivide(rho, 0.3)
    leaves = tree.leaves()
    assert len(leaves) == 4
    assert all(tree.cubes[i].side == pytest.approx(0.25, rel=1e-14) for i in leaves)
    assert all(tree.cubes[i].mass == pytest.approx(0.25, rel=1e-12) for i in leaves)

    groups = group(tree)
    assert len(groups) == 2
    assert all(len(g.member_indices) == 2 for g in groups)

    check = group_inequality_check(groups, 1, 0.3)
    # Per cube: 16 * ((64/3)(1/0.3)(1/64) - 1/16) = 151/9; two cubes per group.
    assert check.per_group == pytest.approx((302.0 / 9.0, 302.0 / 9.0), rel=1e-12)
    assert check.total == pytest.approx(604.0 / 9.0, rel=1e-12)
    for bounds in check.bounds:
        assert bounds.lead_term == pytest.approx(0.25, rel=1e-12)
        assert bounds.lead_lower_bound == pytest.approx(16.0 * 0.15**3, rel=1e-12)
        assert bounds.lead_term >= bounds.lead_lower_bound
        assert bounds.size_sum == pytest.approx(2.0, rel=1e-12)
        assert bounds.size_upper_bound == pytest.approx((8.0 / 3.0) * 16.0 * 0.09, rel=1e-12)
        assert bounds.size_sum <= bounds.size_upper_bound


def test_root_cube_wraps_support():
    values = np.zeros(64)
    values[5:13] = 1.0
    rho = DensityField(1, (0.0,), (1.0,), 64, values)
    root = root_cube(rho)
    assert root.cells == 8
    assert root.index0 == (5,)
    assert root.corner == pytest.approx((5.0 / 64.0,), rel=1e-14)
    assert root.mass == pytest.approx(8.0 / 64.0, rel=1e-12)


def test_root_cube_single_cell():
    values = np.zeros(32)
    values[17] = 4.0
    rho = DensityField(1, (0.0,), (1.0,), 32, values)
    root = root_cube(rho)
    assert root.cells == 1
    assert root.index0 == (17,)


def test_root_cube_rejects_empty_density():
    rho = DensityField(1, (0.0,), (1.0,), 16, np.zeros(16))
    with pytest.raises(PreconditionError):
        root_cube(rho)


def test_single_leaf_degenerate_group_is_waived():
    rho = _uniform_density(16)
    tree = subdivide(rho, 2.0)
    assert tree.leaves() == [tree.root]
    groups = group(tree)
    assert len(groups) == 1
    assert groups[0].property_i_waived
    check = group_inequality_check(groups, 1, 2.0)
    assert check.bounds[0].waived


def test_subdivide_rejects_unreachable_threshold():
    # A single cell already exceeds lam, so no depth can terminate.
    rho = _uniform_density(8)
    with pytest.raises(PreconditionError):
        subdivide(rho, 0.06)


def test_subdivide_honors_max_depth():
    rho = _uniform_density(64)
    with pytest.raises(PreconditionError):
        subdivide(rho, 0.1, max_depth=2)
    tree = subdivide(rho, 0.1, max_depth=4)
    assert max(c.depth for c in tree.cubes) == 4


def test_partition_postconditions_random():
    rng = np.random.default_rng(17)
    for d, n in ((1, 128), (2, 32)):
        for _ in range(12):
            rho = _random_density(rng, d, n)
            total = rho.mass()
            lam = float(total / rng.uniform(2.0, 30.0))
            cell_max = float(rho.values.max()) * (1.0 / n) ** d
            lam = max(lam, cell_max * 1.0000001)
            tree = subdivide(rho, lam)
            leaves = tree.leaves()
            for i in leaves:
                assert tree.cubes[i].mass <= lam * (1.0 + 1e-12)
            for i in tree.internal():
                assert tree.cubes[i].mass > lam
            leaf_mass = math.fsum(tree.cubes[i].mass for i in leaves)
            assert leaf_mass == pytest.approx(tree.cubes[tree.root].mass, rel=1e-12)

            groups = group(tree)
            grouped = sorted(i for g in groups for i in g.member_indices)
            assert grouped == sorted(leaves)
            for g in groups:
                sides = [g.cubes[j].side for j in range(len(g.cubes))]
                for side in set(sides):
                    assert sides.count(side) <= 2**d
            check = group_inequality_check(groups, d, lam)
            assert all(v >= -1e-12 for v in check.per_group)


def test_internal_mass_matches_children_exactly():
    rng = np.random.default_rng(29)
    rho = _random_density(rng, 2, 32)
    lam = rho.mass() / 9.0
    tree = subdivide(rho, lam)
    for i in tree.internal():
        kids = tree.children[i]
        folded = 0.0
        for j in kids:
            folded = folded + tree.cubes[j].mass
        assert tree.cubes[i].mass == folded


def test_partition_json_roundtrip(tmp_path):
    state = generate("random_slater", 1, 128, 4, seed=14)
    rho = density(state)
    tree = subdivide(rho, rho.mass() / 5.0)
    groups = group(tree)
    payload = partition_to_json(tree, groups)
    assert payload["format"] == "ltlab-partition"
    assert sorted(payload["leaves"]) == sorted(tree.leaves())
    assert len(payload["nodes"]) == len(tree.cubes)
    assert len(payload["groups"]) == len(groups)

    path_a = tmp_path / "a.json"
    path_b = tmp_path / "b.json"
    write_partition_file(path_a, tree, groups)
    write_partition_file(path_b, tree, groups)
    assert path_a.read_bytes() == path_b.read_bytes()
    parsed = json.loads(path_a.read_text())
    assert parsed["nodes"][tree.root]["mass"] == pytest.approx(rho.mass(), rel=1e-12)
