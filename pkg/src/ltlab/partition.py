"""Stopping-time dyadic partitions of a density's support and cube groups.

The root is the smallest grid-aligned cube with a power-of-two number of
cells per side that contains every cell where rho > 0 (it may overhang the
sampled box; the overhang carries no mass).  A cube splits into its 2^d
half-side children while its mass exceeds the threshold lambda, so every
leaf has mass <= lambda and every internal node has mass > lambda.

Masses at all scales come from one shared pyramid: level j+1 is built from
level j by accumulating the 2^d child blocks in lexicographic offset order.
A parent's stored mass is therefore bitwise equal to the left-fold sum of
its children's stored masses, which is the additivity the downstream
inequalities rely on.

Leaves are then collected into groups: the 2^d children of a fully stopped
parent form a base group (mass > lambda because the parent split), and the
leaf children of partially stopped nodes attach to the carried group with
the smallest base volume.  Attachments at distinct levels have distinct
sides, so a group holds at most 2^d cubes of any one side.  The group
inequality sums |Q|^(-2/d) * (C*lambda^(-1/d)*M^(1+2/d) - M^(1+1/d)) over a
group with C = 4^(d+2)/3 and is nonnegative whenever the group's total mass
exceeds lambda.
"""

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .states import DensityField

_PARTITION_FORMAT = "ltlab-partition"


def group_constant(d: int) -> float:
    """C = 4^(d+2)/3 in the per-group inequality."""
    return 4.0 ** (d + 2) / 3.0


@dataclass(frozen=True)
class DyadicCube:
    """One cube of the partition; geometry floats plus exact grid bookkeeping.

    index0/cells give the cube's cell range [index0, index0 + cells) per
    axis at the density's resolution; index0 + cells may exceed the grid on
    overhanging root padding.
    """

    corner: tuple[float, ...]
    side: float
    depth: int
    mass: float
    index0: tuple[int, ...]
    cells: int

    @property
    def volume(self) -> float:
        return self.side ** len(self.corner)


@dataclass
class PartitionTree:
    dimension: int
    lam: float
    max_depth: int
    cubes: list[DyadicCube]
    children: list[tuple[int, ...]]
    root: int = 0
    grid_n: int = 0
    box_corner: tuple[float, ...] = ()
    box_sides: tuple[float, ...] = ()

    def leaves(self) -> list[int]:
        return [i for i, kids in enumerate(self.children) if not kids]

    def internal(self) -> list[int]:
        return [i for i, kids in enumerate(self.children) if kids]


@dataclass
class CubeGroup:
    """A set of leaves treated as one unit by the group inequality."""

    member_indices: list[int]
    cubes: list[DyadicCube]
    base_count: int
    base_volume: float
    base_corner: tuple[float, ...]
    property_i_waived: bool = False
    attached_indices: list[int] = field(default_factory=list)

    @property
    def mass(self) -> float:
        return sum(c.mass for c in self.cubes)

    @property
    def smallest_volume(self) -> float:
        return min(c.volume for c in self.cubes)


def _support_block(rho: DensityField) -> tuple[np.ndarray, np.ndarray, int]:
    """Cell masses of the padded support block, its low corner index, and span."""
    widths = rho.cell_widths
    if np.abs(widths - widths[0]).max() > 1e-12 * widths[0]:
        raise PreconditionError("dyadic cubes need cubic cells; make sides/n equal per axis")
    support = np.argwhere(rho.values > 0.0)
    if support.size == 0:
        raise PreconditionError("density has empty support")
    lo = support.min(axis=0)
    hi = support.max(axis=0) + 1
    extent = int((hi - lo).max())
    span = 1 << (extent - 1).bit_length()
    d = rho.dimension
    block = np.zeros((span,) * d)
    copy_to = tuple(
        slice(0, min(int(lo[ax]) + span, rho.grid_n) - int(lo[ax])) for ax in range(d)
    )
    copy_from = tuple(
        slice(int(lo[ax]), min(int(lo[ax]) + span, rho.grid_n)) for ax in range(d)
    )
    block[copy_to] = rho.values[copy_from]
    return block * rho.cell_volume, lo, span


def _mass_pyramid(cell_masses: np.ndarray, d: int) -> list[np.ndarray]:
    """pyramid[j] holds the masses of all aligned 2^j-cell cubes of the block."""
    pyramid = [cell_masses]
    while pyramid[-1].shape[0] > 1:
        level = pyramid[-1]
        folded = None
        for offsets in itertools.product((0, 1), repeat=d):
            view = level[tuple(slice(off, None, 2) for off in offsets)]
            folded = view.copy() if folded is None else folded + view
        pyramid.append(folded)
    return pyramid


def root_cube(rho: DensityField) -> DyadicCube:
    """Smallest grid-aligned power-of-two cube containing the support of rho."""
    cell_masses, lo, span = _support_block(rho)
    pyramid = _mass_pyramid(cell_masses, rho.dimension)
    h = float(rho.cell_widths[0])
    corner = tuple(float(rho.corner[ax] + h * int(lo[ax])) for ax in range(rho.dimension))
    return DyadicCube(
        corner=corner,
        side=span * h,
        depth=0,
        mass=float(pyramid[-1].reshape(())),
        index0=tuple(int(x) for x in lo),
        cells=span,
    )


def subdivide(rho: DensityField, lam: float, max_depth: int | None = None) -> PartitionTree:
    """Split cubes until every leaf mass is <= lam.

    Preconditions: lam > 0 and lam >= the largest single-cell mass (the
    subdivision could not stop otherwise); if max_depth is given, the
    stopping time must be reached within it.  Nodes are stored in depth-
    first preorder with children in lexicographic corner order.
    """
    if not lam > 0.0:
        raise PreconditionError(f"lambda must be positive, got {lam!r}")
    cell_masses, lo, span = _support_block(rho)
    d = rho.dimension
    pyramid = _mass_pyramid(cell_masses, d)
    cell_max = float(pyramid[0].max())
    if lam < cell_max:
        raise PreconditionError(
            f"lambda {lam} is below the largest cell mass {cell_max}; subdivision cannot stop"
        )
    h = float(rho.cell_widths[0])
    top = len(pyramid) - 1

    cubes: list[DyadicCube] = []
    children: list[tuple[int, ...]] = []
    deepest = 0

    def make_cube(level: int, rel: tuple[int, ...]) -> DyadicCube:
        cells = 1 << level
        index0 = tuple(int(lo[ax]) + rel[ax] * cells for ax in range(d))
        corner = tuple(float(rho.corner[ax] + h * index0[ax]) for ax in range(d))
        return DyadicCube(
            corner=corner,
            side=cells * h,
            depth=top - level,
            mass=float(pyramid[level][rel]),
            index0=index0,
            cells=cells,
        )

    def build(level: int, rel: tuple[int, ...]) -> int:
        nonlocal deepest
        cube = make_cube(level, rel)
        index = len(cubes)
        cubes.append(cube)
        children.append(())
        deepest = max(deepest, cube.depth)
        if cube.mass > lam:
            if level == 0:
                raise PreconditionError("cell mass above lambda despite precheck")
            if max_depth is not None and cube.depth >= max_depth:
                raise PreconditionError(
                    f"stopping time needs depth > {max_depth} at cube {cube.corner}"
                )
            kid_ids = []
            for offsets in itertools.product((0, 1), repeat=d):
                kid_rel = tuple(2 * rel[ax] + offsets[ax] for ax in range(d))
                kid_ids.append(build(level - 1, kid_rel))
            children[index] = tuple(kid_ids)
        return index

    build(top, (0,) * d)
    return PartitionTree(
        dimension=d,
        lam=lam,
        max_depth=deepest,
        cubes=cubes,
        children=children,
        root=0,
        grid_n=rho.grid_n,
        box_corner=tuple(float(x) for x in rho.corner),
        box_sides=tuple(float(x) for x in rho.sides),
    )


def group(tree: PartitionTree) -> list[CubeGroup]:
    """Collect the leaves into groups whose masses exceed lambda.

    Children of fully stopped parents become base groups; stray leaf
    children of partially stopped nodes attach to the carried group with
    the smallest base volume (ties broken by lexicographic base corner).
    Only a single-leaf tree can produce a group violating mass > lambda,
    and that group is flagged property_i_waived.
    """
    groups: list[CubeGroup] = []

    def visit(index: int) -> CubeGroup:
        """Returns the subtree's attachment target (smallest base volume)."""
        kids = tree.children[index]
        leaf_kids = [k for k in kids if not tree.children[k]]
        internal_kids = [k for k in kids if tree.children[k]]
        if not internal_kids:
            new = CubeGroup(
                member_indices=list(kids),
                cubes=[tree.cubes[k] for k in kids],
                base_count=len(kids),
                base_volume=tree.cubes[kids[0]].volume,
                base_corner=tree.cubes[kids[0]].corner,
            )
            groups.append(new)
            return new
        carried = [visit(k) for k in internal_kids]
        target = min(carried, key=lambda g: (g.base_volume, g.base_corner))
        for k in leaf_kids:
            target.member_indices.append(k)
            target.attached_indices.append(k)
            target.cubes.append(tree.cubes[k])
        return target

    root = tree.root
    if not tree.children[root]:
        cube = tree.cubes[root]
        lone = CubeGroup(
            member_indices=[root],
            cubes=[cube],
            base_count=1,
            base_volume=cube.volume,
            base_corner=cube.corner,
            property_i_waived=not cube.mass > tree.lam,
        )
        return [lone]
    visit(root)
    return groups


@dataclass(frozen=True)
class GroupBounds:
    """The two intermediate estimates behind one group's inequality."""

    lead_term: float
    lead_lower_bound: float
    size_sum: float
    size_upper_bound: float
    waived: bool


@dataclass(frozen=True)
class GroupInequalityResult:
    total: float
    per_group: tuple[float, ...]
    bounds: tuple[GroupBounds, ...]


def group_inequality_check(groups: list[CubeGroup], d: int, lam: float) -> GroupInequalityResult:
    """sum_Q |Q|^(-2/d) * (C*lam^(-1/d)*M_Q^(1+2/d) - M_Q^(1+1/d)) per group.

    With C = 4^(d+2)/3 each non-waived group's sum is nonnegative: some base
    cube carries mass >= lam/2^d, so the largest |Q|^(-2/d)*M^(1+2/d) term
    is at least m^(-2/d)*(lam/2^d)^(1+2/d), while the subtracted sum is at
    most (4/3)*2^d*m^(-2/d)*lam^(1+1/d) because masses are <= lam and each
    side occurs at most 2^d times.  Both intermediates are reported.
    """
    if not lam > 0.0:
        raise PreconditionError(f"lambda must be positive, got {lam!r}")
    c_grp = group_constant(d)
    per_group = []
    bounds = []
    for grp in groups:
        lead = 0.0
        size_sum = 0.0
        value = 0.0
        for cube in grp.cubes:
            inv = cube.volume ** (-2.0 / d)
            tf_term = inv * cube.mass ** (1.0 + 2.0 / d)
            size_term = inv * cube.mass ** (1.0 + 1.0 / d)
            lead = max(lead, tf_term)
            size_sum += size_term
            value += c_grp * lam ** (-1.0 / d) * tf_term - size_term
        m_vol = grp.smallest_volume
        per_group.append(value)
        bounds.append(
            GroupBounds(
                lead_term=lead,
                lead_lower_bound=m_vol ** (-2.0 / d) * (lam / 2**d) ** (1.0 + 2.0 / d),
                size_sum=size_sum,
                size_upper_bound=(4.0 / 3.0) * 2**d * m_vol ** (-2.0 / d) * lam ** (1.0 + 1.0 / d),
                waived=grp.property_i_waived,
            )
        )
    return GroupInequalityResult(
        total=math.fsum(per_group), per_group=tuple(per_group), bounds=tuple(bounds)
    )


def partition_to_json(tree: PartitionTree, groups: list[CubeGroup] | None = None) -> dict:
    """A JSON-ready dict with every node and, optionally, the leaf groups."""
    payload = {
        "format": _PARTITION_FORMAT,
        "version": 1,
        "dimension": tree.dimension,
        "lambda": tree.lam,
        "max_depth": tree.max_depth,
        "grid_n": tree.grid_n,
        "box_corner": list(tree.box_corner),
        "box_sides": list(tree.box_sides),
        "root": tree.root,
        "nodes": [
            {
                "corner": list(cube.corner),
                "side": cube.side,
                "depth": cube.depth,
                "mass": cube.mass,
                "children": list(tree.children[i]),
            }
            for i, cube in enumerate(tree.cubes)
        ],
        "leaves": tree.leaves(),
    }
    if groups is not None:
        payload["groups"] = [
            {
                "members": list(grp.member_indices),
                "base_count": grp.base_count,
                "property_i_waived": grp.property_i_waived,
            }
            for grp in groups
        ]
    return payload


def write_partition_file(path, tree: PartitionTree, groups: list[CubeGroup] | None = None) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(partition_to_json(tree, groups), handle, sort_keys=True, separators=(",", ":"))
        handle.write("\n")
