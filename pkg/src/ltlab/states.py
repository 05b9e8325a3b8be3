"""Finite-rank fermionic states on box grids and their energy functionals.

A state is a finite family of orbitals u_i with occupations lambda_i >= 0,
sampled at the midpoints of a uniform grid over an axis-aligned box, with
Dirichlet (vanishing) boundary behaviour.  All integrals are midpoint sums,
integral f ~ h^d * sum_cells f.

Kinetic energies are spectral: each orbital is expanded in the sine basis
sin(pi*m*(x - corner)/L), whose restriction to cell midpoints is exactly
orthogonal under the midpoint rule, the gradient is synthesized from the
cosine series term by term, and the midpoint sum of its square reproduces
the Parseval value of the truncated series.  Restricting the same gradient
field to a sub-box therefore splits the total kinetic energy additively
across disjoint cubes.  The top mode m = n has vanishing cosine values at
midpoints and is dropped; generators keep their states inside modes < n.

The density gradient term integral |grad sqrt(rho)|^2 is deliberately on a
different footing: 4th-order centered finite differences (one-sided at the
boundary), since sqrt(rho) is generally not band-limited.  At kinks of
sqrt(rho) the stencil underestimates, which slackens, never fakes, the
inequalities that carry the term on their right-hand side.
"""

import json
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy import fft

from .errors import CubeAlignmentError, PreconditionError

GRADIENT_FLOOR = 1e-14

ORTHONORMALITY_TOL = 1e-10

_ALIGNMENT_TOL = 1e-9

_STATE_FORMAT = "ltlab-state"


@dataclass(eq=False)
class OrbitalSet:
    """Occupied orbitals sampled on the midpoint grid of a box.

    orbitals has shape (num_orbitals, n, ..., n) with d trailing axes;
    occupations are the weights lambda_i >= 0.
    """

    dimension: int
    corner: np.ndarray
    sides: np.ndarray
    grid_n: int
    orbitals: np.ndarray
    occupations: np.ndarray
    spin_states: int = 1
    _gradients: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.corner = np.asarray(self.corner, dtype=float)
        self.sides = np.asarray(self.sides, dtype=float)
        self.orbitals = np.asarray(self.orbitals, dtype=float)
        self.occupations = np.asarray(self.occupations, dtype=float)
        self.validate()

    def validate(self) -> None:
        d, n = self.dimension, self.grid_n
        if d < 1:
            raise PreconditionError("dimension must be >= 1")
        if n < 1:
            raise PreconditionError("grid_n must be >= 1")
        if self.corner.shape != (d,) or self.sides.shape != (d,):
            raise PreconditionError("corner and sides must have one entry per axis")
        if not np.all(self.sides > 0.0):
            raise PreconditionError("box side lengths must be positive")
        if self.orbitals.shape != (len(self.occupations),) + (n,) * d:
            raise PreconditionError(
                f"orbitals shape {self.orbitals.shape} does not match "
                f"{len(self.occupations)} orbitals on a {n}^{d} grid"
            )
        if np.any(self.occupations < 0.0):
            raise PreconditionError("occupations must be nonnegative")
        if self.spin_states < 1:
            raise PreconditionError("spin_states must be >= 1")

    @property
    def num_orbitals(self) -> int:
        return self.orbitals.shape[0]

    @property
    def cell_widths(self) -> np.ndarray:
        return self.sides / self.grid_n

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.cell_widths))

    def axis_centers(self, axis: int) -> np.ndarray:
        h = self.sides[axis] / self.grid_n
        return self.corner[axis] + h * (np.arange(self.grid_n) + 0.5)


@dataclass(eq=False)
class DensityField:
    """A nonnegative scalar field on the same midpoint grid as an OrbitalSet."""

    dimension: int
    corner: np.ndarray
    sides: np.ndarray
    grid_n: int
    values: np.ndarray

    def __post_init__(self):
        self.corner = np.asarray(self.corner, dtype=float)
        self.sides = np.asarray(self.sides, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid_n,) * self.dimension:
            raise PreconditionError("density values do not match the grid")
        if np.any(self.values < 0.0):
            raise PreconditionError("density must be nonnegative")

    @property
    def cell_widths(self) -> np.ndarray:
        return self.sides / self.grid_n

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.cell_widths))

    def mass(self) -> float:
        return float(self.values.sum() * self.cell_volume)


def _axis_derivative(values: np.ndarray, length: float, axis: int) -> np.ndarray:
    """Spectral derivative along one axis of sine-series data at midpoints."""
    v = np.moveaxis(values, axis, -1)
    n = v.shape[-1]
    coeff = fft.dst(v, type=2, axis=-1)
    series = np.zeros_like(coeff)
    m = np.arange(1, n)
    series[..., 1:] = coeff[..., :-1] * (m * (math.pi / length) / (2.0 * n))
    grad = fft.dct(series, type=3, axis=-1)
    return np.moveaxis(grad, -1, axis)


def orbital_gradients(state: OrbitalSet) -> np.ndarray:
    """Gradient fields of every orbital, shape (num_orbitals, d, n, ..., n).

    Computed once and cached on the state.
    """
    if state._gradients is None:
        grads = np.stack(
            [
                _axis_derivative(state.orbitals, float(state.sides[ax]), 1 + ax)
                for ax in range(state.dimension)
            ],
            axis=1,
        )
        state._gradients = grads
    return state._gradients


def kinetic_energy(state: OrbitalSet) -> float:
    """T = sum_i lambda_i * integral |grad u_i|^2 (midpoint sum of spectral gradients)."""
    grads = orbital_gradients(state)
    flat = grads.reshape(state.num_orbitals, -1)
    per_orbital = np.einsum("ij,ij->i", flat, flat) * state.cell_volume
    return float(np.dot(state.occupations, per_orbital))


def density(state: OrbitalSet) -> DensityField:
    """rho = sum_i lambda_i * u_i^2 on the same grid."""
    values = np.einsum("i,i...->...", state.occupations, state.orbitals**2)
    return DensityField(
        dimension=state.dimension,
        corner=state.corner,
        sides=state.sides,
        grid_n=state.grid_n,
        values=values,
    )


def _cube_slices(corner: np.ndarray, sides: np.ndarray, n: int, cube) -> tuple[slice, ...]:
    """Map an aligned cube to grid index slices, clipped to the box.

    The cube must have its corner on a cell boundary and a side equal to a
    whole number of cells; parts outside the box are dropped (all fields
    vanish there).
    """
    widths = np.asarray(sides, dtype=float) / n
    cube_corner = np.asarray(cube.corner, dtype=float)
    side = float(cube.side)
    if side <= 0.0:
        raise PreconditionError("cube side must be positive")
    slices = []
    for ax in range(len(widths)):
        h = widths[ax]
        t0 = (cube_corner[ax] - corner[ax]) / h
        i0 = round(t0)
        span = side / h
        j = round(span)
        if abs(t0 - i0) > _ALIGNMENT_TOL * max(1.0, abs(t0)):
            raise CubeAlignmentError(f"cube corner off the grid on axis {ax}: offset {t0} cells")
        if j < 1 or abs(span - j) > _ALIGNMENT_TOL * span:
            raise CubeAlignmentError(f"cube side is {span} cells on axis {ax}, expected an integer")
        slices.append(slice(max(i0, 0), min(i0 + j, n)))
    return tuple(slices)


def local_kinetic_energy(state: OrbitalSet, cube) -> float:
    """Kinetic energy carried by the cells inside an aligned cube.

    Summing over the cubes of a partition of the box recovers
    kinetic_energy(state) exactly, because the same gradient field is
    sliced everywhere.
    """
    slices = _cube_slices(state.corner, state.sides, state.grid_n, cube)
    if any(s.start >= s.stop for s in slices):
        return 0.0
    grads = orbital_gradients(state)
    block = grads[(slice(None), slice(None)) + slices]
    flat = np.ascontiguousarray(block).reshape(state.num_orbitals, -1)
    per_orbital = np.einsum("ij,ij->i", flat, flat) * state.cell_volume
    return float(np.dot(state.occupations, per_orbital))


def local_mass(rho: DensityField, cube) -> float:
    """integral_Q rho as a midpoint sum over the cube's cells."""
    slices = _cube_slices(rho.corner, rho.sides, rho.grid_n, cube)
    if any(s.start >= s.stop for s in slices):
        return 0.0
    return float(rho.values[slices].sum() * rho.cell_volume)


def _fd_axis_derivative(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """4th-order finite-difference derivative along one axis at midpoints."""
    v = np.moveaxis(values, axis, -1)
    n = v.shape[-1]
    g = np.empty_like(v)
    if n >= 5:
        g[..., 2:-2] = (
            -v[..., 4:] + 8.0 * v[..., 3:-1] - 8.0 * v[..., 1:-3] + v[..., :-4]
        ) / (12.0 * h)
        head = (
            -25.0 * v[..., 0] + 48.0 * v[..., 1] - 36.0 * v[..., 2]
            + 16.0 * v[..., 3] - 3.0 * v[..., 4]
        ) / (12.0 * h)
        head2 = (
            -3.0 * v[..., 0] - 10.0 * v[..., 1] + 18.0 * v[..., 2]
            - 6.0 * v[..., 3] + v[..., 4]
        ) / (12.0 * h)
        tail = (
            25.0 * v[..., -1] - 48.0 * v[..., -2] + 36.0 * v[..., -3]
            - 16.0 * v[..., -4] + 3.0 * v[..., -5]
        ) / (12.0 * h)
        tail2 = (
            3.0 * v[..., -1] + 10.0 * v[..., -2] - 18.0 * v[..., -3]
            + 6.0 * v[..., -4] - v[..., -5]
        ) / (12.0 * h)
        g[..., 0] = head
        g[..., 1] = head2
        g[..., -1] = tail
        g[..., -2] = tail2
    elif n >= 2:
        g[..., 1:-1] = (v[..., 2:] - v[..., :-2]) / (2.0 * h) if n > 2 else 0.0
        g[..., 0] = (v[..., 1] - v[..., 0]) / h
        g[..., -1] = (v[..., -1] - v[..., -2]) / h
    else:
        g[...] = 0.0
    return np.moveaxis(g, -1, axis)


def _stencil_max(values: np.ndarray, axis: int) -> np.ndarray:
    """Per-cell maximum of the cells its derivative stencil touches."""
    v = np.moveaxis(values, axis, -1)
    n = v.shape[-1]
    m = np.empty_like(v)
    if n >= 5:
        m[..., 2:-2] = np.maximum.reduce(
            [v[..., 4:], v[..., 3:-1], v[..., 2:-2], v[..., 1:-3], v[..., :-4]]
        )
        head = np.max(v[..., :5], axis=-1)
        tail = np.max(v[..., -5:], axis=-1)
        m[..., 0] = head
        m[..., 1] = head
        m[..., -1] = tail
        m[..., -2] = tail
    else:
        m[...] = np.max(v, axis=-1, keepdims=True)
    return np.moveaxis(m, -1, axis)


def gradient_density(rho: DensityField) -> np.ndarray:
    """Cellwise |grad sqrt(rho)|^2, with a relative floor against noise.

    Cells whose whole stencil lies below GRADIENT_FLOOR * max(rho)
    contribute zero.
    """
    root = np.sqrt(rho.values)
    floor = GRADIENT_FLOOR * float(rho.values.max())
    total = np.zeros_like(root)
    widths = rho.cell_widths
    for ax in range(rho.dimension):
        g = _fd_axis_derivative(root, float(widths[ax]), ax)
        if floor > 0.0:
            g[_stencil_max(rho.values, ax) < floor] = 0.0
        total += g * g
    return total


def gradient_term(rho: DensityField) -> float:
    """integral |grad sqrt(rho)|^2 over the whole box."""
    return float(gradient_density(rho).sum() * rho.cell_volume)


def local_gradient_term(rho: DensityField, cube, grad: np.ndarray | None = None) -> float:
    """integral_Q |grad sqrt(rho)|^2, restricting the full-box gradient field.

    Pass grad = gradient_density(rho) when looping over many cubes.
    """
    if grad is None:
        grad = gradient_density(rho)
    slices = _cube_slices(rho.corner, rho.sides, rho.grid_n, cube)
    if any(s.start >= s.stop for s in slices):
        return 0.0
    return float(grad[slices].sum() * rho.cell_volume)


def thomas_fermi_term(rho: DensityField, d: int | None = None) -> float:
    """integral rho^(1 + 2/d)."""
    d = rho.dimension if d is None else d
    return float((rho.values ** (1.0 + 2.0 / d)).sum() * rho.cell_volume)


def local_thomas_fermi_term(rho: DensityField, cube, d: int | None = None) -> float:
    d = rho.dimension if d is None else d
    slices = _cube_slices(rho.corner, rho.sides, rho.grid_n, cube)
    if any(s.start >= s.stop for s in slices):
        return 0.0
    return float((rho.values[slices] ** (1.0 + 2.0 / d)).sum() * rho.cell_volume)


def validate_orthonormal(state: OrbitalSet, tol: float = ORTHONORMALITY_TOL) -> float:
    """Largest deviation of the midpoint Gram matrix from the identity."""
    flat = state.orbitals.reshape(state.num_orbitals, -1)
    gram = (flat @ flat.T) * state.cell_volume
    deviation = float(np.abs(gram - np.eye(state.num_orbitals)).max())
    if deviation > tol:
        raise PreconditionError(f"orbitals are not orthonormal: deviation {deviation:.3e}")
    return deviation


def hoffmann_ostenhof_check(state: OrbitalSet, rho: DensityField | None = None,
                            check: bool = True) -> tuple[float, float, float]:
    """Kinetic energy against the density gradient term: T >= integral |grad sqrt(rho)|^2.

    Returns (lhs, rhs, slack).  Requires orthonormal orbitals (checked
    unless check=False).
    """
    if check:
        validate_orthonormal(state)
    lhs = kinetic_energy(state)
    rhs = gradient_term(density(state) if rho is None else rho)
    return lhs, rhs, lhs - rhs


def scale_occupations(state: OrbitalSet, factor: float) -> OrbitalSet:
    """Same orbitals with every occupation multiplied by factor >= 0."""
    if factor < 0.0:
        raise PreconditionError("occupation scaling factor must be nonnegative")
    return OrbitalSet(
        dimension=state.dimension,
        corner=state.corner.copy(),
        sides=state.sides.copy(),
        grid_n=state.grid_n,
        orbitals=state.orbitals,
        occupations=state.occupations * factor,
        spin_states=state.spin_states,
    )


def dilate(state: OrbitalSet, s: float) -> OrbitalSet:
    """Dilation x -> s*x with values scaled by s^(-d/2); preserves L2 norms.

    Kinetic, Thomas-Fermi and gradient terms all scale by s^(-2), so every
    dimensionless ratio built from them is invariant.
    """
    if not s > 0.0:
        raise PreconditionError("dilation factor must be positive")
    return OrbitalSet(
        dimension=state.dimension,
        corner=state.corner * s,
        sides=state.sides * s,
        grid_n=state.grid_n,
        orbitals=state.orbitals * s ** (-state.dimension / 2.0),
        occupations=state.occupations.copy(),
        spin_states=state.spin_states,
    )


def _axis_modes(n: int, length: float, m_max: int) -> np.ndarray:
    """Rows sqrt(2/L)*sin(pi*m*(j+1/2)/n) for m = 1..m_max, shape (m_max, n)."""
    j = np.arange(n) + 0.5
    m = np.arange(1, m_max + 1)
    return math.sqrt(2.0 / length) * np.sin(math.pi * np.outer(m, j) / n)


def _sorted_mode_tuples(d: int, n: int, count: int) -> list[tuple[int, ...]]:
    """The count smallest multi-indices in {1..n-1}^d ordered by (|m|^2, m)."""
    if count > (n - 1) ** d:
        raise PreconditionError(
            f"grid with n = {n} supports at most {(n - 1) ** d} modes in d = {d}"
        )
    reach = min(n - 1, max(int(math.ceil((6.0 * count) ** (1.0 / d))) + 2, 2))
    candidates = []
    for m in np.ndindex(*(reach,) * d):
        mode = tuple(i + 1 for i in m)
        candidates.append((sum(c * c for c in mode), mode))
    candidates.sort()
    if len(candidates) < count:
        raise PreconditionError("mode search region too small")
    return [mode for _, mode in candidates[:count]]


def _synthesize(coeff: np.ndarray, bases: list[np.ndarray]) -> np.ndarray:
    """Contract a (num, m1, ..., md) coefficient tensor with per-axis bases."""
    out = coeff
    for basis in bases:
        out = np.tensordot(out, basis, axes=([1], [0]))
    return out


def _generate_box_eigenstates(d, n, count, corner, sides):
    modes = _sorted_mode_tuples(d, n, count)
    bases = [
        _axis_modes(n, float(sides[ax]), max(mode[ax] for mode in modes))
        for ax in range(d)
    ]
    orbitals = np.empty((count,) + (n,) * d)
    for i, mode in enumerate(modes):
        axes = [bases[ax][mode[ax] - 1] for ax in range(d)]
        orbitals[i] = reduce(np.multiply.outer, axes)
    return orbitals


def _generate_random_slater(d, n, count, corner, sides, rng):
    base = int(math.ceil((count + 4) ** (1.0 / d)))
    m_max = min(n - 1, max(base, 6))
    if m_max**d < count:
        raise PreconditionError(f"grid too small for {count} independent orbitals")
    grids = np.meshgrid(*(np.arange(1, m_max + 1),) * d, indexing="ij")
    norms = sum(g.astype(float) ** 2 for g in grids)
    m0 = max(2.0, float(base))
    decay = (1.0 + norms / m0**2) ** -2.0
    coeff = rng.standard_normal((count, m_max**d)) * decay.ravel()
    q, r = np.linalg.qr(coeff.T)
    q = q * np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    coeff = q.T.reshape((count,) + (m_max,) * d)
    bases = [_axis_modes(n, float(sides[ax]), m_max) for ax in range(d)]
    return _synthesize(coeff, bases)


def _generate_gaussian_bumps(d, n, count, corner, sides, rng):
    slots_per_axis = int(math.ceil(count ** (1.0 / d)))
    inner_lo = corner + 0.2 * sides
    inner_span = 0.6 * sides
    slot = inner_span / slots_per_axis
    order = rng.permutation(slots_per_axis**d)[:count]
    centers = np.empty((count, d))
    widths = np.empty(count)
    for i, cell in enumerate(order):
        idx = np.unravel_index(cell, (slots_per_axis,) * d)
        jitter = rng.uniform(0.35, 0.65, size=d)
        centers[i] = inner_lo + (np.asarray(idx) + jitter) * slot
        widths[i] = float(slot.min()) * rng.uniform(0.25, 0.6)
    axes = [corner[ax] + (sides[ax] / n) * (np.arange(n) + 0.5) for ax in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    window = reduce(
        np.multiply,
        [np.sin(math.pi * (mesh[ax] - corner[ax]) / sides[ax]) for ax in range(d)],
    )
    raw = np.empty((count,) + (n,) * d)
    for i in range(count):
        r2 = sum((mesh[ax] - centers[i, ax]) ** 2 for ax in range(d))
        raw[i] = np.exp(-r2 / (2.0 * widths[i] ** 2)) * window
    cellvol = float(np.prod(np.asarray(sides) / n))
    flat = raw.reshape(count, -1)
    gram = (flat @ flat.T) * cellvol
    eigval, eigvec = np.linalg.eigh(gram)
    if eigval.min() < 1e-10 * eigval.max():
        raise PreconditionError("gaussian bumps are too degenerate to orthonormalize")
    inv_root = eigvec @ np.diag(eigval**-0.5) @ eigvec.T
    return (inv_root @ flat).reshape((count,) + (n,) * d)


GENERATOR_FAMILIES = ("box_eigenstates", "random_slater", "gaussian_bumps")


def generate(
    family: str,
    d: int,
    n: int,
    num_orbitals: int,
    seed: int = 0,
    corner=None,
    sides=None,
) -> OrbitalSet:
    """Build a deterministic test state of one of the three families.

    box_eigenstates fills the lowest num_orbitals exact box modes (their
    kinetic energy is exact at any n).  random_slater orthonormalizes a
    seeded random low-mode coefficient matrix by QR in coefficient space.
    gaussian_bumps places seeded, sine-windowed gaussians on jittered slots
    and symmetrically orthonormalizes them.  All occupations are 1.
    """
    if family not in GENERATOR_FAMILIES:
        raise PreconditionError(f"unknown family {family!r}, expected one of {GENERATOR_FAMILIES}")
    if d < 1 or n < 2 or num_orbitals < 1:
        raise PreconditionError("need d >= 1, n >= 2, num_orbitals >= 1")
    corner = np.zeros(d) if corner is None else np.asarray(corner, dtype=float)
    sides = np.ones(d) if sides is None else np.asarray(sides, dtype=float)
    rng = np.random.default_rng(seed)
    if family == "box_eigenstates":
        orbitals = _generate_box_eigenstates(d, n, num_orbitals, corner, sides)
    elif family == "random_slater":
        orbitals = _generate_random_slater(d, n, num_orbitals, corner, sides, rng)
    else:
        orbitals = _generate_gaussian_bumps(d, n, num_orbitals, corner, sides, rng)
    return OrbitalSet(
        dimension=d,
        corner=corner,
        sides=sides,
        grid_n=n,
        orbitals=orbitals,
        occupations=np.ones(num_orbitals),
    )


def mixed_corpus(
    d: int,
    n: int,
    seed: int = 0,
    box_sizes=(1, 4, 12),
    slater_sizes=(3, 8, 16),
    bump_counts=(1, 2, 4),
) -> list[tuple[str, OrbitalSet]]:
    """A labelled list of states covering all three families, deterministically."""
    corpus = []
    for count in box_sizes:
        corpus.append((f"box-N{count}", generate("box_eigenstates", d, n, count)))
    for i, count in enumerate(slater_sizes):
        corpus.append(
            (f"slater-N{count}", generate("random_slater", d, n, count, seed=seed + i))
        )
    for i, count in enumerate(bump_counts):
        corpus.append(
            (f"bumps-N{count}", generate("gaussian_bumps", d, n, count, seed=seed + 100 + i))
        )
    return corpus


def write_state_file(path, state: OrbitalSet, rho: DensityField | None = None) -> None:
    """Serialize a state: one compact JSON header line, then float64 payload.

    The payload is the row-major orbital data, followed by the density
    values when a density is attached.  Little-endian float64 throughout.
    """
    header = {
        "format": _STATE_FORMAT,
        "version": 1,
        "dimension": state.dimension,
        "grid_n": state.grid_n,
        "corner": [float(x) for x in state.corner],
        "sides": [float(x) for x in state.sides],
        "num_orbitals": state.num_orbitals,
        "occupations": [float(x) for x in state.occupations],
        "spin_states": state.spin_states,
        "has_density": rho is not None,
    }
    with open(path, "wb") as handle:
        handle.write(json.dumps(header, sort_keys=True, separators=(",", ":")).encode())
        handle.write(b"\n")
        handle.write(np.ascontiguousarray(state.orbitals, dtype="<f8").tobytes())
        if rho is not None:
            handle.write(np.ascontiguousarray(rho.values, dtype="<f8").tobytes())


def read_state_file(path) -> tuple[OrbitalSet, DensityField | None]:
    with open(path, "rb") as handle:
        header_line = handle.readline()
        payload = handle.read()
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"unreadable state header: {exc}") from exc
    if header.get("format") != _STATE_FORMAT:
        raise PreconditionError(f"not a state file: format {header.get('format')!r}")
    d = header["dimension"]
    n = header["grid_n"]
    num = header["num_orbitals"]
    cells = n**d
    expected = num * cells + (cells if header["has_density"] else 0)
    data = np.frombuffer(payload, dtype="<f8")
    if data.size != expected:
        raise PreconditionError(
            f"state payload holds {data.size} values, header implies {expected}"
        )
    orbitals = data[: num * cells].reshape((num,) + (n,) * d).copy()
    state = OrbitalSet(
        dimension=d,
        corner=np.asarray(header["corner"], dtype=float),
        sides=np.asarray(header["sides"], dtype=float),
        grid_n=n,
        orbitals=orbitals,
        occupations=np.asarray(header["occupations"], dtype=float),
        spin_states=header["spin_states"],
    )
    rho = None
    if header["has_density"]:
        rho = DensityField(
            dimension=d,
            corner=state.corner.copy(),
            sides=state.sides.copy(),
            grid_n=n,
            values=data[num * cells :].reshape((n,) * d).copy(),
        )
    return state, rho
