"""Inequality evaluators: local and aggregated kinetic bounds, the pointwise
Hölder step, the Poincaré-Sobolev step, and the assembled main inequality

    T(γ) >= (1 - eps) * K * integral rho^(1+2/d)
            - (C_d / eps^(3+4/d)) * integral |grad sqrt(rho)|^2.

Every evaluator returns an InequalityReport with lhs, rhs, slack and, where
the inequality is affine in an undetermined constant, the minimal value of
that constant making the instance hold (solved algebraically, never
searched).  No constant is hard-coded as "the" constant; corpus maxima of
the minimal constants are what calibrate_constant tabulates.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import kinetic_constant
from .errors import PreconditionError
from .lattice_spectra import LocalBoundMode, local_kinetic_lower_bound
from .partition import CubeGroup, PartitionTree, group_constant, group_inequality_check
from .states import (
    DensityField,
    OrbitalSet,
    density,
    gradient_density,
    gradient_term,
    kinetic_energy,
    local_gradient_term,
    local_kinetic_energy,
    local_mass,
    local_thomas_fermi_term,
    thomas_fermi_term,
    _cube_slices,
)


def default_epsilon_grid(points: int = 17, lo: float = 0.05, hi: float = 0.85) -> tuple[float, ...]:
    """Geometric grid in [lo, hi], 17 points by default."""
    if points < 2 or not 0.0 < lo < hi:
        raise PreconditionError("need points >= 2 and 0 < lo < hi")
    ratio = hi / lo
    return tuple(lo * ratio ** (i / (points - 1)) for i in range(points))


def coupled_epsilon(lam: float, d: int) -> float:
    """The coupling eps = lambda^(-1/d) used when the partition drives eps."""
    if not lam > 0.0:
        raise PreconditionError("lambda must be positive")
    return lam ** (-1.0 / d)


@dataclass(frozen=True)
class InequalityParams:
    epsilon: float | None = None
    lam: float | None = None
    constant_main: float | None = None
    constant_ps: float | None = None
    constant_local: float | None = None


@dataclass
class InequalityReport:
    inequality_id: str
    lhs: float
    rhs: float
    slack: float
    minimal_constant: float | None
    params: InequalityParams
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StateFunctionals:
    """The three functionals every check combines, computed once per state."""

    kinetic: float
    thomas_fermi: float
    gradient: float
    mass: float


def state_functionals(state: OrbitalSet, rho: DensityField | None = None) -> StateFunctionals:
    rho = density(state) if rho is None else rho
    return StateFunctionals(
        kinetic=kinetic_energy(state),
        thomas_fermi=thomas_fermi_term(rho),
        gradient=gradient_term(rho),
        mass=rho.mass(),
    )


def local_bound_check(
    state: OrbitalSet,
    cube,
    mode: LocalBoundMode = LocalBoundMode.EXACT_RIESZ,
    rho: DensityField | None = None,
) -> InequalityReport:
    """Local kinetic energy against the confined-mass lower bound on one cube.

    In exact_riesz mode the slack is a rigorous operator inequality up to
    discretization (tolerance 1e-2 relative).  In closed-form mode the
    reported minimal constant is the smallest C_loc that would make the
    closed form hold for this cube.
    """
    mode = LocalBoundMode(mode)
    rho = density(state) if rho is None else rho
    mass = local_mass(rho, cube)
    volume = float(cube.side) ** state.dimension
    lhs = local_kinetic_energy(state, cube)
    bound = local_kinetic_lower_bound(mass, volume, state.dimension, mode)
    rhs = bound.value
    d = state.dimension
    minimal = None
    if mode is LocalBoundMode.BLY_CLOSED_FORM and mass > 0.0:
        kin = kinetic_constant(d, 1)
        scale = volume ** (-2.0 / d)
        minimal = max(0.0, (mass ** (1.0 + 2.0 / d) - lhs / (kin * scale)) / mass ** (1.0 + 1.0 / d))
    ineq_id = "local_bound_exact" if mode is LocalBoundMode.EXACT_RIESZ else "local_bound_bly"
    return InequalityReport(
        inequality_id=ineq_id,
        lhs=lhs,
        rhs=rhs,
        slack=lhs - rhs,
        minimal_constant=minimal,
        params=InequalityParams(constant_local=minimal),
        extras={"mass": mass, "volume": volume, "mu_star": bound.mu_star, "mode": mode.value},
    )


def aggregate_bound(
    state: OrbitalSet,
    tree: PartitionTree,
    groups: list[CubeGroup] | None = None,
    rho: DensityField | None = None,
) -> InequalityReport:
    """T >= K * (1 - C*lambda^(-1/d)) * sum_leaves |Q|^(-2/d) * M_Q^(1+2/d).

    C = 4^(d+2)/3.  The per-cube terms are tabulated in extras; when groups
    are passed, the per-group inequality values are attached as well.  The
    reported minimal constant is the smallest C making this instance hold.
    A lambda above Tr(gamma) violates the chain's hypothesis and is
    flagged, not raised.
    """
    d = state.dimension
    lam = tree.lam
    lhs = kinetic_energy(state)
    per_cube = []
    for index in tree.leaves():
        cube = tree.cubes[index]
        term = cube.volume ** (-2.0 / d) * cube.mass ** (1.0 + 2.0 / d)
        per_cube.append(
            {"corner": list(cube.corner), "side": cube.side, "mass": cube.mass, "term": term}
        )
    tf_sum = math.fsum(entry["term"] for entry in per_cube)
    c_grp = group_constant(d)
    kin = kinetic_constant(d, 1)
    damping = 1.0 - c_grp * lam ** (-1.0 / d)
    rhs = kin * damping * tf_sum
    trace = float(np.sum(state.occupations))
    minimal = max(0.0, lam ** (1.0 / d) * (1.0 - lhs / (kin * tf_sum))) if tf_sum > 0.0 else 0.0
    extras = {
        "per_cube": per_cube,
        "tf_sum": tf_sum,
        "damping": damping,
        "trace": trace,
        "lambda_above_trace": lam > trace,
    }
    if groups is not None:
        result = group_inequality_check(groups, d, lam)
        extras["group_total"] = result.total
        extras["group_values"] = list(result.per_group)
    return InequalityReport(
        inequality_id="aggregate",
        lhs=lhs,
        rhs=rhs,
        slack=lhs - rhs,
        minimal_constant=minimal,
        params=InequalityParams(lam=lam, constant_main=c_grp),
        extras=extras,
    )


def holder_pointwise_check(a: float, b: float, epsilon: float, p: float) -> tuple[float, float]:
    """lhs = (1+eps)^(p-1) * (a^p + eps^(1-p) * b^p) against rhs = (a+b)^p.

    The split (a+b)^p <= (1+eps)^(p-1)*(a^p + eps^(1-p)*b^p) is Hölder with
    weights (1, eps); lhs >= rhs for all a, b >= 0, eps > 0, p > 1.
    """
    if a < 0.0 or b < 0.0:
        raise PreconditionError("a and b must be nonnegative")
    if not epsilon > 0.0:
        raise PreconditionError("epsilon must be positive")
    if not p > 1.0:
        raise PreconditionError("exponent p must exceed 1")
    lhs = (1.0 + epsilon) ** (p - 1.0) * (a**p + epsilon ** (1.0 - p) * b**p)
    rhs = (a + b) ** p
    return lhs, rhs


def poincare_sobolev_step(
    rho: DensityField,
    cube,
    epsilon: float,
    grad: np.ndarray | None = None,
) -> InequalityReport:
    """The cube-local step |Q|^(-2/d)*M^(1+2/d) >= tf_piece - C_PS*grad_piece.

    tf_piece = (1+eps)^(-(1+4/d)) * integral_Q rho^(1+2/d) and grad_piece =
    eps^(-(1+4/d)) * (integral_Q |grad sqrt(rho)|^2) * M^(2/d).  The report's
    rhs is the tf_piece alone (the C_PS = 0 reading); a negative slack
    quantifies how much gradient compensation the instance needs, and
    minimal_constant is the smallest C_PS closing the gap.  The mean of
    sqrt(rho) over the cube rides along in extras.
    """
    if not epsilon > 0.0:
        raise PreconditionError("epsilon must be positive")
    d = rho.dimension
    mass = local_mass(rho, cube)
    volume = float(cube.side) ** d
    params = InequalityParams(epsilon=epsilon)
    if mass == 0.0:
        return InequalityReport(
            inequality_id="poincare_sobolev",
            lhs=0.0,
            rhs=0.0,
            slack=0.0,
            minimal_constant=0.0,
            params=params,
            extras={"mass": 0.0, "tf_piece": 0.0, "grad_piece": 0.0, "u_mean": 0.0},
        )
    lhs = volume ** (-2.0 / d) * mass ** (1.0 + 2.0 / d)
    tf_piece = (1.0 + epsilon) ** -(1.0 + 4.0 / d) * local_thomas_fermi_term(rho, cube)
    grad_q = local_gradient_term(rho, cube, grad=grad)
    grad_piece = epsilon ** -(1.0 + 4.0 / d) * grad_q * mass ** (2.0 / d)
    slices = _cube_slices(rho.corner, rho.sides, rho.grid_n, cube)
    u_mean = float(np.sqrt(rho.values[slices]).sum() * rho.cell_volume) / volume
    if lhs >= tf_piece:
        minimal = 0.0
    elif grad_piece > 0.0:
        minimal = (tf_piece - lhs) / grad_piece
    else:
        minimal = math.inf
    return InequalityReport(
        inequality_id="poincare_sobolev",
        lhs=lhs,
        rhs=tf_piece,
        slack=lhs - tf_piece,
        minimal_constant=minimal,
        params=params,
        extras={"mass": mass, "tf_piece": tf_piece, "grad_piece": grad_piece, "u_mean": u_mean},
    )


def main_inequality_check(
    state: OrbitalSet,
    epsilon: float,
    c_d: float = 0.0,
    functionals: StateFunctionals | None = None,
) -> InequalityReport:
    """The assembled bound with error constant C_d.

    rhs = (1-eps)*K*TF - (C_d/eps^(3+4/d))*G; the minimal C_d is the
    smallest value of that same parameter making slack >= 0 (zero when the
    damped TF term alone sits below T).  extras carry the raw gradient
    coefficient minimal_C_d / eps^(3+4/d), the quantity whose corpus maxima
    calibrate_constant scales back.
    """
    if not epsilon > 0.0:
        raise PreconditionError("epsilon must be positive")
    if c_d < 0.0:
        raise PreconditionError("C_d must be nonnegative")
    f = state_functionals(state) if functionals is None else functionals
    d = state.dimension
    kin = kinetic_constant(d, state.spin_states)
    power = 3.0 + 4.0 / d
    rhs = (1.0 - epsilon) * kin * f.thomas_fermi - (c_d / epsilon**power) * f.gradient
    gap = (1.0 - epsilon) * kin * f.thomas_fermi - f.kinetic
    if gap <= 0.0:
        minimal, coefficient = 0.0, 0.0
    elif f.gradient > 0.0:
        coefficient = gap / f.gradient
        minimal = epsilon**power * coefficient
    else:
        minimal, coefficient = math.inf, math.inf
    return InequalityReport(
        inequality_id="main",
        lhs=f.kinetic,
        rhs=rhs,
        slack=f.kinetic - rhs,
        minimal_constant=minimal,
        params=InequalityParams(epsilon=epsilon, constant_main=c_d),
        extras={
            "gradient_coefficient": coefficient,
            "epsilon_below_trace_power": epsilon < f.mass ** (-1.0 / d) if f.mass > 0 else False,
        },
    )


def lt_ratio(state: OrbitalSet, functionals: StateFunctionals | None = None) -> float:
    """kinetic_energy / thomas_fermi_term, the quantity competing with K."""
    f = state_functionals(state) if functionals is None else functionals
    if not f.thomas_fermi > 0.0:
        raise PreconditionError("thomas_fermi term vanishes; the density is zero")
    return f.kinetic / f.thomas_fermi


@dataclass(frozen=True)
class CalibrationTable:
    """Corpus maxima of the per-state constants over an epsilon grid.

    c_emp[i] is the largest raw gradient coefficient over the corpus at
    epsilons[i]; scaled[i] = c_emp[i] * epsilons[i]^(3+4/d) equals the
    largest minimal C_d in the rhs normalization of main_inequality_check.
    """

    dimension: int
    epsilons: tuple[float, ...]
    c_emp: tuple[float, ...]
    scaled: tuple[float, ...]
    state_ids: tuple[str, ...]
    per_state: tuple[tuple[float, ...], ...]


def calibrate_constant(corpus, epsilon_grid=None, d: int | None = None) -> CalibrationTable:
    """Tabulate (eps, C_emp(eps), C_emp(eps)*eps^(3+4/d)) over a corpus.

    corpus is a list of OrbitalSet or of (state_id, OrbitalSet) pairs.
    """
    items = []
    for entry in corpus:
        if isinstance(entry, OrbitalSet):
            items.append((f"state-{len(items)}", entry))
        else:
            items.append((str(entry[0]), entry[1]))
    if not items:
        raise PreconditionError("corpus is empty")
    grid = default_epsilon_grid() if epsilon_grid is None else tuple(epsilon_grid)
    if not all(0.0 < e < 1.0 for e in grid):
        raise PreconditionError("epsilon grid must lie in (0, 1)")
    dim = items[0][1].dimension if d is None else d
    power = 3.0 + 4.0 / dim
    funcs = [(sid, state_functionals(state)) for sid, state in items]
    per_state = []
    for (sid, f), (_, state) in zip(funcs, items):
        constant = kinetic_constant(dim, state.spin_states)
        row = []
        for eps in grid:
            gap = (1.0 - eps) * constant * f.thomas_fermi - f.kinetic
            if gap <= 0.0:
                row.append(0.0)
            elif f.gradient > 0.0:
                row.append(gap / f.gradient)
            else:
                row.append(math.inf)
        per_state.append(tuple(row))
    c_emp = tuple(max(row[i] for row in per_state) for i in range(len(grid)))
    scaled = tuple(c * e**power for c, e in zip(c_emp, grid))
    return CalibrationTable(
        dimension=dim,
        epsilons=grid,
        c_emp=c_emp,
        scaled=scaled,
        state_ids=tuple(sid for sid, _ in funcs),
        per_state=tuple(per_state),
    )
