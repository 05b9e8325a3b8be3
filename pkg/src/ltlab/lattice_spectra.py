"""Riesz means of Laplace eigenvalues on the unit cube and the local bounds built from them.

The eigenvalues of -Laplace on the unit k-cube are pi^2*|p|^2 with p ranging
over N^k (Dirichlet) or N_0^k (Neumann).  The first-order Riesz mean at
energy mu is

    R(mu) = sum_p [pi^2*|p|^2 - mu]_-  (<= 0),

a piecewise-linear function of mu.  Enumeration is organized axis by axis:
for each prefix of coordinates the admissible range of the last coordinate
is resolved in closed form (integer count and sum of squares), and the
aggregates are carried as exact Python integers, so the returned value
involves only two floating-point roundings.

Three derived quantities are exposed: the binomial decomposition of a
Neumann mean into Dirichlet means of lower dimension, the gap to the
semiclassical term -L_k * mu^(1+k/2) (nonnegative for Dirichlet lattices),
and the Weyl ratio that measures how close a mean is to that term.

`local_kinetic_lower_bound` turns these into a lower bound for the kinetic
energy of fermions confined to a cube of volume V carrying mass M, either by
maximizing mu*M + R_Neumann(mu) numerically (golden section on log mu) or by
the closed form K * V^(-2/d) * (M^(1+2/d) - C_loc * M^(1+1/d)).
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .constants import eigenvalue_constant, kinetic_constant, unit_ball_volume
from .errors import EnumerationCapError, PreconditionError

PI2 = math.pi**2

DEFAULT_ENUMERATION_CAP = 1_000_000_000

GOLDEN_SECTION_TOL = 1e-10


class Boundary(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class RieszMeanQuery:
    """Parameters of one Riesz-mean evaluation.

    dimension >= 0 (dimension 0 means the single empty lattice point, whose
    mean is -mu under either boundary condition), mu > 0.
    """

    dimension: int
    mu: float
    boundary: Boundary = Boundary.DIRICHLET

    def validate(self) -> None:
        if not isinstance(self.dimension, int) or self.dimension < 0:
            raise PreconditionError(f"lattice dimension must be >= 0, got {self.dimension!r}")
        if not self.mu > 0.0:
            raise PreconditionError(f"energy mu must be positive, got {self.mu!r}")
        if not isinstance(self.boundary, Boundary):
            raise PreconditionError(f"boundary must be a Boundary member, got {self.boundary!r}")


@dataclass(frozen=True)
class RieszMeanResult:
    value: float
    contributing_points: int


def _sum_of_squares(b: int) -> int:
    """sum_{p=1}^{b} p^2, zero for b < 1."""
    if b < 1:
        return 0
    return b * (b + 1) * (2 * b + 1) // 6


def _largest_contributor(s: int, mu: float) -> int:
    """Largest integer p >= 0 with pi^2*(s + p^2) < mu, or -1 if there is none."""
    rem = mu / PI2 - s
    if rem <= 0.0:
        return -1
    p = int(math.sqrt(rem))
    while PI2 * (s + (p + 1) * (p + 1)) < mu:
        p += 1
    while p >= 0 and PI2 * (s + p * p) >= mu:
        p -= 1
    return p


def _aggregate(axes_left: int, s: int, start: int, mu: float) -> tuple[int, int]:
    """Count and total |p|^2 of contributing points over the remaining axes.

    s is the squared norm accumulated by the fixed prefix coordinates.
    Both aggregates are exact integers.
    """
    if axes_left == 0:
        return (1, s) if PI2 * s < mu else (0, 0)
    if axes_left == 1:
        hi = _largest_contributor(s, mu)
        if hi < start:
            return 0, 0
        count = hi - start + 1
        squares = _sum_of_squares(hi) - _sum_of_squares(start - 1)
        return count, count * s + squares
    min_tail = (axes_left - 1) * start * start
    total_count = 0
    total_norm = 0
    p = start
    while PI2 * (s + p * p + min_tail) < mu:
        count, norm = _aggregate(axes_left - 1, s + p * p, start, mu)
        total_count += count
        total_norm += norm
        p += 1
    return total_count, total_norm


def riesz_mean(query: RieszMeanQuery, cap: int = DEFAULT_ENUMERATION_CAP) -> RieszMeanResult:
    """First-order Riesz mean sum_p [pi^2*|p|^2 - mu]_- over the query's lattice.

    Raises EnumerationCapError if the axis-aligned bounding box of the
    contributing region holds more than `cap` lattice points.
    """
    query.validate()
    k = query.dimension
    start = 1 if query.boundary is Boundary.DIRICHLET else 0
    if k > 0:
        per_axis = _largest_contributor(0, query.mu) - start + 1
        if per_axis < 0:
            per_axis = 0
        if per_axis**k > cap:
            raise EnumerationCapError(
                f"enumeration box holds up to {per_axis**k} points, cap is {cap}"
            )
    count, norm = _aggregate(k, 0, start, query.mu)
    value = PI2 * norm - query.mu * count
    return RieszMeanResult(value=value, contributing_points=count)


def semiclassical_riesz_coefficient(k: int) -> float:
    """Coefficient L_k of the leading term -L_k * mu^(1+k/2); L_0 = 1."""
    if not isinstance(k, int) or k < 0:
        raise PreconditionError(f"lattice dimension must be >= 0, got {k!r}")
    if k == 0:
        return 1.0
    return eigenvalue_constant(k, 1)


def binomial_decomposition_check(d: int, mu: float, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Both sides of R_Neumann(d, mu) = sum_k binom(d, k) * R_Dirichlet(k, mu).

    The identity reflects splitting N_0^d by the set of zero coordinates.
    Returns (lhs, rhs) for the caller to compare.
    """
    lhs = riesz_mean(RieszMeanQuery(d, mu, Boundary.NEUMANN), cap=cap).value
    rhs = 0.0
    for k in range(d + 1):
        term = riesz_mean(RieszMeanQuery(k, mu, Boundary.DIRICHLET), cap=cap).value
        rhs += math.comb(d, k) * term
    return lhs, rhs


def berezin_li_yau_gap(k: int, mu: float, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """R_Dirichlet(k, mu) + L_k * mu^(1+k/2), nonnegative for every mu > 0."""
    value = riesz_mean(RieszMeanQuery(k, mu, Boundary.DIRICHLET), cap=cap).value
    return value + semiclassical_riesz_coefficient(k) * mu ** (1.0 + k / 2.0)


def weyl_ratio(k: int, mu: float, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """R_Dirichlet(k, mu) / (-L_k * mu^(1+k/2)), in [0, 1] and -> 1 as mu grows.

    An empty mean gives ratio 0; the denominator never vanishes for mu > 0.
    """
    value = riesz_mean(RieszMeanQuery(k, mu, Boundary.DIRICHLET), cap=cap).value
    if value == 0.0:
        return 0.0
    return value / (-semiclassical_riesz_coefficient(k) * mu ** (1.0 + k / 2.0))


class LocalBoundMode(str, Enum):
    EXACT_RIESZ = "exact_riesz"
    BLY_CLOSED_FORM = "bly_closed_form"


@dataclass(frozen=True)
class LocalBoundResult:
    value: float
    mu_star: float
    mode: LocalBoundMode


def _golden_section_max(f, lo: float, hi: float, tol: float = GOLDEN_SECTION_TOL) -> tuple[float, float]:
    """Maximize f on [lo, hi]; returns (argmax, max).  f must be unimodal there."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _continuum_optimizer(mass: float, d: int) -> float:
    """Maximizer mu* = 4*pi^2*(M/omega_d)^(2/d) of mu*M - L_d*mu^(1+d/2)."""
    return 4.0 * PI2 * (mass / unit_ball_volume(d)) ** (2.0 / d)


@lru_cache(maxsize=None)
def calibrated_local_constant(d: int, grid_points: int = 256) -> float:
    """Smallest constant C with sum_{k<d} binom(d,k)*L_k*mu*(M)^(1+k/2) <= C*K*M^(1+1/d).

    The maximum of the ratio over a geometric grid of masses M in [1, 1e6];
    the ratio is monotone decreasing in M for d <= 3, so the grid maximum
    sits at M = 1 and enlarging the grid cannot lower the result.
    """
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"dimension must be a positive integer, got {d!r}")
    kin = kinetic_constant(d, 1)
    best = 0.0
    for i in range(grid_points):
        mass = 10.0 ** (6.0 * i / (grid_points - 1))
        mu_star = _continuum_optimizer(mass, d)
        lower_terms = sum(
            math.comb(d, k) * semiclassical_riesz_coefficient(k) * mu_star ** (1.0 + k / 2.0)
            for k in range(d)
        )
        ratio = lower_terms / (kin * mass ** (1.0 + 1.0 / d))
        if ratio > best:
            best = ratio
    return best


def local_kinetic_lower_bound(
    mass: float,
    volume: float,
    d: int,
    mode: LocalBoundMode = LocalBoundMode.EXACT_RIESZ,
    c_loc: float | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> LocalBoundResult:
    """Lower bound for the kinetic energy of mass M confined to a cube of volume V.

    exact_riesz mode maximizes g(mu) = mu*M + R_Neumann(d, mu) over mu > 0
    and returns V^(-2/d) * max(g, 0); the maximizer is reported on the
    unit-cube energy scale.  g is concave piecewise linear, so a coarse
    logarithmic scan followed by golden section on log mu finds the peak.
    For M <= 1 the supremum is the mu -> 0 limit 0 and (0, 0) is returned.

    bly_closed_form mode evaluates K * V^(-2/d) * (M^(1+2/d) - C*M^(1+1/d))
    with C = c_loc or the calibrated default; the reported mu* is the
    continuum maximizer 4*pi^2*(M/omega_d)^(2/d).  The closed form may be
    negative; it is a valid (if then vacuous) lower bound.
    """
    if mass < 0.0:
        raise PreconditionError(f"mass must be nonnegative, got {mass!r}")
    if not volume > 0.0:
        raise PreconditionError(f"volume must be positive, got {volume!r}")
    mode = LocalBoundMode(mode)
    scale = volume ** (-2.0 / d)
    if mode is LocalBoundMode.BLY_CLOSED_FORM:
        constant = calibrated_local_constant(d) if c_loc is None else c_loc
        value = kinetic_constant(d, 1) * scale * (
            mass ** (1.0 + 2.0 / d) - constant * mass ** (1.0 + 1.0 / d)
        )
        mu_star = _continuum_optimizer(mass, d) if mass > 0.0 else 0.0
        return LocalBoundResult(value=value, mu_star=mu_star, mode=mode)

    if mass <= 1.0:
        return LocalBoundResult(value=0.0, mu_star=0.0, mode=mode)

    def objective(log_mu: float) -> float:
        mu = math.exp(log_mu)
        return mu * mass + riesz_mean(RieszMeanQuery(d, mu, Boundary.NEUMANN), cap=cap).value

    lo = math.log(1e-3)
    hi = math.log(10.0 * PI2 * (2.0 * mass) ** (2.0 / d))
    scan = [lo + (hi - lo) * i / 63 for i in range(64)]
    values = [objective(x) for x in scan]
    peak = max(range(64), key=values.__getitem__)
    bracket_lo = scan[max(peak - 1, 0)]
    bracket_hi = scan[min(peak + 1, 63)]
    log_mu_star, best = _golden_section_max(objective, bracket_lo, bracket_hi)
    if best <= 0.0:
        return LocalBoundResult(value=0.0, mu_star=0.0, mode=mode)
    return LocalBoundResult(value=scale * best, mu_star=math.exp(log_mu_star), mode=mode)
