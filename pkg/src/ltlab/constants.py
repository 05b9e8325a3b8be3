"""Semiclassical constants for kinetic-energy and eigenvalue-sum bounds.

Everything here is a closed form in the dimension d and the number of spin
states q.  The two central quantities are the kinetic constant

    K(d, q) = d/(d+2) * 4*pi^2 / (q * omega_d)^(2/d),

appearing in lower bounds T >= K * integral rho^(1+2/d), and the eigenvalue
constant L(d, q) dual to it.  The pair is linked by the Legendre-type
relations

    L = (1 + d/2)^(-1) * ((1 + 2/d) * K)^(-d/2),
    K = (1 + 2/d)^(-1) * ((1 + d/2) * L)^(-2/d),

which invert each other exactly; `kinetic_constant` and
`eigenvalue_constant` are kept consistent through them.
"""

import math
from dataclasses import dataclass

from .errors import PreconditionError


def _check_dimension(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"dimension must be a positive integer, got {d!r}")


def _check_spin(q: int) -> None:
    if not isinstance(q, int) or q < 1:
        raise PreconditionError(f"spin multiplicity must be a positive integer, got {q!r}")


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d: omega_d = pi^(d/2) / Gamma(d/2 + 1)."""
    _check_dimension(d)
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def kinetic_constant(d: int, q: int = 1) -> float:
    """Semiclassical Thomas-Fermi constant K(d, q).

    K(d, q) = d/(d+2) * 4*pi^2 / (q * omega_d)^(2/d).  For d = 3, q = 1
    this is the familiar (3/5) * (6*pi^2)^(2/3).
    """
    _check_dimension(d)
    _check_spin(q)
    return d / (d + 2) * 4.0 * math.pi**2 / (q * unit_ball_volume(d)) ** (2.0 / d)


def eigenvalue_constant_from_kinetic(d: int, kinetic: float) -> float:
    """Map a kinetic constant K to its dual eigenvalue constant L."""
    _check_dimension(d)
    if kinetic <= 0.0:
        raise PreconditionError("kinetic constant must be positive")
    return (1.0 + d / 2.0) ** -1.0 * ((1.0 + 2.0 / d) * kinetic) ** (-d / 2.0)


def kinetic_constant_from_eigenvalue(d: int, eigenvalue: float) -> float:
    """Map an eigenvalue constant L back to its dual kinetic constant K."""
    _check_dimension(d)
    if eigenvalue <= 0.0:
        raise PreconditionError("eigenvalue constant must be positive")
    return (1.0 + 2.0 / d) ** -1.0 * ((1.0 + d / 2.0) * eigenvalue) ** (-2.0 / d)


def eigenvalue_constant(d: int, q: int = 1) -> float:
    """Semiclassical eigenvalue-sum constant L(d, q), dual to K(d, q).

    Closed form: L(d, q) = 2/(d+2) * q * omega_d / (2*pi)^d, which is what
    the duality map produces from `kinetic_constant(d, q)`.
    """
    _check_dimension(d)
    _check_spin(q)
    return 2.0 / (d + 2) * q * unit_ball_volume(d) / (2.0 * math.pi) ** d


@dataclass(frozen=True)
class SemiclassicalConstants:
    """The constants for one (d, q), validated against the duality relations."""

    dimension: int
    spin_states: int
    ball_volume: float
    kinetic: float
    eigenvalue: float

    @classmethod
    def for_dimension(cls, d: int, q: int = 1) -> "SemiclassicalConstants":
        _check_dimension(d)
        _check_spin(q)
        kin = kinetic_constant(d, q)
        eig = eigenvalue_constant(d, q)
        pair = cls(
            dimension=d,
            spin_states=q,
            ball_volume=unit_ball_volume(d),
            kinetic=kin,
            eigenvalue=eig,
        )
        if abs(eigenvalue_constant_from_kinetic(d, kin) - eig) > 1e-12 * eig:
            raise PreconditionError("duality relation violated for eigenvalue constant")
        if abs(kinetic_constant_from_eigenvalue(d, eig) - kin) > 1e-12 * kin:
            raise PreconditionError("duality relation violated for kinetic constant")
        return pair
