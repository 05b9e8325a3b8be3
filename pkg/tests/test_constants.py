import math

import numpy as np
import pytest

from ltlab import (
    PreconditionError,
    SemiclassicalConstants,
    eigenvalue_constant,
    eigenvalue_constant_from_kinetic,
    kinetic_constant,
    kinetic_constant_from_eigenvalue,
    unit_ball_volume,
)


def test_unit_ball_volumes():
    assert unit_ball_volume(1) == pytest.approx(2.0, rel=1e-14)
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-14)
    assert unit_ball_volume(4) == pytest.approx(math.pi**2 / 2.0, rel=1e-14)


def test_kinetic_constant_closed_forms():
    assert kinetic_constant(1, 1) == pytest.approx(math.pi**2 / 3.0, rel=1e-12)
    assert kinetic_constant(2, 1) == pytest.approx(2.0 * math.pi, rel=1e-12)
    assert kinetic_constant(3, 1) == pytest.approx(0.6 * (6.0 * math.pi**2) ** (2.0 / 3.0), rel=1e-12)


def test_kinetic_constant_spin_scaling():
    for d in range(1, 5):
        base = kinetic_constant(d, 1)
        for q in (2, 3, 4):
            assert kinetic_constant(d, q) == pytest.approx(base / q ** (2.0 / d), rel=1e-12)


def test_eigenvalue_constant_closed_forms():
    assert eigenvalue_constant(1) == pytest.approx(2.0 / (3.0 * math.pi), rel=1e-12)
    assert eigenvalue_constant(2) == pytest.approx(1.0 / (8.0 * math.pi), rel=1e-12)
    assert eigenvalue_constant(3) == pytest.approx(1.0 / (15.0 * math.pi**2), rel=1e-12)


def test_duality_roundtrip_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(1, 7))
        q = int(rng.integers(1, 5))
        kin = kinetic_constant(d, q)
        eig = eigenvalue_constant_from_kinetic(d, kin)
        assert kinetic_constant_from_eigenvalue(d, eig) == pytest.approx(kin, rel=1e-12)
        assert eig == pytest.approx(eigenvalue_constant(d, q), rel=1e-12)


def test_dataclass_consistency():
    for d in range(1, 5):
        table = SemiclassicalConstants.for_dimension(d, 2)
        assert table.dimension == d
        assert table.spin_states == 2
        assert table.ball_volume == pytest.approx(unit_ball_volume(d), rel=1e-14)
        assert table.kinetic == pytest.approx(kinetic_constant(d, 2), rel=1e-14)
        assert table.eigenvalue == pytest.approx(eigenvalue_constant(d, 2), rel=1e-14)


def test_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        kinetic_constant(0, 1)
    with pytest.raises(PreconditionError):
        kinetic_constant(2, 0)
    with pytest.raises(PreconditionError):
        unit_ball_volume(-1)
    with pytest.raises(PreconditionError):
        eigenvalue_constant_from_kinetic(2, -1.0)
