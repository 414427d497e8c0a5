import math

import numpy as np
import pytest

from braidlab.holonomy import (
    GapClosedError,
    ParamPath,
    Segment,
    analytic_gauge_fields,
    analytic_holonomy,
    arm_holonomy,
    finite_difference_fields,
    gauge_frame,
    majorana_wilson_loop,
    middle_arm_holonomy,
    rotation_product,
    wilson_loop,
)
from braidlab.model import ClockArm
from braidlab.pauli import OperatorSum, PauliString
from braidlab.protocol import clock_path
from braidlab.subspace import simultaneous_eigenbasis

HALF_PI = math.pi / 2


def test_segments():
    meridian = Segment((0.0, 0.0), (HALF_PI, 0.0))
    assert meridian.solid_angle() == 0
    assert meridian.span() == pytest.approx(HALF_PI)
    assert meridian.point(0.5) == pytest.approx((math.pi / 4, 0.0))

    equator = Segment((HALF_PI, 0.0), (HALF_PI, 1.2))
    assert equator.solid_angle() == pytest.approx(1.2)
    assert equator.span() == pytest.approx(1.2)

    tilted = Segment((math.pi / 3, 0.0), (math.pi / 3, 1.0))
    assert tilted.solid_angle() == pytest.approx(0.5)


def test_param_path():
    path = clock_path(0.7, 10)
    assert path.closed()
    assert path.points().shape == (31, 2)
    assert path.solid_angle() == pytest.approx(0.7)
    assert path.with_steps((1, 2, 3)).points().shape == (7, 2)

    assert not ParamPath.through([(0.0, 0.0), (HALF_PI, 0.0)]).closed()

    with pytest.raises(ValueError):
        ParamPath(())
    with pytest.raises(ValueError):
        ParamPath((Segment((0, 0), (1, 0)),), arm="top")
    with pytest.raises(ValueError):
        ParamPath((Segment((0, 0), (1, 0)),), 0)
    with pytest.raises(ValueError):
        path.with_steps((1, 2)).points()


@pytest.mark.parametrize("arm", ["left", "right", "middle"])
def test_gauge_fields_match_frames(arm, rng):
    for a, b in zip(rng.uniform(0.1, math.pi - 0.1, 5), rng.uniform(0, 2 * math.pi, 5)):
        exact = analytic_gauge_fields(None, arm, a, b)
        approx = finite_difference_fields(arm, a, b)
        assert exact.names == approx.names
        for m1, m2 in zip(exact.matrices, approx.matrices):
            assert np.allclose(m1, m2, atol=1e-6)
        assert exact.anti_hermitian_residual() < 1e-12


@pytest.mark.parametrize("arm", ["left", "right", "middle"])
def test_rotation_product_matches_frames(arm, rng):
    for a, b in zip(rng.uniform(0, math.pi, 4), rng.uniform(0, 2 * math.pi, 4)):
        u = rotation_product(arm, a, b)
        assert np.allclose(u, gauge_frame(arm, a, b))
        assert np.allclose(u @ u.conj().T, np.eye(len(u)))
    with pytest.raises(ValueError):
        rotation_product("top", 0.1, 0.2)


def test_gauge_field_errors(four_qubit):
    with pytest.raises(ValueError):
        analytic_gauge_fields(four_qubit, "middle", 0.1, 0.2)
    with pytest.raises(ValueError):
        finite_difference_fields("top", 0.1, 0.2)


def test_gauge_field_names(ten_qubit):
    f = analytic_gauge_fields(ten_qubit, "right", 0.3, 0.4)
    assert f.names == ("theta'", "phi'")
    assert f.component("phi'") is f.matrices[1]
    assert analytic_gauge_fields(None, "middle", 0.3, 0.4).names == ("alpha", "beta")


@pytest.mark.parametrize("phi", [HALF_PI, math.pi / 4, -1.0])
def test_left_arm_holonomy(four_qubit, phi):
    path = clock_path(phi, 200)
    hol = arm_holonomy(four_qubit, "left", path)
    u = hol.unitary

    assert hol.logical_indices == (0, 1)
    assert hol.solid_angle == pytest.approx(phi)
    assert np.allclose(np.sort(np.abs(hol.eigenphases)), abs(phi) / 2, atol=1e-3)
    assert np.allclose(u.conj().T @ u, np.eye(2))
    assert abs(u[0, 1]) < 1e-3 and abs(u[1, 0]) < 1e-3
    assert abs(abs(np.angle(u[1, 1] / u[0, 0])) - abs(phi)) < 1e-3

    analytic = np.sort(np.angle(np.linalg.eigvals(analytic_holonomy("left", path))))
    assert np.allclose(analytic, hol.eigenphases, atol=1e-3)


def test_octant_loop_without_equator_leg(four_qubit):
    hol = arm_holonomy(four_qubit, "left", clock_path(0.0, 50))
    assert np.allclose(hol.eigenphases, 0, atol=1e-9)


def test_moving_arms_rejected(ten_qubit, four_qubit):
    spec = ten_qubit.with_arm("right", ClockArm(1.0, 0.3, 0.0))
    with pytest.raises(ValueError):
        arm_holonomy(spec, "left", clock_path(HALF_PI, 10))
    with pytest.raises(ValueError):
        middle_arm_holonomy(clock_path(HALF_PI, 10), four_qubit)


def test_middle_arm_holonomy():
    hol = middle_arm_holonomy(clock_path(HALF_PI, 200, "middle"))
    phases = hol.eigenphases
    assert len(phases) == 4
    assert np.allclose(phases, [-math.pi / 4] * 2 + [math.pi / 4] * 2, atol=1e-3)
    assert hol.unitary.shape == (4, 4)

    analytic = np.sort(np.angle(np.linalg.eigvals(analytic_holonomy("middle", clock_path(HALF_PI, 200, "middle")))))
    assert np.allclose(analytic, phases, atol=1e-3)


def test_gap_closing_detected():
    basis = simultaneous_eigenbasis([PauliString.from_label("IZ")], 2, ("b",))

    def family(a, b):
        return OperatorSum.from_labels({"ZI": math.cos(a), "IZ": 0.0})

    with pytest.raises(GapClosedError) as e:
        wilson_loop(family, clock_path(HALF_PI, 4), basis)
    assert e.value.point is not None

    with pytest.raises(ValueError):
        wilson_loop(family, ParamPath.through([(0.0, 0.0), (0.3, 0.0)]), basis)


def test_majorana_loop_matches_spin_loop(four_qubit):
    path = clock_path(HALF_PI, 200)
    spin = arm_holonomy(four_qubit, "left", path)
    maj = majorana_wilson_loop(path)
    assert maj.unitary.shape == (2, 2)
    assert np.allclose(maj.eigenphases, spin.eigenphases, atol=1e-3)
