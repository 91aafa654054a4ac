import math

import numpy as np
import pytest

from qrac_entropy.bloch import (
    Projector,
    QubitState,
    born_probability,
    projector_from_angles,
    projector_from_bloch,
    state_from_angles,
    state_from_bloch,
    trace_probability,
)
from qrac_entropy.exceptions import DomainError
from qrac_entropy.protocol3 import XI

from .conftest import SQRT3


@pytest.mark.parametrize(
    "theta, eta, expected",
    [
        (0.0, 0.0, (0.0, 0.0, 1.0)),
        (math.pi / 2, 0.0, (1.0, 0.0, 0.0)),
        (math.pi / 2, math.pi / 2, (0.0, 1.0, 0.0)),
    ],
)
def test_state_from_angles_bloch_vector(theta, eta, expected):
    state = state_from_angles(theta, eta)
    np.testing.assert_allclose(state.bloch, expected, atol=1e-12)
    assert np.linalg.norm(state.vector) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "psi, omega, expected",
    [
        (0.0, 0.0, (0.0, 0.0, 1.0)),
        (math.pi, 0.0, (0.0, 0.0, -1.0)),
        (math.pi / 2, math.pi / 2, (0.0, 1.0, 0.0)),
    ],
)
def test_projector_from_angles_bloch_vector(psi, omega, expected):
    np.testing.assert_allclose(projector_from_angles(psi, omega).bloch, expected, atol=1e-12)


def test_first_measurement_is_zero_projector():
    np.testing.assert_allclose(
        projector_from_angles(0.0, 0.0).matrix(), [[1, 0], [0, 0]], atol=1e-15
    )


def test_eta_is_reduced_modulo_two_pi():
    state = state_from_angles(1.0, -math.pi / 4)
    assert state.eta == pytest.approx(7 * math.pi / 4)
    assert 0.0 <= state_from_angles(1.0, 5 * math.pi).eta < 2 * math.pi


@pytest.mark.parametrize("theta", [-0.1, math.pi + 0.1, float("nan")])
def test_out_of_range_polar_angle_rejected(theta):
    with pytest.raises(DomainError):
        state_from_angles(theta, 0.0)
    with pytest.raises(DomainError):
        projector_from_angles(theta, 0.0)


def test_zero_amplitude_is_real_and_non_negative(rng):
    for theta, eta in zip(rng.uniform(0, math.pi, 50), rng.uniform(0, 2 * math.pi, 50)):
        amplitude = state_from_angles(theta, eta).state_vector()[0]
        assert amplitude.imag == 0.0
        assert amplitude.real >= 0.0


def test_poles_have_zero_azimuth():
    assert state_from_angles(0.0, 1.3).eta == 0.0
    assert state_from_angles(math.pi, 2.0).eta == 0.0
    assert state_from_bloch((0.0, 0.0, -2.0)).eta == 0.0


def test_angle_round_trip(rng):
    for theta, eta in zip(rng.uniform(0.01, math.pi - 0.01, 200), rng.uniform(0, 2 * math.pi, 200)):
        state = state_from_angles(theta, eta)
        again = QubitState.from_bloch(state.bloch)
        assert again.theta == pytest.approx(theta, abs=1e-10)
        assert again.eta == pytest.approx(state.eta, abs=1e-10)


def test_from_bloch_normalizes_and_rejects_zero():
    np.testing.assert_allclose(projector_from_bloch((0.0, 3.0, 0.0)).bloch, (0, 1, 0))
    with pytest.raises(DomainError):
        state_from_bloch((0.0, 0.0, 0.0))


def test_complement_is_antipodal():
    projector = projector_from_angles(1.1, 0.4)
    complement = projector.complement()
    np.testing.assert_allclose(complement.vector, -projector.vector, atol=1e-12)
    np.testing.assert_allclose(
        complement.matrix(), np.eye(2) - projector.matrix(), atol=1e-12
    )


def test_born_probability_examples():
    up = state_from_angles(0.0, 0.0)
    z = projector_from_angles(0.0, 0.0)
    assert born_probability(up, z, 0) == 1.0
    assert born_probability(state_from_angles(math.pi, 0.0), z, 0) == pytest.approx(0.0, abs=1e-15)
    assert born_probability(state_from_angles(math.pi / 2, 0.0), z, 0) == pytest.approx(0.5)

    first = state_from_angles(2 * XI, math.pi / 4)
    assert born_probability(first, z, 0) == pytest.approx(0.5 + SQRT3 / 6, abs=1e-12)
    assert born_probability(first, z, 0) == pytest.approx(0.7886751, abs=1e-7)


def test_born_probability_rejects_non_bit():
    with pytest.raises(DomainError):
        born_probability(state_from_angles(0.0, 0.0), projector_from_angles(0.0, 0.0), 2)


def test_trace_and_bloch_paths_agree(rng):
    for _ in range(1000):
        state = state_from_angles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        outcome = Projector.from_angles(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        for b in (0, 1):
            assert born_probability(state, outcome, b) == pytest.approx(
                trace_probability(state, outcome, b), abs=1e-12
            )
        total = born_probability(state, outcome, 0) + born_probability(state, outcome, 1)
        assert total == pytest.approx(1.0, abs=1e-15)
