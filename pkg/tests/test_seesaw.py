import numpy as np
import pytest

from qrac_entropy.bloch import projector_from_bloch, state_from_angles, state_from_bloch
from qrac_entropy.classical import classical_max_T
from qrac_entropy.config import SeesawConfig
from qrac_entropy.exceptions import DomainError
from qrac_entropy.seesaw import (
    optimal_measurements_for_states,
    optimal_states_for_measurements,
    run_seesaw_start,
    seesaw_optimize,
    witness_from_vectors,
)
from qrac_entropy.strategy import Strategy, probability_table, witness_t

from .conftest import SQRT2, SQRT3


X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)


def test_optimal_states_for_orthogonal_measurements():
    measurements = [projector_from_bloch(X), projector_from_bloch(Y)]
    states = optimal_states_for_measurements(measurements, 2)
    np.testing.assert_allclose(states[0].bloch, np.array([1, 1, 0]) / SQRT2, atol=1e-12)
    strategy = Strategy(n=2, states=states, measurements=measurements)
    assert witness_t(probability_table(strategy)) == pytest.approx(2 * SQRT2, abs=1e-12)


def test_single_bit_states_are_antipodal():
    states = optimal_states_for_measurements([projector_from_bloch(Z)], 1)
    np.testing.assert_allclose(states[0].bloch, Z, atol=1e-12)
    np.testing.assert_allclose(states[1].bloch, (0, 0, -1), atol=1e-12)
    strategy = Strategy(n=1, states=states, measurements=[projector_from_bloch(Z)])
    assert witness_t(probability_table(strategy)) == pytest.approx(1.0)


def test_measurements_from_square_states(qrac2):
    measurements = optimal_measurements_for_states(qrac2.states, 2)
    np.testing.assert_allclose(np.abs(measurements[0].bloch), X, atol=1e-12)
    np.testing.assert_allclose(np.abs(measurements[1].bloch), Y, atol=1e-12)


def test_degenerate_sums_keep_previous_measurements():
    states = [state_from_angles(0.4, 1.0)] * 4
    previous = [projector_from_bloch(X), projector_from_bloch(Y)]
    measurements = optimal_measurements_for_states(states, 2, previous)
    assert measurements == tuple(previous)


def test_measurements_for_protocol3_states(qrac3):
    measurements = optimal_measurements_for_states(qrac3.states, 3)
    strategy = Strategy(n=3, states=qrac3.states, measurements=measurements)
    assert witness_t(probability_table(strategy)) == pytest.approx(4 * SQRT3, abs=1e-12)
    gram = strategy.measurement_matrix() @ strategy.measurement_matrix().T
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)


def test_length_checks():
    with pytest.raises(DomainError):
        optimal_states_for_measurements([projector_from_bloch(Z)], 2)
    with pytest.raises(DomainError):
        optimal_measurements_for_states([state_from_bloch(Z)] * 3, 2)
    with pytest.raises(DomainError):
        seesaw_optimize(11, SeesawConfig(starts=1))


@pytest.mark.parametrize("n, expected", [(2, 2 * SQRT2), (3, 4 * SQRT3)])
def test_closed_form_maxima(n, expected):
    result = seesaw_optimize(n, SeesawConfig(starts=20, seed=7))
    assert result.t_quantum == pytest.approx(expected, abs=1e-9)
    assert witness_t(probability_table(result.strategy)) == pytest.approx(
        result.t_quantum, abs=1e-9
    )
    assert result.t_quantum >= classical_max_T(n).t_max


@pytest.mark.slow
@pytest.mark.parametrize("n, expected", [(4, 15.454813), (5, 34.172467)])
def test_known_maxima(n, expected):
    result = seesaw_optimize(n, SeesawConfig(starts=100))
    assert result.t_quantum == pytest.approx(expected, abs=1e-3)
    assert result.t_quantum >= classical_max_T(n).t_max


def test_half_steps_never_decrease_witness():
    config = SeesawConfig(starts=100, max_sweeps=200, seed=3)
    for start_index in range(config.starts):
        trace = run_seesaw_start(4, config, start_index).trace
        assert np.all(np.diff(trace) >= -1e-12)


def test_start_result_matches_recomputed_witness():
    start = run_seesaw_start(3, SeesawConfig(), 0)
    assert start.t == pytest.approx(witness_from_vectors(start.states, start.measurements))


def test_reproducible_for_a_seed():
    config = SeesawConfig(starts=5, seed=11)
    first, second = seesaw_optimize(3, config), seesaw_optimize(3, config)
    assert first.t_quantum == second.t_quantum
    assert first.start_index == second.start_index
    assert first.strategy == second.strategy
