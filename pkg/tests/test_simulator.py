import math

import numpy as np
import pytest

from qrac_entropy.exceptions import DomainError, InsufficientStatisticsError
from qrac_entropy.simulator import (
    CHUNK_ROUNDS,
    Transcript,
    certify_rate,
    estimate_witness,
    load_transcript,
    lower_confidence_bound,
    run_protocol,
    save_transcript,
    transcript_from_json,
    transcript_to_dict,
)
from qrac_entropy.strategy import Strategy

from .conftest import SQRT3


T3 = 4 * SQRT3


@pytest.fixture
def deterministic() -> Strategy:
    """n=1 code whose outcome always equals the input bit."""
    return Strategy.from_vectors(
        np.array([(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]), np.array([(0.0, 0.0, 1.0)])
    )


def test_deterministic_devices(deterministic):
    transcript = run_protocol(deterministic, 1000, seed=3)
    assert transcript.rounds == 1000
    assert transcript.counts.sum() == 1000
    assert transcript.counts[0, 0, 1] == 0
    assert transcript.counts[1, 0, 0] == 0

    t_hat, t_std_err = estimate_witness(transcript)
    assert t_hat == 1.0
    assert t_std_err == 0.0


def test_transcript_is_reproducible(qrac3):
    first = run_protocol(qrac3, 10_000, seed=11)
    second = run_protocol(qrac3, 10_000, seed=11)
    other = run_protocol(qrac3, 10_000, seed=12)
    np.testing.assert_array_equal(first.counts, second.counts)
    assert not np.array_equal(first.counts, other.counts)


def test_runs_over_several_chunks(qrac3):
    rounds = 2 * CHUNK_ROUNDS + 5
    transcript = run_protocol(qrac3, rounds, seed=0)
    assert transcript.counts.sum() == rounds
    assert transcript.counts.shape == (8, 3, 2)
    assert not transcript.counts.flags.writeable


@pytest.mark.parametrize("rounds", [0, -1, 2.5, True])
def test_rounds_must_be_positive(qrac3, rounds):
    with pytest.raises(DomainError):
        run_protocol(qrac3, rounds, seed=0)


def test_transcript_validation():
    with pytest.raises(DomainError):
        Transcript(n=1, rounds=2, counts=np.ones((2, 2, 2), dtype=int), seed=0)
    with pytest.raises(DomainError):
        Transcript(n=1, rounds=0, counts=np.array([[[1, -1]], [[0, 0]]]), seed=0)
    with pytest.raises(DomainError):
        Transcript(n=1, rounds=5, counts=np.ones((2, 1, 2), dtype=int), seed=0)


def test_estimator_on_known_counts():
    transcript = Transcript(n=1, rounds=8, counts=np.array([[[3, 1]], [[1, 3]]]), seed=0)
    t_hat, t_std_err = estimate_witness(transcript)
    assert t_hat == pytest.approx(0.5)
    assert t_std_err == pytest.approx(math.sqrt(2 * 0.75 * 0.25 / 4))


def test_empty_cell_is_reported():
    counts = np.zeros((4, 2, 2), dtype=int)
    counts[:, 0, 0] = 5
    counts[:3, 1, 1] = 5
    transcript = Transcript(n=2, rounds=int(counts.sum()), counts=counts, seed=0)
    with pytest.raises(InsufficientStatisticsError) as info:
        estimate_witness(transcript)
    assert info.value.cell == (3, 2)
    assert "a=3" in str(info.value) and "y=2" in str(info.value)


def test_three_bit_code_estimate(qrac3):
    t_hat, t_std_err = estimate_witness(run_protocol(qrac3, 10_000, seed=1))
    assert t_std_err == pytest.approx(math.sqrt(96 / 10_000), abs=0.005)
    assert abs(t_hat - T3) < 5 * t_std_err


def test_lower_confidence_bound():
    assert lower_confidence_bound(6.8, 0.1, 0.5) == 6.8
    assert lower_confidence_bound(6.8, 0.1, 0.95) == pytest.approx(6.8 - 0.164485, abs=1e-5)
    for confidence in (1.0, 0.4, 1.5):
        with pytest.raises(DomainError):
            lower_confidence_bound(6.8, 0.1, confidence)


def test_no_rate_at_or_below_classical_bound():
    rate = certify_rate(5.9, 0.0, 3, 0.95)
    assert rate.t_lower == 5.9
    assert rate.h_min_rate == 0.0


def test_no_rate_above_qubit_maximum():
    assert certify_rate(7.5, 0.0, 3, 0.95).h_min_rate == 0.0


def test_infinite_statistics_rate(fast_certifier):
    rate = certify_rate(T3 - 1e-9, 0.0, 3, 0.95, fast_certifier)
    assert rate.h_min_rate == pytest.approx(0.3425, abs=0.005)


def test_simulated_rate_is_positive(qrac3, fast_certifier):
    t_hat, t_std_err = estimate_witness(run_protocol(qrac3, 1_000_000, seed=2))
    rate = certify_rate(t_hat, t_std_err, 3, 0.95, fast_certifier)
    assert rate.t_lower < t_hat
    assert 0.0 < rate.h_min_rate < 0.3425 + 0.005


def test_transcript_file(tmp_path, qrac3):
    transcript = run_protocol(qrac3, 500, seed=4)
    path = tmp_path / "transcript.json"
    save_transcript(transcript, path)
    loaded = load_transcript(path)
    assert loaded.n == 3 and loaded.rounds == 500 and loaded.seed == 4
    np.testing.assert_array_equal(loaded.counts, transcript.counts)
    assert "counts_order" in transcript_to_dict(transcript)


@pytest.mark.parametrize("text", ["not json", "[1, 2]", '{"n": 1, "rounds": 2}'])
def test_malformed_transcript(text):
    with pytest.raises(DomainError):
        transcript_from_json(text)


def test_missing_transcript_file(tmp_path):
    with pytest.raises(DomainError):
        load_transcript(tmp_path / "missing.json")


#############################
# Reproductions (full runs) #
#############################


@pytest.mark.slow
def test_standard_error_scales_with_rounds(qrac3):
    _, small = estimate_witness(run_protocol(qrac3, 10_000, seed=5))
    _, large = estimate_witness(run_protocol(qrac3, 40_000, seed=5))
    assert small / large == pytest.approx(2.0, rel=0.05)


@pytest.mark.slow
def test_lower_bound_coverage(qrac3):
    covered = 0
    for seed in range(500):
        t_hat, t_std_err = estimate_witness(run_protocol(qrac3, 100_000, seed=seed))
        covered += lower_confidence_bound(t_hat, t_std_err, 0.95) <= T3
    assert covered / 500 >= 0.93


@pytest.mark.slow
def test_estimate_error_shrinks_as_inverse_root_of_rounds(qrac3):
    mean_errors = []
    for rounds in (10**3, 10**4, 10**5, 10**6):
        errors = [
            abs(estimate_witness(run_protocol(qrac3, rounds, seed=seed))[0] - T3)
            for seed in range(100)
        ]
        mean_errors.append(float(np.mean(errors)))

    expected = math.sqrt(10)
    for larger, smaller in zip(mean_errors, mean_errors[1:]):
        assert expected / 1.5 <= larger / smaller <= expected * 1.5


@pytest.mark.slow
def test_standard_error_matches_spread_across_seeds(qrac3):
    estimates = [estimate_witness(run_protocol(qrac3, 10_000, seed=seed)) for seed in range(200)]
    t_hats = np.array([t_hat for t_hat, _ in estimates])
    std_errs = np.array([t_std_err for _, t_std_err in estimates])
    ratio = float(np.std(t_hats, ddof=1) / np.mean(std_errs))
    assert 1 / 1.2 <= ratio <= 1.2
