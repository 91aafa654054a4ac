"""
Monte-Carlo runs of the prepare-and-measure protocol and finite-statistics certification.

Each round draws an input a uniformly from 2^n values and a measurement y
uniformly from n values, then an outcome b from the Born rule. Rounds are
generated in chunks of 2^16, chunk k using its own stream derived from
(seed, k), so a transcript depends only on (strategy, rounds, seed).
"""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from .certifier import guessing_probability, is_positive, quantum_maximum
from .classical import classical_max_T
from .config import CertifierConfig
from .exceptions import DomainError, InsufficientStatisticsError
from .strategy import Strategy, probability_table
from .utils import BIT_CONVENTION, derive_rng, validate_n, witness_signs, write_atomic


logger = logging.getLogger(__name__)

CHUNK_ROUNDS = 2**16
COUNTS_ORDER = "a-major, then y = 1..n, then b = 0, 1"


@dataclass(frozen=True, eq=False)
class Transcript:
    """
    Outcome counts of a protocol run.

    :param n: Number of encoded bits.
    :param rounds: Number of rounds run.
    :param counts: 2^n × n × 2 integer array N[a][y-1][b].
    :param seed: Seed the run was generated with.
    """

    n: int
    rounds: int
    counts: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        validate_n(self.n)
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (2**self.n, self.n, 2):
            raise DomainError(
                f"Expected counts of shape {(2**self.n, self.n, 2)}, got {counts.shape}"
            )
        if np.any(counts < 0):
            raise DomainError("Counts must be non-negative")
        if int(counts.sum()) != self.rounds:
            raise DomainError(
                f"Counts add up to {int(counts.sum())}, expected {self.rounds} rounds"
            )
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True)
class CertifiedRate:
    """
    :param t_hat: Estimated witness.
    :param t_std_err: Standard error of the estimate.
    :param confidence: One-sided confidence level of `t_lower`.
    :param t_lower: Lower confidence bound on the witness.
    :param h_min_rate: Certified min-entropy in bits per round.
    """

    t_hat: float
    t_std_err: float
    confidence: float
    t_lower: float
    h_min_rate: float


def run_protocol(strategy: Strategy, rounds: int, seed: int) -> Transcript:
    """
    Simulate honest devices running `strategy`.

    :param strategy: The devices' states and measurements.
    :param rounds: Number of rounds, at least 1.
    :param seed: Seed of the run.
    :raises DomainError: If `rounds` is not a positive integer.
    """
    if isinstance(rounds, bool) or not isinstance(rounds, int) or rounds < 1:
        raise DomainError(f"rounds must be a positive integer, got {rounds!r}")

    n = strategy.n
    inputs = 2**n
    E = probability_table(strategy).E
    counts = np.zeros(inputs * n * 2, dtype=np.int64)

    for chunk, start in enumerate(range(0, rounds, CHUNK_ROUNDS)):
        size = min(CHUNK_ROUNDS, rounds - start)
        rng = derive_rng(seed, chunk)
        a = rng.integers(0, inputs, size)
        y = rng.integers(0, n, size)
        b = (rng.random(size) >= E[a, y]).astype(np.int64)
        counts += np.bincount((a * n + y) * 2 + b, minlength=counts.size)

    logger.debug("Simulated %d rounds of n=%d with seed %d", rounds, n, seed)
    return Transcript(n=n, rounds=rounds, counts=counts.reshape(inputs, n, 2), seed=seed)


def estimate_witness(transcript: Transcript) -> Tuple[float, float]:
    """
    Plug-in estimate of T and its standard error from a transcript.

    :raises InsufficientStatisticsError: If some (a, y) was never played.
    :return: (t_hat, t_std_err)
    """
    totals = transcript.counts.sum(axis=2)
    empty = np.argwhere(totals == 0)
    if len(empty):
        a, y = empty[0]
        raise InsufficientStatisticsError((int(a), int(y) + 1))

    estimate = transcript.counts[:, :, 0] / totals
    t_hat = float(np.sum(witness_signs(transcript.n) * estimate))
    variance = float(np.sum(estimate * (1.0 - estimate) / totals))
    return t_hat, math.sqrt(variance)


def lower_confidence_bound(t_hat: float, t_std_err: float, confidence: float) -> float:
    """
    One-sided normal-approximation lower bound t_hat - z(confidence) · t_std_err.

    :raises DomainError: If `confidence` lies outside [0.5, 1).
    """
    if not 0.5 <= confidence < 1.0:
        raise DomainError(f"confidence must lie in [0.5, 1), got {confidence}")
    if t_std_err < 0:
        raise DomainError(f"t_std_err must be non-negative, got {t_std_err}")
    return t_hat - float(norm.ppf(confidence)) * t_std_err


def certify_rate(
    t_hat: float,
    t_std_err: float,
    n: int,
    confidence: float,
    config: Optional[CertifierConfig] = None,
) -> CertifiedRate:
    """
    Certified min-entropy per round from an estimated witness.

    The rate is the bound at the lower confidence limit of the witness, and 0
    when that limit is at or below the classical bound, exceeds the qubit
    maximum, or does not certify a positive amount of randomness.

    :param t_hat: Estimated witness.
    :param t_std_err: Its standard error.
    :param n: Number of encoded bits.
    :param confidence: One-sided confidence level in [0.5, 1).
    :param config: Search settings of the guessing-probability bound.
    """
    t_lower = lower_confidence_bound(t_hat, t_std_err, confidence)
    config = config or CertifierConfig()

    rate = 0.0
    if t_lower <= classical_max_T(n).t_max:
        logger.info("T_lower=%.6f does not exceed the classical bound", t_lower)
    elif t_lower > quantum_maximum(n) + config.constraint_tol:
        logger.warning(
            "T_lower=%.6f exceeds the qubit maximum for n=%d; the devices are not qubit devices",
            t_lower,
            n,
        )
    else:
        point = guessing_probability(n, t_lower, config)
        if is_positive(point):
            rate = point.h_min

    return CertifiedRate(
        t_hat=t_hat,
        t_std_err=t_std_err,
        confidence=confidence,
        t_lower=t_lower,
        h_min_rate=rate,
    )


#################
# SERIALIZATION #
#################


def transcript_to_dict(transcript: Transcript) -> Dict[str, Any]:
    return {
        "n": transcript.n,
        "rounds": transcript.rounds,
        "seed": transcript.seed,
        "convention": BIT_CONVENTION,
        "counts_order": COUNTS_ORDER,
        "counts": transcript.counts.reshape(-1).tolist(),
    }


def transcript_from_dict(mapping: Dict[str, Any]) -> Transcript:
    """
    Build a transcript from its JSON mapping.

    :raises DomainError: If the mapping is malformed.
    """
    try:
        n = validate_n(mapping["n"])
        counts = np.array(mapping["counts"], dtype=np.int64)
        return Transcript(
            n=n,
            rounds=int(mapping["rounds"]),
            counts=counts.reshape(2**n, n, 2),
            seed=int(mapping["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"Malformed transcript: {exc}") from exc


def transcript_to_json(transcript: Transcript) -> str:
    return json.dumps(transcript_to_dict(transcript), indent=2) + "\n"


def transcript_from_json(text: str) -> Transcript:
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"Transcript file is not valid JSON: {exc}") from exc
    if not isinstance(mapping, dict):
        raise DomainError("Transcript JSON must be an object")
    return transcript_from_dict(mapping)


def save_transcript(transcript: Transcript, path: Union[str, Path]) -> None:
    """Write a transcript to `path` atomically."""
    write_atomic(path, transcript_to_json(transcript))


def load_transcript(path: Union[str, Path]) -> Transcript:
    """Read a transcript from `path`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"Could not read transcript file {path}: {exc}") from exc
    return transcript_from_json(text)
