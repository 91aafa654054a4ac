"""
Device descriptions, their probability tables and the scalar figures of merit.

A `Strategy` holds 2^n prepared states indexed by the input `a` and the b=0
outcome of each of the n measurements. Bit a_y of an input is its y-th most
significant bit, so inputs listed as 00…0, 00…1, …, 11…1 are in integer order.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np

from .bloch import Projector, QubitState, state_from_angles, projector_from_angles
from .exceptions import DomainError
from .utils import BIT_CONVENTION, validate_n, witness_signs, write_atomic


@dataclass(frozen=True)
class Strategy:
    """
    The full qubit device: one state per input and one binary measurement per bit.

    :param n: Number of encoded bits, 1 ≤ n ≤ 16.
    :param states: 2^n states indexed by the input `a`.
    :param measurements: n projectors, the b=0 outcome of measurements y = 1..n.
    """

    n: int
    states: Tuple[QubitState, ...]
    measurements: Tuple[Projector, ...]

    def __post_init__(self) -> None:
        validate_n(self.n)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "measurements", tuple(self.measurements))
        if len(self.states) != 2**self.n:
            raise DomainError(
                f"Expected {2**self.n} states for n={self.n}, got {len(self.states)}"
            )
        if len(self.measurements) != self.n:
            raise DomainError(
                f"Expected {self.n} measurements, got {len(self.measurements)}"
            )

    @classmethod
    def from_vectors(cls, states: np.ndarray, measurements: np.ndarray) -> "Strategy":
        """
        Constructs and returns a `Strategy` from stacked Bloch vectors.

        :param states: 2^n × 3 array of state directions.
        :param measurements: n × 3 array of measurement directions.
        """
        measurements = np.asarray(measurements, dtype=float)
        return cls(
            n=len(measurements),
            states=tuple(QubitState.from_bloch(row) for row in np.asarray(states)),
            measurements=tuple(Projector.from_bloch(row) for row in measurements),
        )

    def state_matrix(self) -> np.ndarray:
        """2^n × 3 array of state Bloch vectors."""
        return np.array([state.bloch for state in self.states], dtype=float)

    def measurement_matrix(self) -> np.ndarray:
        """n × 3 array of measurement Bloch vectors."""
        return np.array([m.bloch for m in self.measurements], dtype=float)


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """
    E[a][y] = P(b=0 | a, y); P(b=1 | a, y) is 1 - E[a][y].

    :param n: Number of encoded bits.
    :param E: Read-only 2^n × n array of probabilities.
    """

    n: int
    E: np.ndarray

    def __post_init__(self) -> None:
        validate_n(self.n)
        table = np.array(self.E, dtype=float)
        if table.shape != (2**self.n, self.n):
            raise DomainError(
                f"Expected a {2**self.n}×{self.n} table, got shape {table.shape}"
            )
        if np.any(table < 0.0) or np.any(table > 1.0):
            raise DomainError("Probability table entries must lie in [0, 1]")
        table.setflags(write=False)
        object.__setattr__(self, "E", table)

    def outcome(self, b: int) -> np.ndarray:
        """The 2^n × n array P(b | a, y)."""
        return self.E if b == 0 else 1.0 - self.E


@dataclass(frozen=True)
class ClassicalStrategy:
    """
    A deterministic one-bit channel.

    :param n: Number of encoded bits.
    :param encoder: The bit c sent for each input a = 0..2^n-1.
    :param decoders: For each y, the pair (D_y(0), D_y(1)) of output bits.
    """

    n: int
    encoder: Tuple[int, ...]
    decoders: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        validate_n(self.n)
        object.__setattr__(self, "encoder", tuple(int(c) for c in self.encoder))
        object.__setattr__(
            self, "decoders", tuple(tuple(int(b) for b in d) for d in self.decoders)
        )
        if len(self.encoder) != 2**self.n or any(c not in (0, 1) for c in self.encoder):
            raise DomainError("Encoder must map every one of the 2^n inputs to a bit")
        if len(self.decoders) != self.n or any(
            len(d) != 2 or any(b not in (0, 1) for b in d) for d in self.decoders
        ):
            raise DomainError("Each of the n decoders must map {0, 1} to a bit")


def probability_table(strategy: Strategy) -> ProbabilityTable:
    """
    Born-rule table of a strategy, E[a][y] = (1 + s_a·m_y) / 2.

    :param strategy: The device description.
    """
    overlaps = strategy.state_matrix() @ strategy.measurement_matrix().T
    return ProbabilityTable(n=strategy.n, E=np.clip(0.5 * (1.0 + overlaps), 0.0, 1.0))


def witness_t(table: ProbabilityTable) -> float:
    """Returns T = Σ_{a,y} (-1)^{a_y} E[a][y]."""
    return float(np.sum(witness_signs(table.n) * table.E))


def average_success(table: ProbabilityTable) -> float:
    """
    Returns the average success probability S = (1/(n 2^n)) Σ_{a,y} P(b=a_y | a, y).
    """
    signs = witness_signs(table.n)
    correct = np.where(signs > 0, table.E, 1.0 - table.E)
    return float(np.mean(correct))


def max_probability(table: ProbabilityTable) -> float:
    """Returns max_{b,a,y} P(b | a, y)."""
    return float(max(table.E.max(), (1.0 - table.E).max()))


def min_entropy(table: ProbabilityTable) -> float:
    """Returns H∞ = -log2 max_{b,a,y} P(b | a, y) in bits."""
    return max(0.0, -math.log2(max_probability(table)))


def classical_table(cs: ClassicalStrategy) -> ProbabilityTable:
    """
    Deterministic table of a classical strategy: E[a][y] = 1 iff D_y(encoder(a)) = 0.

    :param cs: The classical strategy.
    """
    decoders = np.array(cs.decoders, dtype=int)
    encoder = np.array(cs.encoder, dtype=int)
    outputs = decoders[:, encoder].T
    return ProbabilityTable(n=cs.n, E=(outputs == 0).astype(float))


#################
# SERIALIZATION #
#################


def strategy_to_dict(strategy: Strategy) -> Dict[str, Any]:
    """Returns the JSON-ready mapping of a strategy."""
    return {
        "n": strategy.n,
        "convention": BIT_CONVENTION,
        "states": [[state.theta, state.eta] for state in strategy.states],
        "measurements": [[m.psi, m.omega] for m in strategy.measurements],
    }


def strategy_from_dict(mapping: Dict[str, Any]) -> Strategy:
    """
    Build a strategy from its JSON mapping.

    :raises DomainError: If the mapping is malformed.
    """
    try:
        n = mapping["n"]
        states = [state_from_angles(*_pair(p)) for p in mapping["states"]]
        measurements = [projector_from_angles(*_pair(p)) for p in mapping["measurements"]]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"Malformed strategy: {exc}") from exc
    return Strategy(n=n, states=states, measurements=measurements)


def _pair(value: Sequence[float]) -> Tuple[float, float]:
    if len(value) != 2:
        raise DomainError(f"Expected an angle pair, got {value!r}")
    return float(value[0]), float(value[1])


def strategy_to_json(strategy: Strategy) -> str:
    """Returns the UTF-8 JSON text of a strategy."""
    return json.dumps(strategy_to_dict(strategy), indent=2) + "\n"


def strategy_from_json(text: str) -> Strategy:
    """Parse a strategy from its JSON text."""
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"Strategy file is not valid JSON: {exc}") from exc
    if not isinstance(mapping, dict):
        raise DomainError("Strategy JSON must be an object")
    return strategy_from_dict(mapping)


def save_strategy(strategy: Strategy, path: Union[str, Path]) -> None:
    """Write a strategy to `path` atomically."""
    write_atomic(path, strategy_to_json(strategy))


def load_strategy(path: Union[str, Path]) -> Strategy:
    """Read a strategy from `path`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"Could not read strategy file {path}: {exc}") from exc
    return strategy_from_json(text)
