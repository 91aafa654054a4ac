"""The explicit optimal 3→1 code: states on the vertices of a cube, Pauli measurements."""

import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from .bloch import projector_from_angles, state_from_angles
from .strategy import (
    ProbabilityTable,
    Strategy,
    average_success,
    min_entropy,
    probability_table,
    strategy_to_dict,
    witness_t,
)
from .utils import witness_signs


XI = math.acos(math.sqrt(0.5 + math.sqrt(3) / 6))
EQUALITY_TOL = 1e-12

# Relative phases of |φ(a_1 a_2 a_3)⟩ indexed by (a_2, a_3).
PHASES = {
    (0, 0): math.pi / 4,
    (0, 1): -math.pi / 4,
    (1, 0): 3 * math.pi / 4,
    (1, 1): -3 * math.pi / 4,
}


@dataclass(frozen=True, eq=False)
class Protocol3Report:
    """
    :param strategy: The 3→1 code.
    :param xi: ξ = arccos √(1/2 + √3/6).
    :param t3: Witness value of the code.
    :param s3: Average success probability.
    :param h_min: Min-entropy of the code's table in bits.
    :param table: The code's probability table.
    :param all_correct_equal: Whether all 24 correct-guess probabilities coincide.
    """

    strategy: Strategy
    xi: float
    t3: float
    s3: float
    h_min: float
    table: ProbabilityTable
    all_correct_equal: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "strategy": strategy_to_dict(self.strategy),
            "xi": self.xi,
            "t3": self.t3,
            "s3": self.s3,
            "h_min": self.h_min,
            "table": self.table.E.tolist(),
            "all_correct_equal": self.all_correct_equal,
        }


def build_protocol3() -> Strategy:
    """
    Build the optimal 3→1 code.

    Inputs with a_1 = 0 are cos ξ|0⟩ + e^{iφ} sin ξ|1⟩, those with a_1 = 1 are
    sin ξ|0⟩ + e^{iφ} cos ξ|1⟩, with φ = ±π/4, ±3π/4 chosen by (a_2, a_3).
    The measurements are σ_z, σ_x and σ_y.
    """
    states = []
    for a in range(8):
        a1, a2, a3 = (a >> 2) & 1, (a >> 1) & 1, a & 1
        theta = 2 * XI if a1 == 0 else math.pi - 2 * XI
        states.append(state_from_angles(theta, PHASES[(a2, a3)]))

    measurements = (
        projector_from_angles(0.0, 0.0),
        projector_from_angles(math.pi / 2, 0.0),
        projector_from_angles(math.pi / 2, math.pi / 2),
    )
    return Strategy(n=3, states=tuple(states), measurements=measurements)


def verify_protocol3() -> Protocol3Report:
    """Build the 3→1 code and evaluate its figures of merit."""
    strategy = build_protocol3()
    table = probability_table(strategy)
    signs = witness_signs(3)
    correct = np.where(signs > 0, table.E, 1.0 - table.E)
    return Protocol3Report(
        strategy=strategy,
        xi=XI,
        t3=witness_t(table),
        s3=average_success(table),
        h_min=min_entropy(table),
        table=table,
        all_correct_equal=bool(np.ptp(correct) <= EQUALITY_TOL),
    )
