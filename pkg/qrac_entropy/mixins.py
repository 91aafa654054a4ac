from typing import Tuple

import numpy as np


class BlochVectorMixin:
    """Adds Bloch-vector accessors to pure-state and projector types"""

    bloch: Tuple[float, float, float]

    @property
    def vector(self) -> np.ndarray:
        """The Bloch vector as a fresh `numpy` array."""
        return np.array(self.bloch, dtype=float)

    @property
    def polar(self) -> float:
        raise NotImplementedError

    @property
    def azimuth(self) -> float:
        raise NotImplementedError

    @property
    def angles(self) -> Tuple[float, float]:
        """The (polar, azimuth) angle pair in radians."""
        return (self.polar, self.azimuth)

    def amplitudes(self) -> np.ndarray:
        """
        The normalized 2-component amplitude (cos(p/2), e^{i a} sin(p/2)).

        The amplitude of |0⟩ is real and non-negative.
        """
        half = self.polar / 2
        return np.array(
            [np.cos(half), np.exp(1j * self.azimuth) * np.sin(half)], dtype=complex
        )

    def matrix(self) -> np.ndarray:
        """The rank-1 projector |φ⟩⟨φ| as a 2×2 complex matrix."""
        amplitudes = self.amplitudes()
        return np.outer(amplitudes, amplitudes.conj())

    def overlap(self, other: "BlochVectorMixin") -> float:
        """Dot product of the two Bloch vectors."""
        return float(np.dot(self.bloch, other.bloch))
