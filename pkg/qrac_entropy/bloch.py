"""
Pure qubit states and rank-1 projective outcomes.

Both are stored as their Bloch vector together with the angle pair they were
built from. Angles follow |φ⟩ = cos(θ/2)|0⟩ + e^{iη} sin(θ/2)|1⟩ and the Bloch
vector is (sin θ cos η, sin θ sin η, cos θ).
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .exceptions import DomainError
from .mixins import BlochVectorMixin


TWO_PI = 2 * math.pi
ANGLE_SLACK = 1e-12
POLE_TOL = 1e-12


def canonical_angles(polar: float, azimuth: float) -> Tuple[float, float]:
    """
    Bring an angle pair to canonical form.

    The azimuth is reduced modulo 2π and set to 0 at the poles.

    :param polar: Polar angle, must lie in [0, π].
    :param azimuth: Azimuthal angle, any real.
    :raises DomainError: If the polar angle is out of range or either angle is not finite.
    """
    if not (math.isfinite(polar) and math.isfinite(azimuth)):
        raise DomainError(f"Angles must be finite, got ({polar}, {azimuth})")
    if not -ANGLE_SLACK <= polar <= math.pi + ANGLE_SLACK:
        raise DomainError(f"Polar angle must lie in [0, π], got {polar}")

    polar = min(max(polar, 0.0), math.pi)
    azimuth = math.fmod(azimuth, TWO_PI)
    if azimuth < 0:
        azimuth += TWO_PI
    if azimuth >= TWO_PI:
        azimuth = 0.0
    if abs(math.sin(polar)) < POLE_TOL:
        azimuth = 0.0
    return polar, azimuth


def bloch_from_angles(polar: float, azimuth: float) -> Tuple[float, float, float]:
    """Returns (sin p cos a, sin p sin a, cos p)."""
    sin_polar = math.sin(polar)
    return (
        sin_polar * math.cos(azimuth),
        sin_polar * math.sin(azimuth),
        math.cos(polar),
    )


def angles_from_bloch(vector: Sequence[float]) -> Tuple[float, float]:
    """
    Returns the canonical (polar, azimuth) pair of a non-zero 3-vector.

    :raises DomainError: If the vector is zero, not finite, or not of length 3.
    """
    x, y, z = _unit(vector)
    polar = math.atan2(math.hypot(x, y), z)
    azimuth = math.atan2(y, x)
    return canonical_angles(polar, azimuth)


def _unit(vector: Sequence[float]) -> Tuple[float, float, float]:
    array = np.asarray(vector, dtype=float)
    if array.shape != (3,) or not np.all(np.isfinite(array)):
        raise DomainError(f"Expected a finite 3-vector, got {vector!r}")
    norm = float(np.linalg.norm(array))
    if norm == 0.0:
        raise DomainError("The zero vector has no direction")
    x, y, z = (array / norm).tolist()
    return x, y, z


@dataclass(frozen=True)
class QubitState(BlochVectorMixin):
    """A pure qubit state |φ⟩ = cos(θ/2)|0⟩ + e^{iη} sin(θ/2)|1⟩."""

    theta: float
    eta: float
    bloch: Tuple[float, float, float]

    @property
    def polar(self) -> float:
        return self.theta

    @property
    def azimuth(self) -> float:
        return self.eta

    @classmethod
    def from_angles(cls, theta: float, eta: float) -> "QubitState":
        """Constructs and returns a `QubitState` from its angle pair."""
        theta, eta = canonical_angles(theta, eta)
        return cls(theta=theta, eta=eta, bloch=bloch_from_angles(theta, eta))

    @classmethod
    def from_bloch(cls, vector: Sequence[float]) -> "QubitState":
        """Constructs and returns a `QubitState` pointing along `vector`."""
        bloch = _unit(vector)
        theta, eta = angles_from_bloch(bloch)
        return cls(theta=theta, eta=eta, bloch=bloch)

    def state_vector(self) -> np.ndarray:
        """The state's 2-component complex amplitude."""
        return self.amplitudes()


@dataclass(frozen=True)
class Projector(BlochVectorMixin):
    """
    The b=0 outcome M^0 of a projective qubit measurement.

    The b=1 outcome I - M^0 corresponds to the antipodal Bloch vector.
    """

    psi: float
    omega: float
    bloch: Tuple[float, float, float]

    @property
    def polar(self) -> float:
        return self.psi

    @property
    def azimuth(self) -> float:
        return self.omega

    @classmethod
    def from_angles(cls, psi: float, omega: float) -> "Projector":
        """Constructs and returns a `Projector` from its angle pair."""
        psi, omega = canonical_angles(psi, omega)
        return cls(psi=psi, omega=omega, bloch=bloch_from_angles(psi, omega))

    @classmethod
    def from_bloch(cls, vector: Sequence[float]) -> "Projector":
        """Constructs and returns a `Projector` along `vector`."""
        bloch = _unit(vector)
        psi, omega = angles_from_bloch(bloch)
        return cls(psi=psi, omega=omega, bloch=bloch)

    def complement(self) -> "Projector":
        """The complementary outcome I - M^0."""
        return Projector.from_bloch(tuple(-component for component in self.bloch))


def state_from_angles(theta: float, eta: float) -> QubitState:
    """
    Build a pure state from its angle pair.

    :param theta: Polar angle in [0, π].
    :param eta: Relative phase; reduced modulo 2π.
    :raises DomainError: If `theta` is out of range.
    """
    return QubitState.from_angles(theta, eta)


def projector_from_angles(psi: float, omega: float) -> Projector:
    """
    Build a rank-1 projector from its angle pair; (0, 0) is |0⟩⟨0|.

    :param psi: Polar angle in [0, π].
    :param omega: Azimuth; reduced modulo 2π.
    :raises DomainError: If `psi` is out of range.
    """
    return Projector.from_angles(psi, omega)


def state_from_bloch(vector: Sequence[float]) -> QubitState:
    """Build the pure state whose Bloch vector points along `vector`."""
    return QubitState.from_bloch(vector)


def projector_from_bloch(vector: Sequence[float]) -> Projector:
    """Build the projector whose Bloch vector points along `vector`."""
    return Projector.from_bloch(vector)


def _check_bit(b: int) -> None:
    if b not in (0, 1):
        raise DomainError(f"Outcome must be 0 or 1, got {b!r}")


def born_probability(state: QubitState, outcome: Projector, b: int) -> float:
    """
    Probability of outcome `b` when `state` is measured with `outcome` as M^0.

    Computed as (1 + (-1)^b s·m) / 2 on the Bloch vectors.

    :param state: Prepared state.
    :param outcome: The b=0 projector of the measurement.
    :param b: Outcome bit.
    """
    _check_bit(b)
    sign = 1.0 if b == 0 else -1.0
    return 0.5 * (1.0 + sign * state.overlap(outcome))


def trace_probability(state: QubitState, outcome: Projector, b: int) -> float:
    """
    Probability of outcome `b` computed as tr(ρ M^b) with explicit 2×2 matrices.

    Used as an independent check of `born_probability`.
    """
    _check_bit(b)
    projector = outcome.matrix()
    if b == 1:
        projector = np.eye(2) - projector
    return float(np.real(np.trace(state.matrix() @ projector)))
