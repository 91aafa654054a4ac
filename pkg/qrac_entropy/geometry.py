"""Shape of optimal codes on the Bloch sphere."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .strategy import Strategy


COPLANAR_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GeometryReport:
    """
    :param singular_values: Singular values of the stacked state and measurement vectors, descending.
    :param coplanar: Whether every vector lies in one plane through the origin.
    :param measurement_gram: n × n matrix of measurement overlaps m_y·m_y'.
    :param max_measurement_overlap: Largest |m_y·m_y'| over y ≠ y'; 0 when n = 1.
    :param alignment: max_{a,y} |s_a·m_y|, how close the nearest state sits to a measurement axis.
    """

    singular_values: Tuple[float, ...]
    coplanar: bool
    measurement_gram: np.ndarray
    max_measurement_overlap: float
    alignment: float

    @property
    def dimension(self) -> int:
        """Number of singular values above the coplanarity tolerance."""
        return sum(value > COPLANAR_TOL for value in self.singular_values)


def geometry_report(strategy: Strategy) -> GeometryReport:
    """
    Describe how the states and measurements of `strategy` fill the sphere.

    :param strategy: Typically a see-saw optimum.
    """
    states = strategy.state_matrix()
    measurements = strategy.measurement_matrix()
    singular_values = np.linalg.svd(np.vstack([states, measurements]), compute_uv=False)

    gram = measurements @ measurements.T
    off_diagonal = np.abs(gram - np.diag(np.diag(gram)))
    alignment = float(np.max(np.abs(states @ measurements.T)))
    return GeometryReport(
        singular_values=tuple(float(v) for v in singular_values),
        coplanar=bool(singular_values[-1] < COPLANAR_TOL),
        measurement_gram=gram,
        max_measurement_overlap=float(off_diagonal.max()),
        alignment=alignment,
    )
