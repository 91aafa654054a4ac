"""How the bounds and the certified randomness depend on the number of encoded bits."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

from .certifier import guessing_probability
from .classical import classical_max_T
from .config import CertifierConfig, SeesawConfig
from .geometry import geometry_report
from .seesaw import seesaw_optimize
from .utils import csv_text, format_decimal, write_atomic


logger = logging.getLogger(__name__)

SURVEY_COLUMNS = ("n", "t_classical", "t_quantum", "ratio", "s_quantum", "h_min", "alignment")


@dataclass(frozen=True)
class SurveyRow:
    """
    :param n: Number of encoded bits.
    :param t_classical: Classical witness bound.
    :param t_quantum: Qubit witness bound.
    :param ratio: t_quantum / t_classical.
    :param s_quantum: Average success probability at the qubit bound.
    :param h_min: Certified min-entropy at the qubit bound, `None` when skipped.
    :param alignment: max |s_a·m_y| of the see-saw optimum.
    """

    n: int
    t_classical: float
    t_quantum: float
    ratio: float
    s_quantum: float
    h_min: Optional[float]
    alignment: float


def survey(
    ns: Iterable[int],
    seesaw_config: Optional[SeesawConfig] = None,
    certifier_config: Optional[CertifierConfig] = None,
    with_entropy: bool = True,
) -> List[SurveyRow]:
    """
    Tabulate the bounds for each n in `ns`.

    :param ns: Values of n; the entropy column needs n ≤ 5.
    :param seesaw_config: Settings of the qubit bound search.
    :param certifier_config: Settings of the entropy bound search.
    :param with_entropy: Compute the certified min-entropy at the qubit bound.
    """
    rows = []
    for n in ns:
        t_classical = classical_max_T(n).t_max
        quantum = seesaw_optimize(n, seesaw_config)
        h_min = None
        if with_entropy:
            h_min = guessing_probability(n, quantum.t_quantum, certifier_config).h_min
        row = SurveyRow(
            n=n,
            t_classical=t_classical,
            t_quantum=quantum.t_quantum,
            ratio=quantum.t_quantum / t_classical,
            s_quantum=0.5 + quantum.t_quantum / (n * 2**n),
            h_min=h_min,
            alignment=geometry_report(quantum.strategy).alignment,
        )
        logger.info("Survey row: %s", row)
        rows.append(row)
    return rows


def survey_csv(rows: Iterable[SurveyRow]) -> str:
    """CSV text of survey rows."""
    return csv_text(
        SURVEY_COLUMNS,
        [
            (
                str(row.n),
                format_decimal(row.t_classical),
                format_decimal(row.t_quantum),
                format_decimal(row.ratio),
                format_decimal(row.s_quantum),
                "" if row.h_min is None else format_decimal(row.h_min),
                format_decimal(row.alignment),
            )
            for row in rows
        ],
    )


def write_survey_csv(rows: Iterable[SurveyRow], path: Union[str, Path]) -> None:
    """Write survey rows atomically."""
    write_atomic(path, survey_csv(rows))
