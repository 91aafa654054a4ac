"""Exact classical bound on the witness by enumeration of deterministic one-bit strategies."""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .strategy import ClassicalStrategy, classical_table, witness_t
from .utils import validate_n, witness_signs


logger = logging.getLogger(__name__)

NAIVE_MAX_N = 3
DECODER_BLOCK = 4096


@dataclass(frozen=True)
class ClassicalBoundResult:
    """
    :param n: Number of encoded bits.
    :param t_max: Largest witness value of any deterministic one-bit strategy.
    :param witness_strategy: A strategy attaining `t_max`.
    """

    n: int
    t_max: float
    witness_strategy: ClassicalStrategy


def _decoder_digits(indices: np.ndarray, n: int) -> np.ndarray:
    """Base-4 digits of decoder tuple indices, y=1 first."""
    powers = 4 ** np.arange(n - 1, -1, -1)
    return (indices[:, None] // powers[None, :]) % 4


def classical_max_T(n: int) -> ClassicalBoundResult:
    """
    Compute T_n^classical exactly.

    For each of the 4^n decoder tuples the witness splits into independent
    per-input terms, so the best encoder picks, for each input, the bit whose
    decoded outputs agree most with the signs of that input. Ties prefer bit 0;
    among optimal decoder tuples the first in enumeration order is returned.

    :param n: Number of encoded bits, 1 ≤ n ≤ 16.
    :raises DomainError: If `n` is out of range.
    """
    n = validate_n(n)
    signs = witness_signs(n)
    total = 4**n

    best_value = -np.inf
    best_index = -1
    for start in range(0, total, DECODER_BLOCK):
        indices = np.arange(start, min(start + DECODER_BLOCK, total))
        digits = _decoder_digits(indices, n)
        # decoder code d encodes (D(0), D(1)) as the 2-bit number 2·D(0) + D(1)
        zero_on_0 = ((digits >> 1) & 1) == 0
        zero_on_1 = (digits & 1) == 0
        gain_0 = zero_on_0.astype(float) @ signs.T
        gain_1 = zero_on_1.astype(float) @ signs.T
        values = np.maximum(gain_0, gain_1).sum(axis=1)
        position = int(np.argmax(values))
        if values[position] > best_value:
            best_value = float(values[position])
            best_index = int(indices[position])

    digits = _decoder_digits(np.array([best_index]), n)[0]
    decoders = tuple(((int(d) >> 1) & 1, int(d) & 1) for d in digits)
    zero_on_0 = np.array([d[0] == 0 for d in decoders], dtype=float)
    zero_on_1 = np.array([d[1] == 0 for d in decoders], dtype=float)
    encoder = tuple(int(bit) for bit in (signs @ zero_on_1 > signs @ zero_on_0))

    strategy = ClassicalStrategy(n=n, encoder=encoder, decoders=decoders)
    t_max = witness_t(classical_table(strategy))
    logger.info("Classical bound for n=%d: T=%g", n, t_max)
    return ClassicalBoundResult(n=n, t_max=t_max, witness_strategy=strategy)


def naive_classical_max_T(n: int) -> float:
    """
    Compute T_n^classical by enumerating every encoder against every decoder tuple.

    Only tractable for n ≤ 3; serves as an independent check of `classical_max_T`.

    :raises DomainError: If `n` is outside [1, 3].
    """
    if validate_n(n) > NAIVE_MAX_N:
        raise DomainError(f"Naive enumeration is limited to n ≤ {NAIVE_MAX_N}")

    signs = witness_signs(n)
    decoder_choices = list(itertools.product((0, 1), repeat=2))
    best = -np.inf
    for encoder in itertools.product((0, 1), repeat=2**n):
        encoder = np.array(encoder)
        for decoders in itertools.product(decoder_choices, repeat=n):
            outputs = np.array(decoders)[:, encoder].T
            best = max(best, float(np.sum(signs * (outputs == 0))))
    return best
