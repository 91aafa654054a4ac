import csv
import functools
import io
import os
import tempfile
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .exceptions import DomainError


MAX_N = 16

BIT_CONVENTION = "a_y is the y-th most significant bit of a (y=1 is the MSB)"


def validate_n(n: int, upper: int = MAX_N) -> int:
    """
    Check that `n` is an integer in [1, upper].

    :param n: Number of encoded bits.
    :param upper: Largest admissible value.
    :raises DomainError: If `n` is out of range.
    :return: `n`
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"n must be an integer, got {type(n).__name__}")
    if not 1 <= n <= upper:
        raise DomainError(f"n must lie in [1, {upper}], got {n}")
    return int(n)


def input_bit(a: int, y: int, n: int) -> int:
    """
    Returns bit a_y of input `a`.

    :param a: Input index in [0, 2^n).
    :param y: Bit position in [1, n], 1 being the most significant bit.
    :param n: Number of encoded bits.
    """
    return (a >> (n - y)) & 1


@functools.lru_cache(maxsize=None)
def _witness_signs(n: int) -> np.ndarray:
    a = np.arange(2**n)[:, None]
    shifts = n - np.arange(1, n + 1)[None, :]
    signs = 1.0 - 2.0 * ((a >> shifts) & 1)
    signs.setflags(write=False)
    return signs


def witness_signs(n: int) -> np.ndarray:
    """
    Returns the read-only 2^n × n matrix of signs (-1)^{a_y}.

    :param n: Number of encoded bits.
    """
    return _witness_signs(validate_n(n))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """
    Returns an independent generator for the stream identified by `key`.

    Streams depend only on `(seed, key)`, never on the order they are requested in.

    :param seed: Master seed.
    :param key: Stream identifier, e.g. the start or chunk index.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(sequence))


def random_unit_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    """Returns `count` unit 3-vectors distributed uniformly on the sphere."""
    vectors = rng.standard_normal((count, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def format_decimal(value: float, places: int = 9) -> str:
    """Fixed-point formatting used by every CSV writer."""
    return f"{value:.{places}f}"


def csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Returns CSV text with a header row and `\\n` line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_atomic(path: Union[str, Path], text: str) -> None:
    """
    Write `text` to `path` as UTF-8 via a temporary file and a rename.

    :param path: Destination file.
    :param text: File contents.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as file:
            file.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    return None
