from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from pentatile.circlepack import CENTER, CORNER, TriComplex, pack_complex

VERDICTS: list[str] = []


@lru_cache(maxsize=None)
def packed(n: int, m: int):
    """Normalized packing of K_n refined m times, shared across test modules."""
    return pack_complex(n, m)


def flower(k: int) -> TriComplex:
    """One interior vertex (0) surrounded by k boundary petals."""
    faces = np.array([(0, 1 + i, 1 + (i + 1) % k) for i in range(k)])
    kinds = np.array([CENTER] + [CORNER] * k)
    return TriComplex(faces, kinds, np.zeros(k + 1, dtype=int), {})


def record(label: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    VERDICTS.append(line)
    print(line)


@pytest.fixture
def verdict():
    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
