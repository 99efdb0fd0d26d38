from __future__ import annotations

from pathlib import Path

import pytest

from heffter.arrayio import read_file

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# name -> (m, n, s, k, t)
FIXTURES = {
    "H24_6x12_8_4": (6, 12, 8, 4, 24),
    "H16_5x10_8_4": (5, 10, 8, 4, 16),
    "H12_9x9_8_8": (9, 9, 8, 8, 12),
    "H10_5x10_8_4": (5, 10, 8, 4, 10),
    "H12_20x15_6_8": (20, 15, 6, 8, 12),
    "H5_6x15_10_4": (6, 15, 10, 4, 5),
    "H32_16x16_14_14": (16, 16, 14, 14, 32),
    "H15_20x12_6_10": (20, 12, 6, 10, 15),
}


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def load_fixture(name: str):
    return read_file(fixture_path(name))


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(name) for name in FIXTURES}
