import numpy as np
import pytest

from mpso_lssvm.data import Dataset, build_dataset, RawRecord

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


def make_dataset(x, y) -> Dataset:
    x = np.asarray(x, dtype=float)
    return Dataset(x, np.asarray(y, dtype=float), x == 0)


@pytest.fixture
def toy_data():
    """Two well separated Gaussian blobs, 20 points per class."""
    rng = np.random.default_rng(7)
    x = np.vstack([rng.normal(-1.5, 1.0, (20, 3)), rng.normal(1.5, 1.0, (20, 3))])
    y = np.r_[-np.ones(20), np.ones(20)]
    return make_dataset(x, y)


@pytest.fixture
def tiny_records():
    return [
        RawRecord((6, 148, 72, 35, 0, 33.6, 0.627, 50), 1),
        RawRecord((1, 85, 66, 29, 0, 26.6, 0.351, 31), 0),
        RawRecord((8, 183, 64, 0, 0, 23.3, 0.672, 32), 1),
        RawRecord((1, 89, 66, 23, 94, 28.1, 0.167, 21), 0),
    ]


@pytest.fixture
def tiny_dataset(tiny_records):
    return build_dataset(tiny_records, standardize=False)
