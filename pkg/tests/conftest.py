from __future__ import annotations

from pathlib import Path

import pytest

from zreg import _parallel
from zreg.primes import sieve_to_count

DATA = Path(__file__).parent / "data"


def load_random_z() -> list[complex]:
    pts = []
    for line in (DATA / "random_z.txt").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        a, b = line.split()
        pts.append(complex(float(a), float(b)))
    return pts


@pytest.fixture(scope="session")
def random_z():
    return load_random_z()


@pytest.fixture(scope="session")
def table():
    return sieve_to_count(2 * 10**5)


@pytest.fixture(autouse=True)
def _single_thread():
    _parallel.set_threads(1)
    yield
    _parallel.set_threads(1)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """record(criterion, ok, detail) prints a PASS/FAIL line and keeps it for the summary."""
    lines = request.config._acceptance_lines

    def record(k, ok, detail=""):
        line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
