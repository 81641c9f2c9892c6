import pathlib
import sys

import pytest

from sparsefact.poly import MultiPoly
from sparsefact.sparselift import factor
from sparsefact.textio import parse

DATA = pathlib.Path(__file__).parent / "data"
BACKENDS = pathlib.Path(__file__).parent / "backends"
GOLDEN_VARS = ("a", "b", "c", "d", "E")

ACCEPTANCE = {}


def backend_cmd(name, *args):
    return " ".join([sys.executable, str(BACKENDS / name), *args])


@pytest.fixture(scope="session")
def golden_A() -> MultiPoly:
    return parse((DATA / "golden_A.txt").read_text(), GOLDEN_VARS)


@pytest.fixture(scope="session")
def golden_B() -> MultiPoly:
    return parse((DATA / "golden_B.txt").read_text(), GOLDEN_VARS)


@pytest.fixture(scope="session")
def golden_P(golden_A, golden_B) -> MultiPoly:
    return golden_A * golden_B


@pytest.fixture(scope="session")
def golden_outcome(golden_P):
    """One full factorization of the golden product, shared by several tests."""
    return factor(golden_P)


def record(criterion, ok, detail):
    """Print and remember one acceptance verdict; the summary is repeated at the end of the run."""
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
