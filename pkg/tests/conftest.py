from pathlib import Path

import pytest

from dpnlive.textio import parse

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = sorted((FIXTURES / "corpus").glob("*.dpn"))
ERROR_CASES = sorted((FIXTURES / "errors").glob("*.dpn"))


def load(name: str):
    return parse((FIXTURES / "corpus" / f"{name}.dpn").read_text())


@pytest.fixture
def e1():
    return load("e1")


@pytest.fixture
def e2():
    return load("e2")


@pytest.fixture
def e3():
    return load("e3")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
