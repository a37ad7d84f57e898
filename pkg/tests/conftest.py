import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from owjfa.core import parse_automaton  # noqa: E402

LAB_TEXT = """\
alphabet: a b
states: q0 q1
start: q0
accept: q0
q0 a -> q1
q1 b -> q0
"""

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def lab():
    return parse_automaton(LAB_TEXT)


@pytest.fixture
def fixtures():
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion: acceptance criterion with a one-line summary")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            for name, value in getattr(rep, "user_properties", []):
                if name == "summary":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
