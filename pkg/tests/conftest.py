import pytest

from oracles import ENV1
from runway_planner import SlotContext, validate_envelope

ACCEPTANCE_LINES = []


@pytest.fixture
def env1():
    return validate_envelope(ENV1, "ENV1")


@pytest.fixture
def ctx1(env1):
    return SlotContext(env1, q_a=2.0, q_d=2.0, p_a=1.0, p_d=1.0, lambda_a=2.0, lambda_d=2.0)


@pytest.fixture
def acceptance():
    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
