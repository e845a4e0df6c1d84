import pytest

from lpnreach import load_model
from lpnreach.expr import parse_boolean, parse_numeric
from lpnreach.model import TRUE, LpnModule, Transition
from lpnreach.modelfile import builtin_model_path

CIRCUIT_PATH = builtin_model_path("fig1_circuit.lpn")


@pytest.fixture(scope="session")
def circuit():
    return load_model(CIRCUIT_PATH)


def trans(name, pre, post, guard=None, **assigns):
    """Transition from compact test notation; assignment values are text."""
    return Transition(
        name, frozenset(pre), frozenset(post),
        parse_boolean(guard) if guard else TRUE,
        tuple((v, parse_numeric(rhs)) for v, rhs in assigns.items()))


def module(name, variables, places, marked, transitions):
    return LpnModule(name, variables, places, marked, transitions)


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {title}: {detail}")
