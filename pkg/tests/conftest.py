from pathlib import Path

import pytest

from plancheck import ObjectRef, GroundAtom, GroundAction
from plancheck.parser import parse_domain, parse_plan, parse_problem

FIXTURES = Path(__file__).parent / "fixtures"

TYPES = {"taxi": "taxi", "person": "person", "loc": "location"}


def obj(name: str) -> ObjectRef:
    """Taxi-domain object by name: taxi1 -> taxi, person2 -> person, loc3 -> location."""
    for prefix, t in TYPES.items():
        if name.startswith(prefix):
            return ObjectRef(name, t)
    raise ValueError(name)


def atom(pred: str, *args: str) -> GroundAtom:
    return GroundAtom(pred, tuple(obj(a) for a in args))


def act(name: str, *args: str) -> GroundAction:
    return GroundAction(name, tuple(obj(a) for a in args))


@pytest.fixture(scope="session")
def domain_text():
    return (FIXTURES / "taxi-domain.pddl").read_text()


@pytest.fixture(scope="session")
def problem_text():
    return (FIXTURES / "taxi-problem.pddl").read_text()


@pytest.fixture(scope="session")
def taxi_domain(domain_text):
    return parse_domain(domain_text)


@pytest.fixture(scope="session")
def taxi_problem(taxi_domain, problem_text):
    return parse_problem(problem_text, taxi_domain)


@pytest.fixture(scope="session")
def taxi_plan(taxi_domain, taxi_problem):
    return parse_plan((FIXTURES / "taxi-plan.txt").read_text(), taxi_domain, taxi_problem)


# One summary line per acceptance criterion, whatever pytest's capture mode.
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}")
