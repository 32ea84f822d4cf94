import os

import pytest
from hypothesis import HealthCheck, settings

from cqarepair.parser import parse_constraints, parse_facts, parse_schema

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

P_SCHEMA = "relation P(X: sym, Y: sym, Z: sym)\n"


class KeyConflict:
    schema = parse_schema(P_SCHEMA)
    ic = parse_constraints("fd P: X -> Y", schema)
    d = parse_facts("P(a,b,c)\nP(a,c,d)\nP(a,c,e)", schema)
    d1 = parse_facts("P(a,b,c)", schema)
    d2 = parse_facts("P(a,c,d)\nP(a,c,e)", schema)


class StarConflict:
    schema = parse_schema("relation R(X: int)\nrelation S(X: int)")
    ic = parse_constraints("deny R(x), S(y)", schema)
    d = parse_facts("\n".join(f"R({i})" for i in range(1, 6)), schema)
    updated = d.add(*parse_facts("S(0)", schema))


@pytest.fixture
def keyed():
    return KeyConflict


@pytest.fixture
def star():
    return StarConflict


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, _, text in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(text)
