from __future__ import annotations

import pytest

from charbetti.cache import DEFAULT_TABLE_CACHE
from charbetti.constructions import (
    katzman_ideal,
    klein_bottle_ideal,
    kty_ideal,
    rp2_ideal,
)
from charbetti.fields import FieldSpec, QQ
from charbetti.ideals import MonomialIdeal, VariableContext, parse_monomial


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {name}: {report.outcome.upper()}", flush=True)


@pytest.fixture(scope="session")
def rp2():
    return rp2_ideal()


@pytest.fixture(scope="session")
def klein():
    return klein_bottle_ideal()


@pytest.fixture(scope="session")
def kty():
    return kty_ideal()


@pytest.fixture(scope="session")
def katzman():
    return katzman_ideal()


@pytest.fixture(scope="session")
def F2():
    return FieldSpec(2)


@pytest.fixture(scope="session")
def F3():
    return FieldSpec(3)


@pytest.fixture(scope="session")
def F5():
    return FieldSpec(5)


def ideal_from(*gens: str) -> MonomialIdeal:
    """Tiny builder: variables collected across all generator strings in
    first-appearance order."""
    names: list[str] = []
    for g in gens:
        for tok in g.split():
            name = tok.split("^", 1)[0]
            if name != "1" and name not in names:
                names.append(name)
    context = VariableContext(tuple(names))
    return MonomialIdeal.from_gens(
        [parse_monomial(g, context) for g in gens], context
    )
