import random

import pytest

from symsbfe.core import Instance, ValueVector, load_instance, reference_instance_path

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def ref():
    return load_instance(reference_instance_path())


@pytest.fixture(scope="session")
def ref_path():
    return reference_instance_path()


def random_instance(rng: random.Random, n: int, cost=(1.0, 10.0), prob=(0.05, 0.95)) -> Instance:
    return Instance(
        tuple(rng.uniform(*cost) for _ in range(n)),
        tuple(rng.uniform(*prob) for _ in range(n)),
    )


def random_vector(rng: random.Random, n: int) -> ValueVector:
    return ValueVector(tuple(rng.randint(0, 1) for _ in range(n + 1)))


# -- acceptance report -------------------------------------------------------

def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.append((name, report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _ACCEPTANCE:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  {detail}")
