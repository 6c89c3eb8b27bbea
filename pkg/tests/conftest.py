import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from relcheck import RelDouble, FinSet, epimono, span_control, audit, Budget

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def data(name):
    return os.path.join(DATA, name)


@pytest.fixture(scope="session")
def rel1():
    return RelDouble(FinSet(1), epimono())


@pytest.fixture(scope="session")
def rel2():
    return RelDouble(FinSet(2), epimono())


@pytest.fixture(scope="session")
def rel2_report(rel2):
    return audit(rel2, Budget(exhaustive=True))


@pytest.fixture(scope="session")
def spans():
    return span_control()
