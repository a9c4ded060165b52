from fractions import Fraction

import pytest

from polyshadow.body import builtin


@pytest.fixture(scope="session")
def octahedron():
    return builtin("octahedron")


@pytest.fixture(scope="session")
def cube():
    return builtin("cube")


@pytest.fixture(scope="session")
def sec3():
    return builtin("example-sec3")


def F(*args):
    return Fraction(*args)
