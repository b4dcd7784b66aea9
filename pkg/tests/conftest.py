import pytest

from nblab.arith import build_profile
from nblab.sieve import sieve_mobius


@pytest.fixture(scope="session")
def table():
    return sieve_mobius(2000)


@pytest.fixture(scope="session")
def profile(table):
    return build_profile(table)
