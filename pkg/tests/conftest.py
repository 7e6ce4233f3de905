import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from egs.ntheory import sieve_primes  # noqa: E402


@pytest.fixture(scope="session")
def table():
    return sieve_primes(10**7)
