"""Shared fixtures for the suite."""

import pytest

from qrstats.sieve import primes_in


@pytest.fixture(scope="session")
def odd_primes_300() -> list:
    return [int(p) for p in primes_in(3, 300).tolist()]
