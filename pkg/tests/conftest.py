import functools
from fractions import Fraction

import pytest

from eightpart.exact_geom import canonicalize
from eightpart.partition import eight_partition, generate_random
from eightpart.tracer import trace

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def random_points(n, seed):
    return tuple(generate_random(n, seed))


@functools.lru_cache(maxsize=None)
def canonical(n, seed):
    return canonicalize(random_points(n, seed))


@functools.lru_cache(maxsize=None)
def traced(n, seed):
    return trace(canonical(n, seed))


@functools.lru_cache(maxsize=None)
def partitioned(n, seed):
    return eight_partition(random_points(n, seed))


def frac_points(raw):
    return [tuple(Fraction(c) for c in p) for p in raw]


@pytest.fixture
def curve15():
    return traced(15, 1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
