import functools

import pytest

from gspin.groups import cyclic, symmetric
from gspin.field import STANDARD_WINDOW, FieldExpectation, field_algebra
from gspin.hopf import quantum_double

# criterion number -> (passed, title, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")


@functools.lru_cache(maxsize=None)
def group(name):
    kind, n = name[0], int(name[1:])
    return cyclic(n) if kind == "Z" else symmetric(n)


@functools.lru_cache(maxsize=None)
def field(name, window=STANDARD_WINDOW):
    return field_algebra(group(name), window)


@functools.lru_cache(maxsize=None)
def expectation(name):
    return FieldExpectation(field(name))


@functools.lru_cache(maxsize=None)
def crossed(name):
    from gspin.crossed import crossed_product
    rec = expectation(name)
    return crossed_product(rec.F.algebra, quantum_double(group(name)), rec.gamma, verify=False, monomial=True)


@functools.lru_cache(maxsize=None)
def phi(name):
    from fractions import Fraction
    from gspin.basic import crossed_iso
    n = group(name).order
    return crossed_iso(expectation(name).setup(), crossed(name), dual_scale=Fraction(1, n * n))


@pytest.fixture
def z2():
    return group("Z2")


@pytest.fixture
def z3():
    return group("Z3")


@pytest.fixture
def s3():
    return group("S3")
