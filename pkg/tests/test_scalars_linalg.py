import random
from fractions import Fraction

import numpy as np
import pytest

from gspin.linalg import (DimensionMismatch, Echelon, NotHermitian, SparseMat, exact_rank, float_rank, nullspace,
                          psd_check, rank_mod_p, solve_linear)
from gspin.scalars import I, Scalar, ScalarDomainError, conj, format_scalar, inv, parse_scalar, sqrt

R2 = sqrt(2)


def test_sqrt2_squared():
    assert R2 * R2 == 2
    assert isinstance(R2 * R2, Fraction)
    assert R2.d == 2


def test_conjugation():
    x = 1 + I * R2
    assert conj(x) == 1 - I * R2
    y = Scalar(1, 2, 3, 4, 2)
    c = conj(y)
    assert (c.a, c.b, c.c, c.e) == (1, -2, 3, -4)


def test_inverse_of_one_plus_root2():
    x = 1 + R2
    y = inv(x)
    assert y == -1 + R2
    # brute multiplication back to one
    assert x * y == 1


def test_radicands_do_not_mix():
    with pytest.raises(ScalarDomainError):
        sqrt(2) + sqrt(3)
    assert sqrt(8) == 2 * sqrt(2)
    assert sqrt(9) == 3


def test_division_and_zero():
    with pytest.raises(ZeroDivisionError):
        inv(Scalar(0))
    assert (3 + I) / (3 + I) == 1


def test_format_parse_round_trip():
    for x in [Fraction(1, 2), 1 + I * R2, -R2 / 3, I, Scalar(0, -1, 0, Fraction(2, 7), 2), Fraction(-5)]:
        assert parse_scalar(format_scalar(x)) == x
    assert format_scalar(1 - I * R2) == "1-i√2"


def test_to_float_consistent():
    rng = random.Random(3)
    for _ in range(200):
        x = Scalar(*(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)), d=3)
        y = Scalar(*(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)), d=3)
        assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-12 * (1 + abs(complex(x) * complex(y)))
        assert abs(complex(x + y) - (complex(x) + complex(y))) < 1e-12 * (1 + abs(complex(x + y)))


def test_rank_examples():
    assert exact_rank(SparseMat.identity(4)) == 4
    m = SparseMat.from_dense([[1, R2], [R2, 2]])
    assert exact_rank(m) == 1


def test_rank_matches_float_rank():
    rng = random.Random(11)
    for trial in range(4):
        rows = []
        base = [[Scalar(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-2, 2), 0, 2) for _ in range(20)]
                for _ in range(8 + 3 * trial)]
        for r in range(20):
            coefs = [rng.randint(-2, 2) for _ in base]
            rows.append([sum((c * b[j] for c, b in zip(coefs, base)), Fraction(0)) for j in range(20)])
        m = SparseMat.from_dense(rows)
        assert exact_rank(m) == float_rank(m.to_dense(), 1e-8)


def test_solve_and_nullspace():
    m = SparseMat.from_dense([[1, 2, 0], [0, 1, 1]])
    x = solve_linear(m, {0: 3, 1: 2})
    assert m @ x == {0: 3, 1: 2}
    assert solve_linear(SparseMat.from_dense([[1, 1], [1, 1]]), {0: 1, 1: 2}) is None
    ker = nullspace(m.rows, 3)
    assert len(ker) == 1
    assert m @ ker[0] == {}
    with pytest.raises(DimensionMismatch):
        solve_linear(m, {5: 1})


def test_echelon_tags_detect_ill_defined_map():
    e = Echelon()
    assert e.add({0: 1}, {"x": 1}) == (0, {})
    assert e.add({1: 1}, {"x": 2})[0] == 1
    # consistent tag: nothing left over
    assert e.add({0: 2, 1: 2}, {"x": 6}) == (None, {})
    p, left = e.add({0: 1, 1: 1}, {"x": 4})
    assert p is None and left == {"x": 1}
    assert e.image({0: 1, 1: 1}) == {"x": 3}


def test_rank_mod_p_lower_bound():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {2: Fraction(1, 3)}]
    assert rank_mod_p(rows) == exact_rank(rows) == 2


def test_psd_examples():
    assert psd_check(np.eye(3))
    assert not psd_check(np.diag([1.0, -1.0]))
    rng = np.random.default_rng(0)
    for _ in range(10):
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        assert psd_check(m.conj().T @ m, 1e-8)
    with pytest.raises(NotHermitian):
        psd_check(np.array([[0, 1], [0, 0]]))
