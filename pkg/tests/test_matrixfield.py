import random

import numpy as np
import pytest

from gspin.field import STANDARD_WINDOW, Window
from gspin.matrixfield import (DepthExceeded, MatrixFieldAlgebra, matrix_field_algebra, od_relations_check,
                               takai_dimension_check, tower, tower_dimensions_ok, tower_table)

from conftest import field, group
from oracles import field_matrices


def _mfa(name, window=STANDARD_WINDOW):
    return MatrixFieldAlgebra(field(name, window))


def test_dimension():
    assert _mfa("Z2").dim == 256
    assert matrix_field_algebra(group("Z2"), Window((1, 2))).dim == 4 * 16


def test_products_match_kronecker_model():
    G = group("Z2")
    mfa = _mfa("Z2")
    F = mfa.base
    fm = field_matrices(G, F.window.ints, F.window.halves)
    N, N2 = mfa.size, mfa.size ** 2
    labels = F.algebra.labels

    def op(k):
        m, r = divmod(k, N2)
        i, j = divmod(r, N)
        E = np.zeros((N, N), dtype=np.int64)
        E[i, j] = 1
        return np.kron(fm[labels[m]], E)

    def vec_op(v):
        return sum((int(c) * op(k) for k, c in v.items()), 0 * op(0))

    A = mfa.algebra
    rng = random.Random(4)
    for _ in range(2000):
        a, b = rng.randrange(A.dim), rng.randrange(A.dim)
        assert np.array_equal(vec_op(A.mul_basis(a, b)), op(a) @ op(b))
    for a in range(A.dim):
        assert np.array_equal(vec_op(A.star_basis(a)), op(a).T)


def test_spec_relations_instances():
    mfa = _mfa("Z3")
    A = mfa.algebra
    I = mfa.identity_matrix()
    # sum_g O^g_I(x) = I
    s: dict = {}
    for g in range(3):
        for k, c in mfa.O(g, 2, I).items():
            s[k] = s.get(k, 0) + c
    assert s == A.unit_vec == mfa.D(0, 1, I)
    # star of an order operator
    M = {(0, 3): 1}
    assert A.star_vec(mfa.O(1, 4, M)) == mfa.O(1, 4, {(3, 0): 1})
    # l < x twist: D^g_M(1/2) O^h_N(1) = O^{gh}_M(1) D^g_N(1/2)
    t = group("Z3").table
    M, N = {(1, 2): 1}, {(2, 5): 1}
    for g in range(3):
        for h in range(3):
            lhs = A.mul_vec(mfa.D(g, 1, M), mfa.O(h, 2, N))
            assert lhs == A.mul_vec(mfa.O(t[g][h], 2, M), mfa.D(g, 1, N))
            assert lhs


def test_od_relations_z2_full():
    rep = od_relations_check(_mfa("Z2"))
    assert rep.ok, str(rep.first_failure())
    assert all(c.mode == "exact" for c in rep)


def test_od_relations_mutated_fails():
    rep = od_relations_check(_mfa("Z2"), mutate=True)
    bad = [c for c in rep if not c.passed]
    assert [c.id for c in bad] == ["D^g_M(l) O^h_N(x) exchange"]
    assert bad[0].witness is not None


def test_od_relations_sampled_s3():
    rep = od_relations_check(_mfa("S3"), samples=200, seed=1)
    assert rep.ok and {c.mode for c in rep} >= {"sampled"}


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_takai(name):
    rep = takai_dimension_check(group(name))
    assert rep.ok, str(rep.first_failure())
    assert not any(c.skipped for c in rep)


def test_takai_dimension_z3():
    n = 3
    assert field("Z3").dim * n ** 4 == 81 * 81 == _mfa("Z3").dim


def test_takai_odd_window_skipped():
    rep = takai_dimension_check(group("Z2"), Window((1, 2, 3)))
    assert any(c.skipped for c in rep)
    simple = [c for c in rep if c.id == "base field algebra simple"][0]
    assert not simple.passed


def test_tower_z2():
    levels = tower(group("Z2"), depth=2)
    assert [lv.dimension for lv in levels] == [16, 64, 256]
    assert tower_dimensions_ok(levels)
    for lv in levels:
        assert lv.report.ok, str(lv.report.first_failure())
        assert lv.expectation_status == "pass"
    assert levels[1].iso_status.endswith("pass") and levels[2].iso_status.endswith("pass")
    text = tower_table(levels)
    assert "256" in text and text.splitlines()[0].startswith("level")


def test_tower_bookkeeping_levels():
    levels = tower(group("Z2"), depth=4, battery_limit=0, iso_limit=0)
    assert [lv.dimension for lv in levels] == [16, 64, 256, 1024, 4096]
    assert tower_dimensions_ok(levels)
    assert levels[3].expectation_status == "n/a"
    with pytest.raises(DepthExceeded):
        tower(group("Z2"), depth=5)
