import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from gspin.algebra import center_basis, span_rank
from gspin.field import (STANDARD_WINDOW, InvalidWindow, Window, WrongWindow, check_trace, expectation_formula,
                         field_algebra, gamma_action, gamma_closed, gamma_order_independence, normalize_word,
                         random_pairs, wv_observable)
from gspin.hopf import invariant_subalgebra, verify_module_algebra

from conftest import expectation, field, group
from oracles import field_matrices, global_unitary, vec_to_matrix


def _pairs(dim, limit, seed=0):
    if dim * dim <= limit:
        return itertools.product(range(dim), repeat=2)
    return random_pairs(dim, limit, seed)


@pytest.mark.parametrize("name,limit", [("Z2", 10**6), ("Z3", 10**6), ("S3", 3000)])
def test_product_star_trace_match_matrix_model(name, limit):
    G = group(name)
    F = field(name)
    A = F.algebra
    w = F.window
    mats = field_matrices(G, w.ints, w.halves)
    labels = A.labels
    flat = np.array([mats[lab].ravel() for lab in labels])
    assert np.linalg.matrix_rank(flat) == A.dim
    size = mats[labels[0]].shape[0]
    for i, j in _pairs(A.dim, limit):
        want = mats[labels[i]] @ mats[labels[j]]
        assert np.array_equal(vec_to_matrix(A.mul_basis(i, j), labels, mats).real, want), (labels[i], labels[j])
    for i in range(A.dim):
        assert np.array_equal(vec_to_matrix(A.star_basis(i), labels, mats).real, mats[labels[i]].T)
        assert A.state(i) == Fraction(int(np.trace(mats[labels[i]])), size)


def test_symbolic_product_formula():
    # (d_g1 d_g2 r_h1 r_h2)(d_s1 d_s2 r_t1 r_t2)
    #   = [g1 = h1 s1][g2 = h1 h2 s2] d_g1 d_g2 r_{h1 t1} r_{t1^-1 h2 t1 t2}
    G = group("S3")
    F = field("S3")
    A = F.algebra
    t, iv = G.table, G.inv
    rng = random.Random(7)
    for _ in range(3000):
        g1, g2, h1, h2, s1, s2, t1, t2 = (rng.randrange(6) for _ in range(8))
        if rng.random() < 0.5:  # bias towards nonzero products
            g1, g2 = t[h1][s1], t[t[h1][h2]][s2]
        got = A.mul_basis(F.encode((g1, g2), (h1, h2)), F.encode((s1, s2), (t1, t2)))
        if g1 == t[h1][s1] and g2 == t[t[h1][h2]][s2]:
            want = {F.encode((g1, g2), (t[h1][t1], t[t[t[iv[t1]][h2]][t1]][t2])): 1}
        else:
            want = {}
        assert got == want


def test_symbolic_star_formula():
    G = group("S3")
    F = field("S3")
    t, iv = G.table, G.inv
    for g1, g2, h1, h2 in itertools.product(range(6), repeat=4):
        got = F.algebra.star_basis(F.encode((g1, g2), (h1, h2)))
        want = F.encode((t[iv[h1]][g1], t[t[iv[h2]][iv[h1]]][g2]), (iv[h1], t[t[h1][iv[h2]]][iv[h1]]))
        assert got == {want: 1}


def test_rho_pushes_delta_to_zero():
    F = field("Z2")
    a = "a"
    x = F.delta(2, a) * F.rho(1, a) * F.delta(2, a)
    assert not x


def test_rewriting_oracle_agrees_with_closed_form():
    F = field("S3")
    rng = random.Random(1)
    for _ in range(300):
        word = [(rng.choice("dr"), 0, rng.randrange(6)) for _ in range(rng.randint(0, 7))]
        word = [(k, rng.choice(F.window.ints if k == "d" else F.window.halves), g) for k, _, g in word]
        m = F.pm_word(word)
        if m is None:
            # a vanishing word
            assert normalize_word(F, word) is None
        else:
            assert F.expand(normalize_word(F, word)) == F.expand(m)


def test_dimensions_and_center():
    for name, win, dim in [("Z2", STANDARD_WINDOW, 16), ("Z3", STANDARD_WINDOW, 81), ("Z2", Window((1, 2, 3)), 8)]:
        F = field(name, win)
        assert F.dim == dim
    A = field("Z2").algebra
    assert len(center_basis(A, field("Z2").generators())) == 1
    # an odd window has a non-trivial centre
    B = field("Z2", Window((1, 2, 3)))
    assert len(center_basis(B.algebra, B.generators())) > 1


def test_gamma_example_formula():
    G = group("S3")
    F = field("S3")
    t, iv = G.table, G.inv
    rng = random.Random(2)
    for _ in range(2000):
        f, h, s1, s2, t1, t2 = (rng.randrange(6) for _ in range(6))
        if rng.random() < 0.5:
            f = t[t[h][t[t1][t2]]][iv[h]]
        got = gamma_closed(F, f, h, F.encode((s1, s2), (t1, t2)))
        if t[t[iv[h]][f]][h] == t[t1][t2]:
            want = {F.encode((t[h][s1], t[h][s2]), (t[t[h][t1]][iv[h]], t[t[h][t2]][iv[h]])): 1}
        else:
            want = {}
        assert got == want


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_gamma_summed_is_global_conjugation(name):
    # sum_g (g, h) acts as conjugation by the global unitary U_h
    G = group(name)
    F = field(name)
    A = F.algebra
    n = G.order
    w = F.window
    mats = field_matrices(G, w.ints, w.halves)
    gam = gamma_action(F)
    for h in range(n):
        U = global_unitary(G, w.ints, h)
        for i in range(A.dim):
            img = gam.apply({g * n + h: 1 for g in range(n)}, {i: 1})
            assert np.array_equal(vec_to_matrix(img, A.labels, mats).real, U @ mats[A.labels[i]] @ U.T)


def test_gamma_unit_acts_trivially():
    F = field("S3")
    gam = gamma_action(F)
    D = gam.H
    rng = random.Random(0)
    for i in rng.sample(range(F.dim), 50):
        assert gam.apply(D.algebra.unit_vec, {i: 1}) == {i: 1}


def test_gamma_word_route_matches_closed_form():
    ok, witness = gamma_order_independence(field("Z2"))
    assert ok, witness
    F = field("Z3")
    ok, witness = gamma_order_independence(F, random.Random(0).sample(range(F.dim), 20))
    assert ok, witness


def test_gamma_laws_z3_small_window():
    F = field_algebra(group("Z3"), Window((1, 2)))
    rep = verify_module_algebra(gamma_action(F))
    assert rep.ok and all(c.mode == "exact" for c in rep)


def test_gamma_laws_s3_by_generators():
    from gspin.algebra import label_generators
    F = field("S3")
    gam = gamma_action(F)
    rep = verify_module_algebra(gam, left=F.generators(), hopf_generators=label_generators(gam.H.algebra))
    assert rep.ok, str(rep.first_failure())


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_expectation_formula_and_idempotence(name):
    rec = expectation(name)
    F = rec.F
    for i in range(F.dim):
        col = rec.map.column(i)
        assert col == expectation_formula(F, i)
        assert rec.map(col) == col
    assert rec(F.one()) == F.one()


def test_expectation_z2_example():
    rec = expectation("Z2")
    F = rec.F
    got = rec(F.monomial((0, 0), (0, 0)))
    want = (F.monomial((0, 0), (0, 0)) + F.monomial((1, 1), (0, 0))) * Fraction(1, 2)
    assert got == want


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_expectation_expands_over_wv(name):
    # E(d_s1 d_s2 r_t1 r_t2) = (1/n)[t1 t2 = u] wv(s1^-1 s2, s1^-1 t2 s1)
    G = group(name)
    rec = expectation(name)
    F = rec.F
    t, iv, u, n = G.table, G.inv, G.unit, G.order
    for s1, s2, t1, t2 in itertools.product(range(n), repeat=4):
        got = rec(F.monomial((s1, s2), (t1, t2)))
        if t[t1][t2] != u:
            assert not got
        else:
            y, x = t[iv[s1]][s2], t[t[iv[s1]][t2]][s1]
            assert got == wv_observable(F, y, x) * Fraction(1, n)


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_wv_span_the_invariants(name):
    G = group(name)
    rec = expectation(name)
    F = rec.F
    wv = [wv_observable(F, y, x).coeffs for y in range(G.order) for x in range(G.order)]
    assert span_rank(wv) == G.order ** 2 == len(rec.range_basis)
    assert span_rank(wv + list(rec.range_basis)) == G.order ** 2
    gam = rec.gamma
    for v in wv:
        for a in range(gam.H.dim):
            assert gam.apply({a: 1}, v) == {k: gam.H.eps(a) * c for k, c in v.items() if gam.H.eps(a)}


def test_wv_unit_example():
    F = field("Z3")
    want = sum((F.monomial((s, s), (0, 0)) for s in range(1, 3)), F.monomial((0, 0), (0, 0)))
    assert wv_observable(F, "u", "u") == want


def test_range_is_the_invariant_subalgebra():
    rec = expectation("Z2")
    inv = invariant_subalgebra(rec.gamma)
    img = [rec.map.column(i) for i in range(rec.F.dim)]
    assert span_rank(img) == span_rank(inv) == span_rank(img + list(inv)) == 4


def test_trace():
    F = field("Z2")
    A = F.algebra
    assert A.state_vec(A.unit_vec) == 1
    for x in F.window.ints:
        for g in range(2):
            assert A.state_vec(F.delta(x, g).coeffs) == Fraction(1, 2)
    ok, witness = check_trace(F)
    assert ok, witness
    ok, witness = check_trace(field("Z3"))
    assert ok, witness


def test_expectation_battery_z2():
    rep = expectation("Z2").setup().verify(samples=20, seed=0)
    assert rep.ok, str(rep.first_failure())


def test_window_errors():
    with pytest.raises(InvalidWindow):
        Window(())
    with pytest.raises(InvalidWindow):
        Window.parse("2:1")
    with pytest.raises(InvalidWindow):
        Window.parse("1")
    assert Window.parse("1/2:2") == Window.parse("0.5:2") == STANDARD_WINDOW
    assert STANDARD_WINDOW.text() == "1/2:2"
    with pytest.raises(WrongWindow):
        wv_observable(field("Z2", Window((1, 2, 3))), 0, 0)
    with pytest.raises(InvalidWindow):
        field("Z2").delta(3, 0)
