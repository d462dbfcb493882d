import functools
from fractions import Fraction

import numpy as np
import pytest

from gspin.algebra import matrix_algebra
from gspin.basic import (BadSite, BasicConstruction, QuasiBasis, basic_construction, crossed_rep, dual_expectation_checks,
                         e_tilde_matches_e2, index, index_value, jones_projection, jones_projection_checks, left_op,
                         op_identity, op_mul, op_scale, preimage_checks, preimage_formula, psi_iso,
                         quasi_basis_check, standard_quasi_basis)
from gspin.crossed import expectation_E2, jones_element
from gspin.expectation import identity_expectation
from gspin.field import FieldExpectation, Window, expectation_formula, field_algebra, wv_observable

from conftest import expectation, field, group, phi


def dense(P, n):
    m = np.zeros((n, n), dtype=complex)
    for j, col in P.items():
        for r, c in col.items():
            m[r, j] = complex(c)
    return m


@functools.lru_cache(maxsize=None)
def psi(name):
    iso, rep = psi_iso(group(name))
    return iso, rep


def test_identity_setup():
    B = matrix_algebra(2)
    setup = identity_expectation(B)
    assert jones_projection(setup) == op_identity(4)
    bc = basic_construction(setup)
    assert bc.dim == B.dim
    assert all(bc.contains(left_op(B, {i: 1})) for i in range(4))
    rep = quasi_basis_check(lambda P: P, QuasiBasis([(op_identity(4), op_identity(4))]), bc.basis_ops())
    assert rep.ok
    assert index_value(rep.index, 4) == 1


def test_jones_projection_z2():
    rec = expectation("Z2")
    F = rec.F
    rep = jones_projection_checks(rec.setup(), witness_labels=[F.delta(2, "a").coeffs])
    assert rep.ok, str(rep.first_failure())
    e = jones_projection(rec.setup())
    for y in range(2):
        for x in range(2):
            lw = left_op(F.algebra, wv_observable(F, y, x).coeffs)
            assert op_mul(e, lw) == op_mul(lw, e)
    ld = left_op(F.algebra, F.delta(2, "a").coeffs)
    assert op_mul(e, ld) != op_mul(ld, e)


def test_span_dimension_float_oracle():
    # span of lambda(x) e lambda(y) computed with dense float matrices
    F = field("Z2")
    n = F.dim
    B = F.algebra
    E = np.zeros((n, n))
    for j in range(n):
        for r, c in expectation_formula(F, j).items():
            E[r, j] = float(c)
    L = [dense(left_op(B, {i: 1}), n).real for i in range(n)]
    ops = np.array([(L[x] @ E @ L[y]).ravel() for x in range(n) for y in range(n)])
    assert np.linalg.matrix_rank(ops) == 64 == phi("Z2").bc.dim


def test_phi_z2():
    iso = phi("Z2")
    X = iso.X
    rep = iso.verify()
    assert rep.ok, str(rep.first_failure())
    assert iso.bc.dim == X.dim == 64
    n = 2
    assert iso(iso.bc.e) == jones_element(X) == {X.pure(f, h): Fraction(1, n) for f in X.A.unit_vec
                                                   for h in range(n)}
    assert iso.bc.verify().ok


def test_phi_preimage_formula():
    iso = phi("Z2")
    rep = preimage_checks(iso.X, iso.bc)
    assert rep.ok and len(rep.checks) == 2
    # the displayed preimage for one label, written out by hand for Z2
    X = iso.X
    F = X.A.field
    c = X.pure(F.encode((1, 0), (1, 1)), 1 * 2 + 1)
    m1, m2 = preimage_formula(X, c)
    assert m1 == F.encode((1, 0), (1, 0))
    assert m2 == F.encode((1, 0), (0, 1))
    assert op_scale(2, iso.bc.spanning_op(m1, m2)) == crossed_rep(X, c)


def test_phi_not_on_other_windows():
    F = field_algebra(group("Z2"), Window((1, 2, 3)))
    from gspin.crossed import crossed_product
    from gspin.hopf import quantum_double
    rec = FieldExpectation(F)
    X = crossed_product(F.algebra, quantum_double(group("Z2")), rec.gamma, verify=False, monomial=True)
    rep = preimage_checks(X)
    assert rep.ok and rep.checks[0].skipped


def test_dual_expectation_z2():
    iso = phi("Z2")
    bc = iso.bc
    B = bc.B
    rep = dual_expectation_checks(bc, samples=30)
    assert rep.ok, str(rep.first_failure())
    assert bc.dual_vec(op_identity(bc.n)) == B.unit_vec
    for t in range(B.dim):
        assert bc.dual_vec(bc.spanning_op(t, 0)) == {k: Fraction(1, 4) * c for k, c in B.mul_basis(t, 0).items()}
    _, E2, _ = expectation_E2(iso.X)
    assert e_tilde_matches_e2(iso, E2).ok


def test_standard_quasi_basis_z2():
    bc = phi("Z2").bc
    qb = standard_quasi_basis(bc)
    assert len(qb) == 4
    rep = quasi_basis_check(bc.dual, qb, bc.basis_ops(), generators=bc.generators())
    assert rep.ok, str(rep.first_failure())
    assert index_value(rep.index, bc.n) == 4
    # brute-force operator sum with dense matrices
    tot = sum(dense(u, bc.n) @ dense(v, bc.n) for u, v in qb.pairs)
    assert np.allclose(tot, 4 * np.eye(bc.n))
    # the second element of each pair is the adjoint for the trace inner product
    gram = np.diag([float(bc.B.state_vec(bc.B.mul_vec(bc.B.star_basis(i), {i: 1}))) for i in range(bc.n)])
    for u, v in qb.pairs:
        U = dense(u, bc.n)
        assert np.allclose(dense(v, bc.n), np.linalg.inv(gram) @ U.conj().T @ gram)


def test_quasi_basis_missing_pair_fails():
    bc = phi("Z2").bc
    qb = standard_quasi_basis(bc).without(1)
    rep = quasi_basis_check(bc.dual, qb, bc.basis_ops(), labels=bc.pairs)
    failed = [c for c in rep if not c.passed]
    assert failed and failed[0].witness is not None
    assert index_value(index(qb), bc.n) is None


def test_quasi_basis_bad_site():
    F = field_algebra(group("Z2"), Window((1, 2)))
    bc = BasicConstruction(FieldExpectation(F).setup())
    with pytest.raises(BadSite):
        standard_quasi_basis(bc)
    with pytest.raises(BadSite):
        standard_quasi_basis(phi("Z2").bc, k=4)


def test_psi_z2():
    iso, rep = psi("Z2")
    assert rep.ok, str(rep.first_failure())
    assert iso.bc.dim == iso.X.dim == 256
    Y = iso.X
    e2 = iso(iso.bc.e)
    assert Y.mul_tensor(e2, e2) == e2 == Y.algebra.star_vec(e2)
    # 1 x (1/n) sum_y (y, delta_u)
    n, u = 2, 0
    assert e2 == {Y.pure(f, y * n + u): Fraction(1, n) for f in Y.A.unit_vec for y in range(n)}


def test_psi_covariance_all_labels():
    iso, _ = psi("Z2")
    bc = iso.bc
    G = bc.setup.gamma
    for t in range(bc.n):
        lhs = iso(op_mul(op_mul(bc.e, bc.lam(t)), bc.e))
        rhs = iso(op_mul(left_op(bc.B, G.column(t)), bc.e))
        assert lhs is not None and lhs == rhs
