"""Acceptance criteria, one test per criterion.

Each test records a pass/fail line in ``ACCEPTANCE``; the summary is
printed at the end of the session by the hook in conftest.  Run this file
directly to execute only the acceptance suite.
"""
import functools
import json
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from gspin import cli
from gspin.algebra import same_span
from gspin.basic import (e_tilde_matches_e2, index_value, jones_projection_checks, psi_iso, quasi_basis_check,
                         sampled_crossed_iso_checks, standard_quasi_basis)
from gspin.crossed import expectation_E2, jones_checks
from gspin.expr import ExprContext, eval_expression, parse_expression, print_expression, random_expression
from gspin.hopf import dual_double_explicit, quantum_double, verify_hopf_axioms, verify_module_algebra
from gspin.matrixfield import MatrixFieldAlgebra, od_relations_check, takai_dimension_check
from gspin.suite import SuiteConfig, run_suite

from conftest import ACCEPTANCE, crossed, expectation, field, group, phi

EXACT = {"exact", "generators"}
SPECS = {"Z2": "cyclic:2", "Z3": "cyclic:3", "Z4": "cyclic:4", "S3": "symmetric:3"}


def criterion(num, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kw):
            t0 = time.perf_counter()
            try:
                fn(*args, **kw)
            except BaseException as exc:
                msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
                ACCEPTANCE[num] = (False, title, f"{time.perf_counter() - t0:.1f}s  {msg[:100]}")
                print(f"criterion {num:2d} FAIL  {title}")
                raise
            ACCEPTANCE[num] = (True, title, f"{time.perf_counter() - t0:.1f}s")
            print(f"criterion {num:2d} PASS  {title}")
        return wrapper
    return deco


@functools.lru_cache(maxsize=None)
def suite(name, which):
    return run_suite(SuiteConfig(group=SPECS[name], suites=which.split(",")))


def rows(rep, prefix):
    found = [c for c in rep if c.id.startswith(prefix)]
    assert found, f"no rows under {prefix}"
    return found


def assert_exact_pass(checks):
    for c in checks:
        assert c.passed and not c.skipped, f"{c.id}: {c.witness}"
        assert c.mode in EXACT, f"{c.id} ran in {c.mode} mode"


def dense(P, n):
    m = np.zeros((n, n), dtype=complex)
    for j, col in P.items():
        for r, c in col.items():
            m[r, j] = complex(c)
    return m


@criterion(1, "Hopf *-algebra axioms of D(G) and D(G)^ (Z2, Z3, Z4, S3)")
def test_c01_hopf_axioms():
    for name in ("Z2", "Z3", "Z4", "S3"):
        G = group(name)
        for build in (quantum_double, dual_double_explicit):
            t0 = time.perf_counter()
            rep = verify_hopf_axioms(build(G))
            assert_exact_pass(rep)
            assert time.perf_counter() - t0 < 10, f"{name} {build.__name__} too slow"


@criterion(2, "γ is a D(G)-module algebra (Z2, Z3 full grid; S3 sampled)")
def test_c02_gamma_module_algebra():
    for name in ("Z2", "Z3"):
        rep = verify_module_algebra(expectation(name).gamma)
        assert_exact_pass(rep)
    rep = verify_module_algebra(expectation("S3").gamma, samples=500, seed=42)
    assert rep.ok, str(rep.first_failure())
    assert {c.mode for c in rep} >= {"sampled"}


@criterion(3, "E is a faithful positive conditional expectation (Z2, Z3)")
def test_c03_expectation_battery():
    for name in ("Z2", "Z3"):
        rep = expectation(name).setup().verify(samples=100, seed=42, positivity_samples=100)
        for c in rep:
            assert c.passed and not c.skipped, f"{name} {c.id}: {c.witness}"
        ids = " ".join(c.id for c in rep)
        for key in ("unital", "bimodular", "idempotent", "faithful", "positive"):
            assert key in ids, key
        bim = [c for c in rep if "bimodular" in c.id][0]
        faith = [c for c in rep if "faithful" in c.id][0]
        assert bim.mode == "exact" and faith.mode == "exact"


@criterion(4, "Jones projection covariance and commutant = observables (Z2, Z3)")
def test_c04_jones_projection():
    for name in ("Z2", "Z3"):
        rec = expectation(name)
        assert len(rec.range_basis) == group(name).order ** 2
        rep = jones_projection_checks(rec.setup())
        assert_exact_pass(rep)
        assert {"e λ(T) e = λ(Γ(T)) e", "commutant of e = A"} <= {c.id for c in rep}


@criterion(5, "Jones element identities in F⋊D(G) (Z2, Z3, S3 exhaustive)")
def test_c05_jones_element():
    for name in ("Z2", "Z3", "S3"):
        X = crossed(name)
        assert X.A.dim == group(name).order ** 4
        rep = jones_checks(X, expectation=expectation(name).map)
        assert_exact_pass(rep)


@criterion(6, "Φ: <F,e> ≅ F⋊D(G) (Z2, Z3 exact; S3 sampled)")
def test_c06_phi():
    for name, dim in (("Z2", 64), ("Z3", 729)):
        t0 = time.perf_counter()
        iso = phi(name)
        rep = iso.verify()
        assert_exact_pass(rep)
        assert iso.bc.dim == iso.X.dim == dim == group(name).order ** 6
        assert time.perf_counter() - t0 < 60, f"{name} took {time.perf_counter() - t0:.1f}s"
    rep = sampled_crossed_iso_checks(crossed("S3"), expectation("S3").setup(), samples=500, seed=42)
    assert rep.ok, str(rep.first_failure())


@criterion(7, "quasi-basis for E~ with Index = |G|^2 (Z2, Z3)")
def test_c07_quasi_basis():
    for name in ("Z2", "Z3"):
        n = group(name).order
        bc = phi(name).bc
        qb = standard_quasi_basis(bc)
        assert len(qb) == n * n
        rep = quasi_basis_check(bc.dual, qb, bc.basis_ops(), generators=bc.generators())
        assert_exact_pass(rep)
        assert index_value(rep.index, bc.n) == n * n
        # independent brute-force operator sum
        tot = sum(dense(u, bc.n) @ dense(v, bc.n) for u, v in qb.pairs)
        assert np.allclose(tot, n * n * np.eye(bc.n))


@criterion(8, "E2 battery and E2 = Φ∘E~∘Φ^-1 on the whole basis (Z2, Z3)")
def test_c08_e2():
    for name in ("Z2", "Z3"):
        rep = suite(name, "crossed")
        for c in rows(rep, "crossed.E2"):
            assert c.passed and not c.skipped, f"{c.id}: {c.witness}"
        iso = phi(name)
        _, E2, _ = expectation_E2(iso.X)
        assert_exact_pass(e_tilde_matches_e2(iso, E2))


@criterion(9, "σ is a D(G)^-module algebra with fixed points F⊗1 (Z2, Z3)")
def test_c09_sigma():
    for name in ("Z2", "Z3"):
        rep = suite(name, "crossed")
        assert_exact_pass(rows(rep, "crossed.sigma."))
        assert any(c.id == "crossed.sigma.invariants = F⊗1" for c in rep)
        assert field(name).dim == group(name).order ** 4


@criterion(10, "Ψ: <F⋊D(G),e2> ≅ F⋊D(G)⋊D(G)^ (Z2)")
def test_c10_psi():
    iso, rep = psi_iso(group("Z2"))
    assert_exact_pass(rep)
    assert iso.bc.dim == iso.X.dim == 256 == 2 ** 8


@criterion(11, "Takai level dimensions and one-dimensional centers (Z2, Z3)")
def test_c11_takai():
    for name in ("Z2", "Z3"):
        n = group(name).order
        rep = takai_dimension_check(group(name))
        assert_exact_pass(rep)
        assert MatrixFieldAlgebra(field(name)).dim == field(name).dim * n ** 4


@criterion(12, "order/disorder relations (Z2 full) and τ fixed points (Z2, Z3)")
def test_c12_od_and_tau():
    rep = od_relations_check(MatrixFieldAlgebra(field("Z2")))
    assert_exact_pass(rep)
    for name in ("Z2", "Z3"):
        r = suite(name, "iterated")
        assert_exact_pass([c for c in r if c.id in ("iterated.tau.invariants = (F⋊D(G))⊗1",
                                                     "iterated.tau.expectation idempotent onto (F⋊D(G))⊗1")])
        assert len([c for c in r if c.id.startswith("iterated.tau.invariants")]) == 1


@criterion(13, "tooling: parser round trip, deterministic JSON, Z2 all-suite < 2 min")
def test_c13_tooling(tmp_path):
    rng = random.Random(13)
    ctxs = [ExprContext(group("Z2"), F=field("Z2")), ExprContext(group("Z3"), F=field("Z3"))]
    for k in range(1000):
        ctx = ctxs[k % 2]
        ast = random_expression(rng, ctx, depth=3, double=(k % 5 == 0))
        text = print_expression(ast, ctx)
        again = parse_expression(text, ctx)
        assert print_expression(again, ctx) == text
        kind = "D" if k % 5 == 0 else "F"
        assert eval_expression(again, ctx, kind) == eval_expression(ast, ctx, kind)
    outs = []
    for tag in "ab":
        p = tmp_path / f"{tag}.json"
        assert cli.main(["--group", "symmetric:3", "--suite", "matrixfield", "--seed", "7", "--samples", "50",
                         "--format", "json", "--no-timing", "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    t0 = time.perf_counter()
    p = tmp_path / "z2.json"
    code = cli.main(["--group", "cyclic:2", "--suite", "all", "--format", "json", "--out", str(p)])
    elapsed = time.perf_counter() - t0
    assert code == 0 and elapsed < 120, (code, elapsed)
    doc = json.loads(p.read_text())
    assert doc["checks"] and all(r["status"] in ("pass", "skip") for r in doc["checks"])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
