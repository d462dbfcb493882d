"""The verification suite: configuration, orchestration and report output."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from pathlib import Path

from . import __version__
from .field import STANDARD_WINDOW, InvalidWindow, Window
from .groups import GroupError, build_group
from .report import Check, Report

SUITES = ("group", "hopf", "field", "expectation", "crossed", "basic", "quasi", "dual", "iterated",
          "matrixfield", "tower")


class ConfigError(ValueError):
    pass


@dataclass
class SuiteConfig:
    group: object = "cyclic:2"
    window: object = "0.5:2"
    suites: list = dc_field(default_factory=lambda: ["all"])
    scalar: str = "exact"
    tol: float = 1e-8
    samples: int = 500
    seed: int = 0
    exhaustive_limit: int = 1_000_000
    exact_field_limit: int = 100

    def resolve(self):
        """Validate and return ``(G, window, suites)``; raises :class:`ConfigError`."""
        try:
            G = build_group(self.group)
        except (GroupError, OSError, ValueError) as exc:
            raise ConfigError(f"bad group {self.group!r}: {exc}") from None
        try:
            w = self.window if isinstance(self.window, Window) else Window.parse(str(self.window))
        except InvalidWindow as exc:
            raise ConfigError(str(exc)) from None
        names = []
        for s in self.suites:
            names += [x.strip() for x in str(s).split(",") if x.strip()]
        if not names:
            raise ConfigError("no suites selected")
        bad = [s for s in names if s != "all" and s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}, all")
        suites = list(SUITES) if "all" in names else [s for s in SUITES if s in names]
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.scalar not in ("exact", "float"):
            raise ConfigError("scalar mode must be exact or float")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if "quasi" in suites and not any(x + 1 in w.halves for x in w.ints):
            raise ConfigError(f"the quasi suite needs sites k and k+1/2 in the window, got {w}")
        return G, w, suites


class _State:
    """Artifacts shared between suites, built on first use."""

    def __init__(self, cfg: SuiteConfig, G, w):
        self.cfg, self.G, self.w = cfg, G, w
        self._c: dict = {}

    def get(self, key, build):
        if key not in self._c:
            self._c[key] = build()
        return self._c[key]

    @property
    def F(self):
        from .field import field_algebra
        return self.get("F", lambda: field_algebra(self.G, self.w))

    @property
    def small(self) -> bool:
        return self.F.dim <= self.cfg.exact_field_limit

    @property
    def D(self):
        from .hopf import quantum_double
        return self.get("D", lambda: quantum_double(self.G))

    @property
    def Erec(self):
        from .field import FieldExpectation, gamma_action
        return self.get("E", lambda: FieldExpectation(self.F, gamma_action(self.F, self.D), verify_invariants=False))

    @property
    def X(self):
        from .crossed import crossed_product
        return self.get("X", lambda: crossed_product(self.F.algebra, self.D, self.Erec.gamma, verify=False,
                                                     monomial=True))

    @property
    def sigma(self):
        from .crossed import dual_action_sigma
        return self.get("sigma", lambda: dual_action_sigma(self.X))

    @property
    def iso(self):
        from .basic import crossed_iso
        n = self.G.order
        return self.get("iso", lambda: crossed_iso(self.Erec.setup(), self.X, dual_scale=Fraction(1, n * n)))

    @property
    def Y(self):
        from .crossed import iterated_crossed
        return self.get("Y", lambda: iterated_crossed(self.X, self.sigma))


def _ref(rep: Report, ref: str) -> Report:
    for c in rep.checks:
        if not c.ref:
            c.ref = ref
    return rep


def _positivity_samples(cfg: SuiteConfig, dim: int) -> int:
    # each sample is a dense dim x dim eigenproblem
    return max(5, min(cfg.samples, 100, 20_000 // dim))


def _skip(rep: Report, cid: str, why: str, ref: str = ""):
    rep.add(Check(cid, True, why, ref, "exact", 0.0, skipped=True))


# ---------------------------------------------------------------- suites


def _suite_group(st: _State) -> Report:
    from .groups import validate_group
    rep = Report()
    vr = validate_group(st.G)
    for a in vr.checks:
        rep.add(Check(a.name, a.passed, a.witness, "group axioms of the Cayley table"))
    return rep


def _suite_hopf(st: _State) -> Report:
    from .hopf import dual_double_explicit, dual_hopf, double_pairing, verify_hopf_axioms, verify_integral
    rep = Report()
    D = st.D
    rep.extend(_ref(verify_hopf_axioms(D), "D(G) is a Hopf *-algebra"), "double.")
    c = verify_integral(D)
    c.ref = "integral (1/|G|)Σ(u,g) of D(G)"
    rep.add(Check("double.integral", c.passed, c.witness, c.ref))
    Dh = dual_double_explicit(st.G)
    rep.extend(_ref(verify_hopf_axioms(Dh), "dual D(G)^ is a Hopf *-algebra"), "dual.")
    c = verify_integral(Dh)
    rep.add(Check("dual.integral", c.passed, c.witness, "integral (1/|G|)Σ(y,δ_u) of D(G)^"))
    rep.extend(_ref(double_pairing(Dh, D).check(), "D(G)^ pairs with D(G) as its dual"), "pairing.")
    if D.dim <= 36:
        def generic():
            Dg, _ = dual_hopf(D, verify=False)
            ok = all(Dg.algebra.mul_basis(i, j) == Dh.algebra.mul_basis(i, j)
                     for i in range(Dh.dim) for j in range(Dh.dim))
            ok = ok and all(Dg.delta(i) == Dh.delta(i) for i in range(Dh.dim))
            return ok, "generic dual differs from explicit formulas"
        rep.run("dual.generic = explicit", generic, ref="dual basis (y,δ_x) structure maps")
    return rep


def _suite_field(st: _State) -> Report:
    from .algebra import verify_algebra_axioms
    from .field import check_trace, gamma_order_independence, random_pairs
    from .hopf import verify_module_algebra
    cfg = st.cfg
    F = st.F
    rep = Report()
    rep.extend(_ref(verify_algebra_axioms(F.algebra, cfg.exhaustive_limit, cfg.samples, cfg.seed),
                    "F(Λ) is a unital *-algebra"), "algebra.")
    n = F.dim
    if n * n <= cfg.exhaustive_limit:
        rep.run("trace", lambda: check_trace(F), ref="canonical trace on F(Λ)")
    else:
        rep.run("trace", lambda: check_trace(F, random_pairs(n, cfg.samples, cfg.seed)),
                ref="canonical trace on F(Λ)", mode="sampled")
    gam = st.Erec.gamma
    grid = st.D.dim * st.D.dim * n + st.D.dim * n * n
    if grid <= cfg.exhaustive_limit:
        mr = verify_module_algebra(gam)
    else:
        mr = verify_module_algebra(gam, samples=cfg.samples, seed=cfg.seed)
    rep.extend(_ref(mr, "γ makes F(Λ) a D(G)-module algebra"), "gamma.")
    if st.small:
        rep.run("gamma.order independence", lambda: gamma_order_independence(F),
                ref="γ on generators is independent of the factorisation")
    else:
        import random
        rng = random.Random(cfg.seed)
        mons = [rng.randrange(n) for _ in range(min(cfg.samples, 100))]
        rep.run("gamma.order independence", lambda: gamma_order_independence(F, mons),
                ref="γ on generators is independent of the factorisation", mode="sampled")
    return rep


def _suite_expectation(st: _State) -> Report:
    from .field import STANDARD_WINDOW, expectation_formula, wv_observable
    from .hopf import check_subalgebra
    cfg = st.cfg
    rec = st.Erec
    F = st.F
    rep = Report()
    rep.run("observables closed", lambda: check_subalgebra(F.algebra, rec.range_basis, samples=cfg.samples,
                                                            seed=cfg.seed),
            ref="observable algebra is a *-subalgebra")
    n = st.G.order
    rep.run("dim observables = |G|^2" if F.window == STANDARD_WINDOW else "dim observables",
            lambda: (F.window != STANDARD_WINDOW or len(rec.range_basis) == n * n,
                     f"dim {len(rec.range_basis)}"), ref="observable algebra on {1/2,1,3/2,2}")
    rep.run("E formula", lambda: (all(rec.map.column(i) == expectation_formula(F, i) for i in range(F.dim)),
                                  "E differs from its closed form"),
            ref="E(DR) = (1/|G|)[Πt=u]Σ_f (f s)(f t f^-1)")
    setup = rec.setup()
    r = setup.verify(samples=min(cfg.samples, 100), seed=cfg.seed, tol=cfg.tol,
                     faithful_limit=max(1000, cfg.exact_field_limit),
                     positivity_samples=_positivity_samples(cfg, F.dim))
    rep.extend(_ref(r, "E is a faithful conditional expectation onto the observables"))
    if F.window == STANDARD_WINDOW:
        def wv():
            from .algebra import same_span
            ws = [wv_observable(F, y, x).coeffs for y in range(n) for x in range(n)]
            return same_span(ws, rec.range_basis), "w/v observables do not span"
        rep.run("w_y v_x span observables", wv, ref="observable algebra spanned by w_y v_x")
    return rep


def _suite_crossed(st: _State) -> Report:
    from .algebra import label_generators
    from .crossed import (crossed_generators, e2_formula, expectation_E2, jones_checks, verify_crossed)
    from .hopf import invariant_subalgebra, verify_module_algebra
    from .algebra import same_span
    cfg = st.cfg
    X = st.X
    F = st.F
    rep = Report()
    rep.extend(_ref(verify_crossed(X, exhaustive_limit=cfg.exhaustive_limit, samples=cfg.samples, seed=cfg.seed),
                    "F⋊D(G) multiplication and *-operation"), "algebra.")
    rep.extend(_ref(jones_checks(X, expectation=st.Erec.map),
                    "1⋊h_int is a self-adjoint idempotent with e(T⋊1)e = (E(T)⋊1)e"), "jones.")
    sigma = st.sigma
    gens = crossed_generators(X, F.generators())
    hg = label_generators(sigma.H.algebra)
    if len(hg) * len(gens) * X.dim <= cfg.exhaustive_limit:
        mr = verify_module_algebra(sigma, left=gens, hopf_generators=hg)
    else:
        mr = verify_module_algebra(sigma, samples=cfg.samples, seed=cfg.seed)
    rep.extend(_ref(mr, "σ makes F⋊D(G) a D(G)^-module algebra"), "sigma.")
    if X.dim <= 5000:
        def fixed():
            inv = invariant_subalgebra(sigma, verify=False)
            emb = [X.embed({i: 1}) for i in range(F.dim)]
            return len(inv) == F.dim and same_span(inv, emb), f"dim {len(inv)}"
        rep.run("sigma.invariants = F⊗1", fixed, ref="σ-fixed points of F⋊D(G) are F")
        _, E2, setup = expectation_E2(X, sigma, verify_invariants=False)
        rep.run("E2 formula", lambda: (all(E2.column(c) == e2_formula(X, c) for c in range(X.dim)),
                                       "E2 differs from its closed form"),
                ref="E2(F⋊(g,h)) = (1/|G|)δ_{h,u} F⋊1")
        setup.B_generators = gens
        r = setup.verify(samples=min(cfg.samples, 100), seed=cfg.seed, tol=cfg.tol,
                         positivity_samples=_positivity_samples(cfg, X.dim))
        rep.extend(_ref(r, "E2 is a conditional expectation onto F"))
    else:
        _skip(rep, "E2 battery", f"dim {X.dim} above exact limit")
    return rep


def _suite_basic(st: _State) -> Report:
    from .basic import jones_projection_checks, preimage_checks, sampled_crossed_iso_checks
    cfg = st.cfg
    F = st.F
    rep = Report()
    setup = st.Erec.setup()
    if st.small:
        wit = [F.expand(F.delta_pm(F.window.ints[0], g)) for g in range(F.n) if g != F.G.unit] \
            if F.window.ints else None
        rep.extend(_ref(jones_projection_checks(setup, witness_labels=wit),
                        "e λ(T) e = λ(E(T)) e, and e commutes exactly with the observables"), "projection.")
        iso = st.iso
        rep.extend(_ref(iso.bc.verify(), "<F,e> is the span of λ(x)eλ(y)"), "span.")
        rep.extend(_ref(iso.verify(), "<F,e> ≅ F⋊D(G)"), "phi.")
        rep.extend(_ref(preimage_checks(st.X, iso.bc), "explicit preimage under the isomorphism"), "phi.")
    else:
        rep.extend(_ref(sampled_crossed_iso_checks(st.X, setup, cfg.samples, cfg.seed), "<F,e> ≅ F⋊D(G)"),
                   "phi.")
        import random
        rng = random.Random(cfg.seed)
        labs = [rng.randrange(st.X.dim) for _ in range(cfg.samples)]
        r = preimage_checks(st.X, None, labels=labs)
        for c in r.checks:
            if not c.skipped:
                c.mode = "sampled"
        rep.extend(_ref(r, "explicit preimage under the isomorphism"), "phi.")
    return rep


def _suite_quasi(st: _State) -> Report:
    from .basic import index_value, quasi_basis_check, standard_quasi_basis
    rep = Report()
    if not st.small:
        _skip(rep, "quasi-basis", f"dim F = {st.F.dim} above exact limit")
        return rep
    iso = st.iso
    bc = iso.bc
    qb = standard_quasi_basis(bc)
    n = st.G.order
    rep.run("pairs = |G|^2", lambda: (len(qb) == n * n, len(qb)), ref="quasi-basis indexed by G×G")
    ops = [iso.pi(c) for c in range(st.X.dim)]
    r = quasi_basis_check(bc.dual, qb, ops, bc.generators(), labels=[st.X.algebra.labels[c] for c in range(st.X.dim)])
    rep.extend(_ref(r, "u_{x,y} = |G|^{3/2}δ_x(k)ρ_y(k+1/2)e is a quasi-basis for E~"))
    rep.run("index = |G|^2 I", lambda: (index_value(r.index, bc.n) == n * n, index_value(r.index, bc.n)),
            ref="Index E~ = |G|^2")
    return rep


def _suite_dual(st: _State) -> Report:
    from .basic import dual_expectation_checks, e_tilde_matches_e2
    from .crossed import expectation_E2
    cfg = st.cfg
    rep = Report()
    if not st.small:
        _skip(rep, "dual expectation", f"dim F = {st.F.dim} above exact limit")
        return rep
    iso = st.iso
    rep.extend(_ref(dual_expectation_checks(iso.bc, samples=min(cfg.samples, 100), seed=cfg.seed, tol=cfg.tol),
                    "E~(TeF) = TF/|G|^2 is a conditional expectation onto F"))
    _, E2, _ = expectation_E2(st.X, st.sigma, verify_invariants=False)
    rep.extend(_ref(e_tilde_matches_e2(iso, E2), "E2 is the dual expectation E~ transported by Φ"))
    return rep


def _suite_iterated(st: _State) -> Report:
    from .algebra import label_generators, same_span
    from .basic import crossed_iso
    from .crossed import crossed_generators, expectation_E2, jones_checks, tau_action
    from .hopf import integral_expectation, invariant_subalgebra, verify_module_algebra
    cfg = st.cfg
    rep = Report()
    X, F = st.X, st.F
    if X.dim > 5000:
        _skip(rep, "iterated", f"dim F⋊D(G) = {X.dim} above exact limit")
        return rep
    Y = st.Y
    n = st.G.order
    rep.run("dim = dim F·|G|^4", lambda: (Y.dim == F.dim * n ** 4, Y.dim), ref="iterated crossed product")
    tau = tau_action(Y, st.D)
    xgens = crossed_generators(X, F.generators())
    ygens = crossed_generators(Y, xgens)
    hg = label_generators(st.D.algebra)
    if len(hg) * len(ygens) * Y.dim <= cfg.exhaustive_limit:
        mr = verify_module_algebra(tau, left=ygens, hopf_generators=hg)
    else:
        mr = verify_module_algebra(tau, samples=cfg.samples, seed=cfg.seed)
    rep.extend(_ref(mr, "τ makes F⋊D(G)⋊D(G)^ a D(G)-module algebra"), "tau.")

    def fixed():
        inv = invariant_subalgebra(tau, verify=False)
        emb = [Y.embed({i: 1}) for i in range(X.dim)]
        return len(inv) == X.dim and same_span(inv, emb), f"dim {len(inv)}"

    rep.run("tau.invariants = (F⋊D(G))⊗1", fixed, ref="τ-fixed points are F⋊D(G)")
    E3 = integral_expectation(tau)

    def e3():
        ok, w = E3.is_idempotent()
        if not ok:
            return False, w
        img = E3.image_echelon()
        emb = [Y.embed({i: 1}) for i in range(X.dim)]
        return img.rank == X.dim and all(img.contains(v) for v in emb), f"rank {img.rank}"

    rep.run("tau.expectation idempotent onto (F⋊D(G))⊗1", e3, ref="integral of τ is a projection onto the fixed points")
    if X.dim <= cfg.exact_field_limit:
        _, E2, setup = expectation_E2(X, st.sigma, verify_invariants=False)
        setup.B_generators = xgens
        iso = crossed_iso(setup, Y)
        rep.extend(_ref(iso.verify(), "<F⋊D(G),e2> ≅ F⋊D(G)⋊D(G)^"), "psi.")
        rep.extend(_ref(jones_checks(Y, expectation=E2), "Ψ(e2) is a self-adjoint idempotent covariant for E2"),
                   "psi.jones.")
    else:
        _skip(rep, "psi", f"dim F⋊D(G) = {X.dim} above exact limit")
    return rep


def _suite_matrixfield(st: _State) -> Report:
    from .matrixfield import MatrixFieldAlgebra, od_relations_check, takai_dimension_check
    cfg = st.cfg
    rep = Report()
    mfa = MatrixFieldAlgebra(st.F)
    full = mfa.dim ** 2 <= cfg.exhaustive_limit
    r = od_relations_check(mfa, samples=None if full else cfg.samples, seed=cfg.seed)
    rep.extend(_ref(r, "order/disorder operator relations"), "od.")
    r2 = od_relations_check(mfa, mutate=True, samples=None if full else cfg.samples, seed=cfg.seed)
    rep.run("od.mutated exchange is caught", lambda: (not r2.ok, "mutation not detected"),
            ref="swapping the l<x and l>x branches breaks the exchange relation")
    if st.small:
        Y = st.Y if st.X.dim <= 5000 else None
        rep.extend(_ref(takai_dimension_check(st.G, st.w, Y=Y, mfa=mfa),
                        "F⋊D(G)⋊D(G)^ and M_|G|²(F) are equal-size full matrix algebras"), "takai.")
    else:
        _skip(rep, "takai", f"dim F = {st.F.dim} above exact limit")
    return rep


def _suite_tower(st: _State) -> Report:
    from .matrixfield import tower, tower_table
    cfg = st.cfg
    rep = Report()
    depth = 4
    levels = tower(st.G, st.w, depth=depth, battery_limit=300 if st.small else 0,
                   iso_limit=cfg.exact_field_limit, samples=min(cfg.samples, 20), seed=cfg.seed, tol=cfg.tol) \
        if st.small else None
    if levels is None:
        _skip(rep, "tower", f"dim F = {st.F.dim} above exact limit")
        return rep
    n2 = st.G.order ** 2
    rep.run("dimensions grow by |G|^2", lambda: (all(b.dimension == a.dimension * n2
                                                     for a, b in zip(levels, levels[1:])),
                                                 [l.dimension for l in levels]),
            ref="tower A ⊆ F ⊆ F⋊D(G) ⊆ F⋊D(G)⋊D(G)^ ⊆ ...")
    for lv in levels:
        rep.extend(_ref(lv.report, "tower level expectation / isomorphism"))
    rep.meta["tower"] = tower_table(levels)
    return rep


_RUNNERS = {
    "group": _suite_group, "hopf": _suite_hopf, "field": _suite_field, "expectation": _suite_expectation,
    "crossed": _suite_crossed, "basic": _suite_basic, "quasi": _suite_quasi, "dual": _suite_dual,
    "iterated": _suite_iterated, "matrixfield": _suite_matrixfield, "tower": _suite_tower,
}


def run_suite(cfg: SuiteConfig) -> Report:
    """Run the selected suites in dependency order; configuration problems
    raise :class:`ConfigError`, failing checks become report rows."""
    G, w, suites = cfg.resolve()
    st = _State(cfg, G, w)
    rep = Report(meta={
        "group": G.label, "window": w.text(), "seed": cfg.seed, "scalar-mode": cfg.scalar,
        "tol": cfg.tol, "version": __version__, "suites": suites,
    })
    for name in suites:
        part = _RUNNERS[name](st)
        tower = part.meta.pop("tower", None)
        if tower:
            rep.meta["tower"] = tower
        rep.extend(part, prefix=name + ".")
    return rep


def emit_report(rep: Report, fmt: str = "json", out=None, timing: bool = True) -> str:
    """Write the report as JSON (sorted keys, checks sorted by id) or a text table."""
    if fmt == "json":
        text = rep.to_json(timing)
    elif fmt == "text":
        text = _text(rep, timing)
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
    return text


def _text(rep: Report, timing: bool) -> str:
    head = [f"{k}: {v}" for k, v in sorted(rep.meta.items()) if k != "tower"]
    if not timing:
        rep = Report([replace(c, elapsed_ms=0.0) for c in rep.checks], rep.meta)
    body = rep.to_text()
    tail = ["", rep.meta["tower"]] if "tower" in rep.meta else []
    n_fail = len(rep.failures())
    summary = f"{len(rep.checks)} checks, {n_fail} failed, {sum(c.skipped for c in rep.checks)} skipped"
    return "\n".join(head + ["", body.rstrip("\n"), summary] + tail) + "\n"
