"""``M_{|G|^2}(F)`` with order/disorder operators, Takai-level checks and the
tower of iterated constructions."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .algebra import BasisAlgebra, Element, center_basis
from .field import FieldAlgebra, FieldExpectation, Window, field_algebra, site_str
from .report import Check, Report


class DepthExceeded(ValueError):
    pass


class MatrixFieldAlgebra:
    """``F (x) M_N`` with ``N = |G|^2``; labels ``(monomial, i, j)``."""

    def __init__(self, F: FieldAlgebra, size: int | None = None):
        self.base = F
        self._fcache: dict = {}
        N = self.size = size or F.n ** 2
        FA = F.algebra
        self._N2 = N * N
        labels = [(m, i, j) for m in FA.labels for i in range(N) for j in range(N)]
        N2 = self._N2

        def mul(a, b):
            m1, r1 = divmod(a, N2)
            m2, r2 = divmod(b, N2)
            i, j = divmod(r1, N)
            k, l = divmod(r2, N)
            if j != k:
                return {}
            return {m * N2 + i * N + l: c for m, c in FA.mul_basis(m1, m2).items()}

        def star(a):
            m, r = divmod(a, N2)
            i, j = divmod(r, N)
            return {k * N2 + j * N + i: c for k, c in FA.star_basis(m).items()}

        def state(a):
            m, r = divmod(a, N2)
            i, j = divmod(r, N)
            if i != j:
                return 0
            s = FA.state(m)
            return s / N if s else 0

        def fmt(lab):
            m, i, j = lab
            return f"{FA.fmt(m)} ⊗ E[{i},{j}]"

        unit = {k * N2 + i * N + i: c for k, c in FA.unit_vec.items() for i in range(N)}
        self.algebra = BasisAlgebra(labels, mul, unit, star, state=state,
                                    name=f"M_{N}({FA.name})", fmt=fmt, monomial=True)

    @property
    def dim(self):
        return self.algebra.dim

    def tensor(self, fvec: dict, M: dict) -> dict:
        """``f (x) M`` with ``M`` a sparse matrix ``{(i, j): c}``."""
        N, N2 = self.size, self._N2
        return {m * N2 + i * N + j: a * c for m, a in fvec.items() for (i, j), c in M.items()}

    def unit_matrix(self, i, j) -> dict:
        return {(i, j): 1}

    def identity_matrix(self) -> dict:
        return {(i, i): 1 for i in range(self.size)}

    def _fpart(self, kind, site, g):
        key = (kind, site, g)
        r = self._fcache.get(key)
        if r is None:
            F = self.base
            pm = F.delta_pm(site, g) if kind == "d" else F.rho_pm(site, g)
            r = self._fcache[key] = F.expand(pm)
        return r

    def O(self, g: int, x: int, M: dict) -> dict:
        """Order operator ``d[g]@x (x) M`` (``x`` doubled)."""
        return self.tensor(self._fpart("d", x, g), M)

    def D(self, h: int, l: int, N: dict) -> dict:
        """Disorder operator ``r[h]@l (x) N`` (``l`` doubled)."""
        return self.tensor(self._fpart("r", l, h), N)

    def element(self, vec) -> Element:
        return self.algebra.element(vec)

    def generators(self) -> list[dict]:
        """``f (x) I`` for generators ``f`` of the base, and ``I (x) E_ij``."""
        I = self.identity_matrix()
        F = self.base
        out = [self.tensor(f, I) for f in F.generators()]
        out += [self.tensor(F.algebra.unit_vec, {(i, j): 1}) for i in range(self.size) for j in range(self.size)]
        return out


def matrix_field_algebra(G, window: Window | None = None) -> MatrixFieldAlgebra:
    return MatrixFieldAlgebra(field_algebra(G, window))


def _mat_mul(M: dict, N: dict) -> dict:
    out: dict = {}
    for (i, j), a in M.items():
        for (k, l), b in N.items():
            if j == k:
                v = out.get((i, l), 0) + a * b
                if v == 0:
                    out.pop((i, l), None)
                else:
                    out[(i, l)] = v
    return out


def _mat_star(M: dict) -> dict:
    from .scalars import conj
    return {(j, i): conj(c) for (i, j), c in M.items()}


def od_relations_check(mfa: MatrixFieldAlgebra, mutate: bool = False, samples: int | None = None,
                       seed: int = 0) -> Report:
    """Every order/disorder relation over all sites, group elements and pairs of
    matrix units (or ``samples`` seeded instances per relation).

    ``mutate`` swaps the two branches of the order/disorder exchange, which
    must produce a counterexample.
    """
    F = mfa.base
    G = F.G
    t, iv, u = G.table, G.inv, G.unit
    n, Nn = F.n, mfa.size
    A = mfa.algebra
    mul = A.mul_vec
    w = F.window
    units = [{(i, j): 1} for i in range(Nn) for j in range(Nn)]
    rng = random.Random(seed)
    rep = Report()
    mode = "sampled" if samples else "exact"

    def grid(*ranges):
        if samples:
            return [tuple(rng.choice(r) for r in ranges) for _ in range(samples)]
        return itertools.product(*ranges)

    els = range(n)
    mats = range(len(units))

    def same_site_O():
        for x, g, h, a, b in grid(w.ints, els, els, mats, mats):
            M, N = units[a], units[b]
            lhs = mul(mfa.O(g, x, M), mfa.O(h, x, N))
            rhs = mfa.O(g, x, _mat_mul(M, N)) if g == h else {}
            if lhs != rhs:
                return False, (site_str(x), G.names[g], G.names[h], a, b)
        return True, None

    def same_site_D():
        for l, g, h, a, b in grid(w.halves, els, els, mats, mats):
            M, N = units[a], units[b]
            if mul(mfa.D(g, l, M), mfa.D(h, l, N)) != mfa.D(t[g][h], l, _mat_mul(M, N)):
                return False, (site_str(l), G.names[g], G.names[h], a, b)
        return True, None

    def units_sum():
        I = mfa.identity_matrix()
        for x in w.ints:
            s: dict = {}
            for g in range(n):
                for k, c in mfa.O(g, x, I).items():
                    s[k] = s.get(k, 0) + c
            if s != A.unit_vec:
                return False, ("O", site_str(x))
        for l in w.halves:
            if mfa.D(u, l, I) != A.unit_vec:
                return False, ("D", site_str(l))
        return True, None

    def O_commute():
        for x, y, g, h, a, b in grid(w.ints, w.ints, els, els, mats, mats):
            if x == y:
                continue
            M, N = units[a], units[b]
            if mul(mfa.O(g, x, M), mfa.O(h, y, N)) != mul(mfa.O(h, y, M), mfa.O(g, x, N)):
                return False, (site_str(x), site_str(y), G.names[g], G.names[h], a, b)
        return True, None

    def DO_exchange():
        for l, x, g, h, a, b in grid(w.halves, w.ints, els, els, mats, mats):
            M, N = units[a], units[b]
            lhs = mul(mfa.D(g, l, M), mfa.O(h, x, N))
            twist = (l < x) != mutate
            k = t[g][h] if twist else h
            rhs = mul(mfa.O(k, x, M), mfa.D(g, l, N))
            if lhs != rhs:
                return False, (site_str(l), site_str(x), G.names[g], G.names[h], a, b)
        return True, None

    def DD_braid():
        for l, m, g, h, a, b in grid(w.halves, w.halves, els, els, mats, mats):
            if l == m:
                continue
            M, N = units[a], units[b]
            lhs = mul(mfa.D(g, l, M), mfa.D(h, m, N))
            if l > m:
                rhs = mul(mfa.D(h, m, M), mfa.D(t[t[iv[h]][g]][h], l, N))
            else:
                rhs = mul(mfa.D(t[t[g][h]][iv[g]], m, M), mfa.D(g, l, N))
            if lhs != rhs:
                return False, (site_str(l), site_str(m), G.names[g], G.names[h], a, b)
        return True, None

    def stars():
        for x, g, a in grid(w.ints, els, mats):
            M = units[a]
            if A.star_vec(mfa.O(g, x, M)) != mfa.O(g, x, _mat_star(M)):
                return False, ("O", site_str(x), G.names[g], a)
        for l, h, a in grid(w.halves, els, mats):
            N = units[a]
            if A.star_vec(mfa.D(h, l, N)) != mfa.D(iv[h], l, _mat_star(N)):
                return False, ("D", site_str(l), G.names[h], a)
        return True, None

    rep.run("O^g_M(x) O^h_N(x) = δ_gh O^g_MN(x)", same_site_O, mode=mode)
    rep.run("D^g_M(l) D^h_N(l) = D^gh_MN(l)", same_site_D, mode=mode)
    rep.run("Σ_g O^g_I(x) = I = D^u_I(l)", units_sum)
    rep.run("O^g_M(x) O^h_N(x') = O^h_M(x') O^g_N(x)", O_commute, mode=mode)
    rep.run("D^g_M(l) O^h_N(x) exchange", DO_exchange, mode=mode)
    rep.run("D^g_M(l) D^h_N(l') braiding", DD_braid, mode=mode)
    rep.run("star of order/disorder operators", stars, mode=mode)
    return rep


def takai_dimension_check(G, window: Window | None = None, Y=None, mfa: MatrixFieldAlgebra | None = None) -> Report:
    """Equal dimension and one-dimensional centers of the iterated crossed
    product and ``M_{|G|^2}(F)``.  Skipped for windows with an odd number of
    sites, where the base field algebra is not a full matrix algebra."""
    from .crossed import crossed_product, iterated_crossed
    from .hopf import quantum_double
    rep = Report()
    F = field_algebra(G, window) if Y is None else Y.inner.A.field
    if len(F.window) % 2:
        zb = center_basis(F.algebra)
        rep.add(Check("base field algebra simple", len(zb) == 1, f"center dim {len(zb)}"))
        rep.add(Check("takai dimension and simplicity", True,
                      "odd window: base is not a full matrix algebra, check skipped", skipped=True))
        return rep
    if Y is None:
        rec = FieldExpectation(F, verify_invariants=False)
        X = crossed_product(F.algebra, quantum_double(G), rec.gamma, verify=False, monomial=True)
        Y = iterated_crossed(X)
    mfa = mfa or MatrixFieldAlgebra(F)
    target = F.dim * G.order ** 4
    rep.run("dim F⋊D(G)⋊D(G)^ = dim M_|G|²(F)",
            lambda: (Y.dim == mfa.dim == target, f"{Y.dim} vs {mfa.dim} vs {target}"))
    from .crossed import crossed_generators
    X = Y.inner
    ygens = crossed_generators(Y, crossed_generators(X, F.generators()))
    for name, alg, gens in (("F⋊D(G)⋊D(G)^", Y.algebra, ygens), ("M_|G|²(F)", mfa.algebra, mfa.generators())):
        def center(alg=alg, gens=gens):
            zb = center_basis(alg, gens)
            return len(zb) == 1, f"center dim {len(zb)}"
        rep.run(f"center of {name} is one-dimensional", center)
    return rep


@dataclass
class TowerLevel:
    level: int
    description: str
    dimension: int
    expectation_status: str = "-"
    iso_status: str = "-"
    algebra: object = None
    expectation: object = None
    jones: object = None
    report: Report = dc_field(default_factory=Report)


def tower(G, window: Window | None = None, depth: int = 2, battery_limit: int = 1000,
          iso_limit: int = 300, samples: int = 20, seed: int = 0, tol: float = 1e-8) -> list[TowerLevel]:
    """Levels of ``A ⊆ F ⊆ F⋊D(G) ⊆ F⋊D(G)⋊D(G)^ ⊆ ...``.

    Levels 0-2 are constructed; levels 3 and 4 are dimension bookkeeping.
    Expectation batteries run when the level dimension is at most
    ``battery_limit``; isomorphisms to basic constructions when at most
    ``iso_limit``.
    """
    from .basic import phi_iso, psi_iso
    from .crossed import crossed_product, expectation_E2, iterated_crossed, jones_element, tau_action
    from .expectation import ExpectationSetup
    from .hopf import integral_expectation, invariant_subalgebra, quantum_double
    if not 0 <= depth <= 4:
        raise DepthExceeded(f"tower depth {depth} exceeds 4")
    n2 = G.order ** 2
    F = field_algebra(G, window)
    rec = FieldExpectation(F)
    setup = rec.setup()
    levels = []

    def battery(lv, st, dim):
        if dim > battery_limit:
            lv.expectation_status = "skipped"
            return
        r = st.verify(samples=samples, seed=seed, tol=tol)
        lv.report.extend(r, prefix=f"level{lv.level}.")
        lv.expectation_status = "pass" if r.ok else "fail"

    l0 = TowerLevel(0, "F ⊇ A (E)", F.dim, algebra=F.algebra, expectation=rec.map)
    battery(l0, setup, F.dim)
    levels.append(l0)
    if depth >= 1:
        X = crossed_product(F.algebra, quantum_double(G), rec.gamma, verify=False, monomial=True)
        sigma, E2, setup2 = expectation_E2(X, verify_invariants=False)
        setup2.B_generators = [X.embed(g) for g in F.generators()] + [X.embed_hopf({h: 1}) for h in range(X.nH)]
        l1 = TowerLevel(1, "F⋊D(G) ⊇ F (E2)", X.dim, algebra=X.algebra, expectation=E2, jones=jones_element(X))
        battery(l1, setup2, X.dim)
        if X.dim <= iso_limit:
            _, r = phi_iso(G, window)
            l1.report.extend(r, prefix="level1.phi.")
            l1.iso_status = "≅ <F,e> " + ("pass" if r.ok else "fail")
        else:
            l1.iso_status = "skipped"
        levels.append(l1)
    if depth >= 2:
        Y = iterated_crossed(X, sigma)
        tau = tau_action(Y, X.H)
        E3 = integral_expectation(tau)
        l2 = TowerLevel(2, "F⋊D(G)⋊D(G)^ ⊇ F⋊D(G) (τ)", Y.dim, algebra=Y.algebra, expectation=E3,
                        jones=jones_element(Y))
        if Y.dim <= battery_limit:
            inv = invariant_subalgebra(tau, verify=False)
            from .crossed import _float_pullback
            st = ExpectationSetup(Y.algebra, E3, inv, name="Eτ",
                                  A_generators=[Y.embed(g) for g in setup2.B_generators],
                                  range_algebra=X.algebra, pullback=lambda v: _float_pullback(Y, v))
            battery(l2, st, Y.dim)
        else:
            l2.expectation_status = "skipped"
        if X.dim <= iso_limit:
            _, r = psi_iso(G, window)
            l2.report.extend(r, prefix="level2.psi.")
            l2.iso_status = "≅ <F⋊D(G),e2> " + ("pass" if r.ok else "fail")
        else:
            l2.iso_status = "skipped"
        levels.append(l2)
    dim = levels[-1].dimension
    for k in range(len(levels), depth + 1):
        dim *= n2
        desc = "F⋊D(G)⋊D(G)^⋊D(G)" if k == 3 else f"M_{n2 * n2}(F)"
        levels.append(TowerLevel(k, desc + " (dimension only)", dim, "n/a", "n/a"))
    return levels


def tower_dimensions_ok(levels) -> bool:
    """Dimensions grow by ``|G|^2`` per level."""
    return all(b.dimension == a.dimension * (levels[0].algebra.field.n ** 2)
               for a, b in zip(levels, levels[1:]))


def tower_table(levels) -> str:
    rows = [("level", "description", "dimension", "expectation", "iso")]
    rows += [(str(l.level), l.description, str(l.dimension), l.expectation_status, l.iso_status) for l in levels]
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
