"""Basic constructions at finite scale.

Operators on ``B`` are stored as dicts of columns ``{j: {i: a_ij}}`` in the
basis of ``B``; zero columns are omitted.  The basic construction is the
span of ``lambda(x) e lambda(y)`` where ``e`` is the matrix of the
conditional expectation.  Spanning operators are inserted into an
:class:`~gspin.linalg.Echelon` with tags (the candidate images under the
isomorphism to the crossed product and under the dual expectation), so the
linear extension of both maps is built and checked for consistency in one
pass.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import BasisAlgebra, FloatRep, label_generators
from .crossed import CrossedProduct, jones_element
from .expectation import ExpectationSetup
from .linalg import Echelon, axpy, scale
from .report import Check, Report
from .scalars import conj, sqrt


class SetupInvalid(ValueError):
    pass


class IllDefined(ValueError):
    pass


class BadSite(ValueError):
    pass


# ---------------------------------------------------------------- operators


def op_apply(P: dict, v: dict) -> dict:
    out: dict = {}
    for k, c in v.items():
        col = P.get(k)
        if col:
            axpy(out, c, col)
    return out


def op_mul(P: dict, Q: dict) -> dict:
    out = {}
    for j, col in Q.items():
        r = op_apply(P, col)
        if r:
            out[j] = r
    return out


def op_add(P: dict, Q: dict, a=1) -> dict:
    """``P + a Q``."""
    out = {j: dict(c) for j, c in P.items()}
    for j, col in Q.items():
        tgt = out.setdefault(j, {})
        axpy(tgt, a, col)
        if not tgt:
            del out[j]
    return out


def op_scale(a, P: dict) -> dict:
    if a == 0:
        return {}
    return {j: scale(a, c) for j, c in P.items()}


def op_identity(n: int) -> dict:
    return {j: {j: 1} for j in range(n)}


def flatten(P: dict, n: int) -> dict:
    return {r * n + j: c for j, col in P.items() for r, c in col.items()}


def unflatten(v: dict, n: int) -> dict:
    out: dict = {}
    for k, c in v.items():
        r, j = divmod(k, n)
        out.setdefault(j, {})[r] = c
    return out


def left_op(B: BasisAlgebra, x: dict) -> dict:
    """``lambda(x)``: left multiplication by ``x``."""
    out = {}
    for j in range(B.dim):
        c = B.mul_vec(x, {j: 1})
        if c:
            out[j] = c
    return out


def right_op(B: BasisAlgebra, x: dict) -> dict:
    out = {}
    for j in range(B.dim):
        c = B.mul_vec({j: 1}, x)
        if c:
            out[j] = c
    return out


def map_op(gamma, n: int) -> dict:
    out = {}
    for j in range(n):
        c = gamma.column(j)
        if c:
            out[j] = dict(c)
    return out


class Adjoint:
    """Operator adjoint for the inner product ``<x, y> = state(x^* y)``.

    ``X^dagger = G^-1 X^H G`` with ``G`` the exact Gram of the state.
    """

    def __init__(self, B: BasisAlgebra, state=None):
        n = B.dim
        state = state or B.state
        gram: dict = {}
        ech = Echelon()
        for i in range(n):
            si = B.star_basis(i)
            row = {}
            for j in range(n):
                p = B.mul_vec(si, {j: 1})
                v = 0
                for k, c in p.items():
                    s = state(k)
                    if s != 0:
                        v = v + c * s
                if v != 0:
                    row[j] = v
            gram[i] = row
            ech.add(row, {i: 1})
        if ech.rank != n:
            raise SetupInvalid("state is not faithful; Gram is singular")
        # gram as operator: column j holds G[:, j]
        self.G: dict = {}
        for i, row in gram.items():
            for j, v in row.items():
                self.G.setdefault(j, {})[i] = v
        self.Ginv: dict = {}
        for c, (_row, aug) in ech.pivots.items():
            for i, v in aug.items():
                self.Ginv.setdefault(i, {})[c] = v
        self.n = n

    def __call__(self, X: dict) -> dict:
        XH: dict = {}
        for k, col in X.items():
            for l, v in col.items():
                XH.setdefault(l, {})[k] = conj(v)
        return op_mul(self.Ginv, op_mul(XH, self.G))


# ---------------------------------------------------------------- Jones projection


def jones_projection(setup: ExpectationSetup) -> dict:
    """Matrix of ``Gamma`` in the basis of ``B``."""
    return map_op(setup.gamma, setup.B.dim)


def jones_projection_checks(setup: ExpectationSetup, witness_labels=None) -> Report:
    """Idempotence, self-adjointness for the module inner product, the
    covariance ``e lambda(T) e = lambda(Gamma(T)) e`` and the commutant law
    ``e lambda(T) = lambda(T) e  iff  T in A``."""
    B, G = setup.B, setup.gamma
    n = B.dim
    e = jones_projection(setup)
    rep = Report()
    rep.run("jones projection idempotent", lambda: (op_mul(e, e) == e, "e^2 != e"))

    def selfadj():
        for x in range(n):
            ex = G.column(x)
            for y in range(n):
                if setup.inner(ex, {y: 1}) != setup.inner({x: 1}, G.column(y)):
                    return False, (B.labels[x], B.labels[y])
        return True, None

    rep.run("<ex,y> = <x,ey>", selfadj)

    def covariance():
        for t in range(n):
            lt = left_op(B, {t: 1})
            if op_mul(op_mul(e, lt), e) != op_mul(left_op(B, G.column(t)), e):
                return False, B.labels[t]
        return True, None

    rep.run("e λ(T) e = λ(Γ(T)) e", covariance)

    def commutant():
        ech = Echelon()
        rows: dict = {}
        for t in range(n):
            lt = left_op(B, {t: 1})
            d = flatten(op_add(op_mul(e, lt), op_mul(lt, e), -1), n)
            for k, v in d.items():
                rows.setdefault(k, {})[t] = v
        for r in rows.values():
            ech.add(r)
        ker = ech.kernel(n)
        A = setup.A_echelon
        if len(ker) != A.rank:
            return False, f"commutant dim {len(ker)} vs dim A {A.rank}"
        return all(A.contains(v) for v in ker), "commutant vector outside A"

    rep.run("commutant of e = A", commutant)
    if witness_labels:
        def witness():
            for v in witness_labels:
                lt = left_op(B, v)
                if op_mul(e, lt) == op_mul(lt, e):
                    return False, "expected a non-commuting element"
            return True, None

        rep.run("e fails to commute off A", witness)
    return rep


# ---------------------------------------------------------------- basic construction


class BasicConstruction:
    """``<B, e>`` as the exact span of ``lambda(x) e lambda(y)``.

    ``crossed`` (a crossed product of ``B`` whose integral expectation is
    ``Gamma``) tags each spanning operator with ``(x (x) 1)(1 (x) h)(y (x) 1)``;
    ``dual_scale`` tags it with ``dual_scale * x y``.  Leftover tags on
    dependent spanning operators are collected in :attr:`ill_defined`.
    """

    def __init__(self, setup: ExpectationSetup, crossed: CrossedProduct | None = None,
                 dual_scale=None, pairs=None):
        self.setup = setup
        B = self.B = setup.B
        n = self.n = B.dim
        self.crossed = crossed
        self.dual_scale = dual_scale
        self.e = jones_projection(setup)
        self._lam: dict = {}
        self.ech = Echelon()
        self.pairs: list = []
        self.ill_defined: list = []
        G = setup.gamma
        X = crossed
        jones = jones_element(X) if X is not None else None
        ys = range(n) if pairs is None else sorted({y for _, y in pairs})
        want = None if pairs is None else set(pairs)
        for y in ys:
            ey = {j: G(B.mul_basis(y, j)) for j in range(n)}
            ey = {j: c for j, c in ey.items() if c}
            if X is not None:
                ej = X.mul_tensor(jones, X.embed({y: 1}))
            for x in range(n):
                if want is not None and (x, y) not in want:
                    continue
                v = {}
                for j, c in ey.items():
                    for r, w in B.mul_vec({x: 1}, c).items():
                        v[r * n + j] = w
                aug = {}
                if X is not None:
                    for k, c in X.mul_tensor(X.embed({x: 1}), ej).items():
                        aug[(0, k)] = c
                if dual_scale is not None:
                    for k, c in B.mul_basis(x, y).items():
                        aug[(1, k)] = c * dual_scale
                p, left = self.ech.add(v, aug)
                if p is not None:
                    self.pairs.append((x, y))
                elif left:
                    self.ill_defined.append((B.labels[x], B.labels[y]))

    @property
    def dim(self) -> int:
        return self.ech.rank

    def lam(self, i: int) -> dict:
        r = self._lam.get(i)
        if r is None:
            r = self._lam[i] = left_op(self.B, {i: 1})
        return r

    def lam_vec(self, x: dict) -> dict:
        return left_op(self.B, x)

    def spanning_op(self, x: int, y: int) -> dict:
        return op_mul(op_mul(self.lam(x), self.e), self.lam(y))

    def basis_ops(self) -> list[dict]:
        return [self.spanning_op(x, y) for x, y in self.pairs]

    def contains(self, P: dict) -> bool:
        return self.ech.contains(flatten(P, self.n))

    def _tag(self, P: dict, kind: int):
        img = self.ech.image(flatten(P, self.n))
        if img is None:
            return None
        return {k: c for (t, k), c in img.items() if t == kind}

    def phi(self, P: dict) -> dict | None:
        """Image in the crossed product, or ``None`` outside the span."""
        if self.crossed is None:
            raise ValueError("no crossed product attached")
        return self._tag(P, 0)

    def dual_vec(self, P: dict) -> dict | None:
        """``E~(P)`` as a vector of ``B``."""
        if self.dual_scale is None:
            raise ValueError("no dual expectation attached")
        return self._tag(P, 1)

    def dual(self, P: dict) -> dict:
        """``E~(P)`` as an operator ``lambda(...)``."""
        v = self.dual_vec(P)
        if v is None:
            raise IllDefined("operator outside the basic construction")
        return left_op(self.B, v)

    @property
    def adjoint(self) -> Adjoint:
        a = getattr(self, "_adj", None)
        if a is None:
            a = self._adj = Adjoint(self.B, self.setup.state)
        return a

    def generators(self) -> list[dict]:
        """``lambda`` of the generators of ``B`` together with ``e``."""
        gens = self.setup.B_generators
        if gens is None:
            gens = [{i: 1} for i in range(self.n)]
        return [left_op(self.B, g) for g in gens] + [self.e]

    def verify(self, exhaustive_limit: int = 10_000) -> Report:
        rep = Report()
        n = self.n
        rep.run("spanning tags consistent", lambda: (not self.ill_defined,
                                                       self.ill_defined[:3] or None))
        rep.run("identity in span", lambda: (self.contains(op_identity(n)), "I not in span"))
        basis = self.basis_ops()
        gens = self.generators()

        def closed_mul():
            for gi, g in enumerate(gens):
                for bi, b in enumerate(basis):
                    if not self.contains(op_mul(g, b)):
                        return False, (gi, self.pairs[bi])
            return True, None

        rep.run("span closed under products", closed_mul, mode="generators")

        def closed_adj():
            for bi, b in enumerate(basis):
                if not self.contains(self.adjoint(b)):
                    return False, self.pairs[bi]
            return True, None

        rep.run("span closed under adjoint", closed_adj)

        def adjoints_agree():
            # the trace-GNS adjoint agrees with the module adjoint on generators
            inner = self.setup.inner
            for gi, g in enumerate(gens):
                gd = self.adjoint(g)
                for x in range(n):
                    gx = op_apply(g, {x: 1})
                    for y in range(n):
                        if inner(gx, {y: 1}) != inner({x: 1}, op_apply(gd, {y: 1})):
                            return False, (gi, self.B.labels[x], self.B.labels[y])
            return True, None

        mode = "exact" if len(gens) * n * n <= exhaustive_limit * 10 else "generators"
        rep.run("GNS adjoint = module adjoint", adjoints_agree, mode=mode)
        return rep


def basic_construction(setup: ExpectationSetup, verify: bool = True, **kw) -> BasicConstruction:
    bc = BasicConstruction(setup, **kw)
    if verify:
        rep = bc.verify()
        if not rep.ok:
            raise SetupInvalid(str(rep.first_failure()))
    return bc


# ---------------------------------------------------------------- crossed product representation


def crossed_rep(X: CrossedProduct, c: int) -> dict:
    """``pi(a (x) h)``: ``b -> a h(b)`` on the carrier of ``X``."""
    A = X.A
    t, h = divmod(c, X.nH)
    out = {}
    for j in range(A.dim):
        v = X.act.basis(h, j)
        if v:
            w = A.mul_vec({t: 1}, v)
            if w:
                out[j] = w
    return out


def crossed_rep_vec(X: CrossedProduct, vec: dict) -> dict:
    out: dict = {}
    for c, a in vec.items():
        out = op_add(out, crossed_rep(X, c), a)
    return out


class CrossedIso:
    """``Phi: <B, e> -> B x| H`` with inverse the representation ``pi``.

    ``Phi`` is read off the tagged echelon; ``pi`` acts on ``B``.
    """

    def __init__(self, bc: BasicConstruction, X: CrossedProduct):
        self.bc, self.X = bc, X
        self._pi: dict = {}

    def pi(self, c: int) -> dict:
        r = self._pi.get(c)
        if r is None:
            r = self._pi[c] = crossed_rep(self.X, c)
        return r

    def pi_vec(self, vec: dict) -> dict:
        out: dict = {}
        for c, a in vec.items():
            out = op_add(out, self.pi(c), a)
        return out

    def __call__(self, P: dict) -> dict | None:
        return self.bc.phi(P)

    def verify(self, exhaustive_limit: int = 5_000) -> Report:
        bc, X = self.bc, self.X
        B, XA = bc.B, X.algebra
        n, m = bc.n, X.dim
        rep = Report()
        rep.run("Φ well defined on spanning set", lambda: (not bc.ill_defined, bc.ill_defined[:3] or None))
        rep.run("dim <B,e> = dim B⋊H", lambda: (bc.dim == m, f"{bc.dim} vs {m}"))

        def gen_assign():
            for t in range(n):
                if self.pi_vec(X.embed({t: 1})) != bc.lam(t):
                    return False, B.labels[t]
                if bc.phi(bc.lam(t)) != X.embed({t: 1}):
                    return False, ("Φ", B.labels[t])
            return True, None

        rep.run("Φ(λ(T)) = T⋊1", gen_assign)

        def jones():
            jv = jones_element(X)
            if self.pi_vec(jv) != bc.e:
                return False, "pi(1⋊h) != e"
            if bc.phi(bc.e) != jv:
                return False, "Φ(e) != 1⋊h"
            return XA.mul_vec(jv, jv) == jv, "Φ(e)^2 != Φ(e)"

        rep.run("Φ(e) = 1⋊h_int", jones)

        def jones_cov():
            G = bc.setup.gamma
            for t in range(n):
                lhs = bc.phi(op_mul(op_mul(bc.e, bc.lam(t)), bc.e))
                rhs = bc.phi(op_mul(left_op(B, G.column(t)), bc.e))
                if lhs is None or lhs != rhs:
                    return False, B.labels[t]
            return True, None

        rep.run("Φ(eTe) = Φ(Γ(T)e)", jones_cov)
        rep.run("Φ unital", lambda: (bc.phi(op_identity(n)) == XA.unit_vec, "Φ(I) != 1"))

        def bijective():
            ech = Echelon()
            for c in range(m):
                P = self.pi(c)
                if not bc.contains(P):
                    return False, ("outside span", XA.labels[c])
                ech.add(flatten(P, n))
            if ech.rank != m:
                return False, f"rank {ech.rank} of {m}"
            for c in range(m):
                if bc.phi(self.pi(c)) != {c: 1}:
                    return False, ("Φπ != id", XA.labels[c])
            return True, None

        rep.run("Φ bijective (exact rank)", bijective)

        if m * m <= exhaustive_limit:
            pairs, mode = list(itertools.product(range(m), repeat=2)), "exact"
        else:
            gens = label_generators(XA) if XA.monomial else range(m)
            pairs, mode = [(g, c) for g in gens for c in range(m)], "generators"

        def multiplicative():
            for a, b in pairs:
                if self.pi_vec(XA.mul_basis(a, b)) != op_mul(self.pi(a), self.pi(b)):
                    return False, (XA.labels[a], XA.labels[b])
            return True, None

        rep.run("Φ multiplicative", multiplicative, mode=mode)

        def star():
            adj = bc.adjoint
            for c in range(m):
                if self.pi_vec(XA.star_basis(c)) != adj(self.pi(c)):
                    return False, XA.labels[c]
            return True, None

        rep.run("Φ star-preserving", star)
        return rep


def crossed_iso(setup: ExpectationSetup, X: CrossedProduct, dual_scale=None) -> CrossedIso:
    bc = BasicConstruction(setup, crossed=X, dual_scale=dual_scale)
    return CrossedIso(bc, X)


def sampled_crossed_iso_checks(X: CrossedProduct, setup: ExpectationSetup, samples: int = 500,
                               seed: int = 0) -> Report:
    """Seeded identity instances of ``pi`` for carriers too large for the full span."""
    B, XA = X.A, X.algebra
    n, m = B.dim, X.dim
    rng = random.Random(seed)
    e = jones_projection(setup)
    jv = jones_element(X)
    adj = Adjoint(B, setup.state)
    cache: dict = {}

    def pi(c):
        r = cache.get(c)
        if r is None:
            r = cache[c] = crossed_rep(X, c)
        return r

    def pi_vec(v):
        out: dict = {}
        for c, a in v.items():
            out = op_add(out, pi(c), a)
        return out

    pairs = [(rng.randrange(m), rng.randrange(m)) for _ in range(samples)]
    singles = [rng.randrange(m) for _ in range(samples)]
    rep = Report()

    def mult():
        for a, b in pairs:
            if pi_vec(XA.mul_basis(a, b)) != op_mul(pi(a), pi(b)):
                return False, (XA.labels[a], XA.labels[b])
        return True, None

    rep.run("Φ multiplicative", mult, mode="sampled")

    def star():
        for c in singles[: max(1, samples // 10)]:
            if pi_vec(XA.star_basis(c)) != adj(pi(c)):
                return False, XA.labels[c]
        return True, None

    rep.run("Φ star-preserving", star, mode="sampled")

    def gens():
        if pi_vec(jv) != e:
            return False, "pi(1⋊h) != e"
        for t in singles:
            t = t % n
            if pi_vec(X.embed({t: 1})) != left_op(B, {t: 1}):
                return False, B.labels[t]
        return True, None

    rep.run("Φ(λ(T)) = T⋊1, Φ(e) = 1⋊h_int", gens, mode="sampled")

    def injective():
        # distinct basis elements have independent images: sampled pairs
        for a, b in pairs:
            if a != b and flatten(pi(a), n) == flatten(pi(b), n):
                return False, (XA.labels[a], XA.labels[b])
            if not pi(a):
                return False, XA.labels[a]
        return True, None

    rep.run("π injective on samples", injective, mode="sampled")
    return rep


def preimage_formula(X: CrossedProduct, c: int):
    """``(m1, m2)`` with ``Phi^-1(c) = |G| lambda(m1) e lambda(m2)``, standard window only."""
    F = X.A.field
    G = F.G
    t, iv, u = G.table, G.inv, G.unit
    f, a = divmod(c, X.nH)
    g, h = divmod(a, G.order)
    (g1, g2), (h1, h2) = F.algebra.labels[f]
    m1 = F.encode((g1, g2), (h1, t[h2][g]))
    hi, gi = iv[h], iv[g]
    d1 = t[t[hi][iv[h1]]][g1]
    d2 = _word(t, [hi, gi, iv[h2], iv[h1], g2])
    m2 = F.encode((d1, d2), (u, _word(t, [hi, gi, h])))
    return m1, m2


def _word(t, xs):
    r = xs[0]
    for x in xs[1:]:
        r = t[r][x]
    return r


def preimage_checks(X: CrossedProduct, bc: BasicConstruction | None = None, labels=None) -> Report:
    """The explicit preimage formula, in the crossed product and as operators."""
    from .field import STANDARD_WINDOW
    F = X.A.field
    rep = Report()
    if F.window != STANDARD_WINDOW:
        rep.add(Check("Φ^-1 explicit preimage", True, "formula stated on the window {1/2,1,3/2,2}",
                      skipped=True))
        return rep
    n = F.G.order
    jv = jones_element(X)
    XA = X.algebra
    cs = range(X.dim) if labels is None else labels

    def in_crossed():
        for c in cs:
            m1, m2 = preimage_formula(X, c)
            v = X.mul_tensor(X.mul_tensor(X.embed({m1: 1}), jv), X.embed({m2: 1}))
            if scale(n, v) != {c: 1}:
                return False, XA.labels[c]
        return True, None

    rep.run("Φ^-1 explicit preimage (crossed)", in_crossed)
    if bc is not None:
        def as_ops():
            for c in cs:
                m1, m2 = preimage_formula(X, c)
                P = op_scale(n, bc.spanning_op(m1, m2))
                if P != crossed_rep(X, c):
                    return False, XA.labels[c]
            return True, None

        rep.run("Φ^-1 explicit preimage (operators)", as_ops)
    return rep


def phi_iso(G, window=None, verify: bool = True):
    """``<F, e_A> -> F x| D(G)`` for the gamma expectation; returns ``(iso, report)``."""
    from .field import FieldExpectation, field_algebra
    from .crossed import crossed_product
    from .hopf import quantum_double
    F = field_algebra(G, window)
    rec = FieldExpectation(F)
    X = crossed_product(F.algebra, quantum_double(G), rec.gamma, verify=False, monomial=True)
    iso = crossed_iso(rec.setup(), X, dual_scale=Fraction(1, G.order ** 2))
    rep = iso.verify() if verify else Report()
    return iso, rep


def psi_iso(G, window=None, verify: bool = True):
    """``<F x| D(G), e_2> -> F x| D(G) x| D(G)^``; returns ``(iso, report)``."""
    from .field import FieldExpectation, field_algebra
    from .crossed import crossed_product, expectation_E2, iterated_crossed
    from .hopf import quantum_double
    F = field_algebra(G, window)
    rec = FieldExpectation(F)
    X = crossed_product(F.algebra, quantum_double(G), rec.gamma, verify=False, monomial=True)
    sigma, E2, setup = expectation_E2(X)
    setup.B_generators = [X.embed(g) for g in F.generators()] + [X.embed_hopf({h: 1}) for h in range(X.nH)]
    Y = iterated_crossed(X, sigma)
    iso = crossed_iso(setup, Y)
    rep = iso.verify() if verify else Report()
    return iso, rep


# ---------------------------------------------------------------- dual expectation


def dual_expectation_checks(bc: BasicConstruction, samples: int = 100, seed: int = 0, tol: float = 1e-8,
                            gram_limit: int = 100) -> Report:
    """Conditional-expectation battery for ``E~`` on ``<B, e>`` onto ``lambda(B)``."""
    B, n = bc.B, bc.n
    rep = Report()
    basis = bc.basis_ops()
    rep.run("E~ well defined", lambda: (not bc.ill_defined, bc.ill_defined[:3] or None))
    rep.run("E~ unital", lambda: (bc.dual_vec(op_identity(n)) == B.unit_vec, "E~(I) != I"))

    def formula():
        s = bc.dual_scale
        for x, y in bc.pairs:
            if bc.dual_vec(bc.spanning_op(x, y)) != scale(s, B.mul_basis(x, y)):
                return False, (B.labels[x], B.labels[y])
        return True, None

    rep.run("E~(x e y) = xy/|G|^2", formula)

    def fixes():
        for t in range(n):
            if bc.dual_vec(bc.lam(t)) != {t: 1}:
                return False, B.labels[t]
        return True, None

    rep.run("E~ fixes λ(B)", fixes)

    def idem():
        for P in basis:
            d = bc.dual(P)
            if bc.dual(d) != d:
                return False, "E~ not idempotent"
        return True, None

    rep.run("E~ idempotent", idem)
    gens = [left_op(B, g) for g in (bc.setup.B_generators or [{i: 1} for i in range(n)])]

    def bimod():
        for g in gens:
            for P in basis:
                d = bc.dual(P)
                if bc.dual(op_mul(g, P)) != op_mul(g, d) or bc.dual(op_mul(P, g)) != op_mul(d, g):
                    return False, "bimodule law"
        return True, None

    rep.run("E~ λ(B)-bimodular", bimod, mode="generators")

    if len(basis) <= gram_limit:
        def faithful():
            adj = bc.adjoint
            st = B.state_vec
            ech = Echelon()
            stars = [adj(P) for P in basis]
            for Ps in stars:
                ech.add({j: v for j, Q in enumerate(basis)
                         if (v := st(bc.dual_vec(op_mul(Ps, Q)))) != 0})
            return ech.rank == len(basis), f"Gram rank {ech.rank}"

        rep.run("E~ faithful", faithful)

    def positive():
        rng = random.Random(seed)
        fr = FloatRep(B, bc.setup.state) if B.monomial else None
        adj = bc.adjoint
        import numpy as np
        for s in range(samples):
            P: dict = {}
            for _ in range(3):
                P = op_add(P, basis[rng.randrange(len(basis))], rng.randint(-3, 3))
            v = bc.dual_vec(op_mul(adj(P), P))
            x = np.zeros(n, dtype=complex)
            for k, c in v.items():
                x[k] = complex(c)
            if fr is not None and not fr.is_positive(x, tol):
                return False, f"sample {s}"
        return True, None

    rep.run("E~ positive", positive, mode="float")
    return rep


# ---------------------------------------------------------------- quasi-bases


class QuasiBasis:
    def __init__(self, pairs):
        self.pairs = list(pairs)

    def __len__(self):
        return len(self.pairs)

    def without(self, k: int) -> "QuasiBasis":
        return QuasiBasis(self.pairs[:k] + self.pairs[k + 1:])


def standard_quasi_basis(bc: BasicConstruction, k=None) -> QuasiBasis:
    """``u_{x,y} = |G|^{3/2} lambda(d[x]@k r[y]@k+1/2) e`` with ``v = u^dagger``.

    ``k`` is a doubled integer site; by default the least one with ``k+1/2``
    in the window.
    """
    F = bc.B.field
    w = F.window
    if k is None:
        ks = [x for x in w.ints if x + 1 in w.halves]
        if not ks:
            raise BadSite(f"window {w} has no sites k, k+1/2")
        k = ks[0]
    if k not in w.ints or k + 1 not in w.halves:
        raise BadSite(f"quasi-basis needs sites k and k+1/2 in {w}")
    n = F.n
    c = n * sqrt(n)
    adj = bc.adjoint
    pairs = []
    for x in range(n):
        for y in range(n):
            m = F.pm_word([("d", k, x), ("r", k + 1, y)])
            u = op_scale(c, op_mul(left_op(bc.B, F.expand(m)), bc.e))
            pairs.append((u, adj(u)))
    return QuasiBasis(pairs)


def index(qb: QuasiBasis) -> dict:
    """``sum u_i v_i``."""
    out: dict = {}
    for u, v in qb.pairs:
        out = op_add(out, op_mul(u, v))
    return out


def quasi_basis_check(dual, qb: QuasiBasis, basis_ops, generators=(), labels=None) -> Report:
    """Both reproduction identities on ``basis_ops`` and centrality of the index.

    ``dual`` maps an operator to an operator.
    """
    rep = Report()
    labels = labels or list(range(len(basis_ops)))

    def left_rep():
        for lab, b in zip(labels, basis_ops):
            s: dict = {}
            for u, v in qb.pairs:
                s = op_add(s, op_mul(u, dual(op_mul(v, b))))
            if s != b:
                return False, lab
        return True, None

    def right_rep():
        for lab, b in zip(labels, basis_ops):
            s: dict = {}
            for u, v in qb.pairs:
                s = op_add(s, op_mul(dual(op_mul(b, u)), v))
            if s != b:
                return False, lab
        return True, None

    rep.run("quasi-basis Σ u E~(v b) = b", left_rep)
    rep.run("quasi-basis Σ E~(b u) v = b", right_rep)
    ind = index(qb)

    def central():
        for gi, g in enumerate(generators):
            if op_mul(ind, g) != op_mul(g, ind):
                return False, gi
        return True, None

    rep.run("index central", central, mode="generators")
    rep.index = ind
    return rep


def index_value(ind: dict, n: int):
    """The scalar ``c`` with ``ind = c * identity``, or ``None``."""
    c = ind.get(0, {}).get(0)
    if c is None:
        return None
    return c if ind == op_scale(c, op_identity(n)) else None


def e_tilde_matches_e2(iso: CrossedIso, E2) -> Report:
    """``E2(c) = E~(pi(c)) (x) 1`` for every crossed label ``c``."""
    bc, X = iso.bc, iso.X
    rep = Report()

    def run():
        for c in range(X.dim):
            v = bc.dual_vec(iso.pi(c))
            if v is None:
                return False, ("outside span", X.algebra.labels[c])
            if X.embed(v) != E2.column(c):
                return False, X.algebra.labels[c]
        return True, None

    rep.run("E2 = Φ∘E~∘Φ^-1", run)
    return rep
