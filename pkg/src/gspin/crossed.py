"""Crossed products ``A x| H`` by module-algebra actions, the Jones element,
the dual action sigma, ``E2``, the iterated crossed product and tau.

A crossed label is ``(a_label, h_label)``; iterating flattens it, so the
iterated product over ``F x| D(G)`` has labels ``(monomial, (g,h), (y,x))``.
The index of ``a (x) h`` is ``a * dim(H) + h``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import BasisAlgebra, Element
from .expectation import ExpectationSetup
from .hopf import (HopfAlgebra, LinearMap, ModuleAction, NoIntegral, dual_double_explicit,
                   integral_expectation, invariant_subalgebra, verify_integral, verify_module_algebra)
from .linalg import Echelon, axpy, scale
from .report import Check, Report


class ActionInvalid(ValueError):
    pass


class WrongHopf(ValueError):
    pass


class CrossedProduct:
    def __init__(self, A: BasisAlgebra, H: HopfAlgebra, act: ModuleAction, name: str | None = None,
                 monomial: bool = False):
        self.A, self.H, self.act = A, H, act
        self.nH = H.dim
        self.depth = getattr(A, "crossed_depth", 0) + 1
        HA = H.algebra
        flat = self.depth > 1
        labels = [((*a, h) if flat else (a, h)) for a in A.labels for h in HA.labels]
        self._pairs: dict = {}
        self._unit_act: dict = {}
        self._unitA = A.unit_vec
        unit: dict = {}
        for a, c in A.unit_vec.items():
            for h, d in HA.unit_vec.items():
                unit[a * self.nH + h] = c * d
        state = None
        if A.state is not None and HA.state is not None:
            nH = self.nH

            def state(i):
                a, h = divmod(i, nH)
                s = HA.state(h)
                return 0 if s == 0 else A.state(a) * s

        def fmt(lab):
            if flat:
                *a, h = lab
                return f"{A.fmt(tuple(a))} ⋊ {HA.fmt(h)}"
            return f"{A.fmt(lab[0])} ⋊ {HA.fmt(lab[1])}"

        self.algebra = BasisAlgebra(labels, self._mul_index, unit, self._star_index, state=state,
                                    name=name or f"{A.name}⋊{H.name}", fmt=fmt, monomial=monomial)
        self.algebra.crossed_depth = self.depth
        self.algebra.crossed = self

    @property
    def dim(self):
        return self.algebra.dim

    def __repr__(self):
        return f"CrossedProduct({self.algebra.name}, dim={self.dim})"

    # -- multiplication in tensor form
    def _pair_table(self, a: int, b: int):
        """``[(a1, coef, k)]`` with ``sum a1 (x) (a2 b) = sum coef * a1 (x) b_k``."""
        key = (a, b)
        r = self._pairs.get(key)
        if r is None:
            mb = self.H.algebra.mul_basis
            acc: dict = {}
            for (a1, a2), c in self.H.delta(a).items():
                for k, v in mb(a2, b).items():
                    axpy(acc, c * v, {(a1, k): 1})
            r = self._pairs[key] = [(a1, c, k) for (a1, k), c in acc.items()]
        return r

    def _act_on(self, a1: int, F: dict) -> dict:
        if len(F) == len(self._unitA) and F == self._unitA:
            r = self._unit_act.get(a1)
            if r is None:
                r = self._unit_act[a1] = self.act.apply({a1: 1}, F)
            return r
        return self.act.apply({a1: 1}, F)

    def mul_pieces(self, T: dict, a: int, F: dict, b: int, out: dict) -> None:
        """``out += (T (x) a)(F (x) b)`` with ``T, F`` vectors in ``A``."""
        nH = self.nH
        mv = self.A.mul_vec
        for a1, c, k in self._pair_table(a, b):
            x = self._act_on(a1, F)
            if not x:
                continue
            y = mv(T, x)
            for t, w in y.items():
                key = t * nH + k
                v = out.get(key, 0) + c * w
                if v == 0:
                    out.pop(key, None)
                else:
                    out[key] = v

    def split(self, vec: dict) -> dict:
        """Crossed vector -> ``{h: A-vector}``."""
        out: dict = {}
        nH = self.nH
        for i, c in vec.items():
            a, h = divmod(i, nH)
            out.setdefault(h, {})[a] = c
        return out

    def join(self, pieces: dict) -> dict:
        nH = self.nH
        return {a * nH + h: c for h, v in pieces.items() for a, c in v.items()}

    def mul_tensor(self, x: dict, y: dict) -> dict:
        """Product of crossed vectors, grouped by Hopf label for speed."""
        xs, ys = self.split(x), self.split(y)
        out: dict = {}
        for a, T in xs.items():
            for b, F in ys.items():
                self.mul_pieces(T, a, F, b, out)
        return out

    def _mul_index(self, i: int, j: int) -> dict:
        t, a = divmod(i, self.nH)
        f, b = divmod(j, self.nH)
        out: dict = {}
        self.mul_pieces({t: 1}, a, {f: 1}, b, out)
        return out

    def _star_index(self, i: int) -> dict:
        """``(T (x) a)^* = (1 (x) a^*)(T^* (x) 1)``."""
        t, a = divmod(i, self.nH)
        Tstar = self.A.star_basis(t)
        out: dict = {}
        for a2, c in self.H.algebra.star_basis(a).items():
            for (p, q), d in self.H.delta(a2).items():
                x = self.act.apply({p: 1}, Tstar)
                for k, w in x.items():
                    axpy(out, c * d * w, {k * self.nH + q: 1})
        return out

    # -- embeddings
    def embed(self, T) -> dict:
        """``T -> T (x) 1_H``."""
        vec = T.coeffs if isinstance(T, Element) else T
        out: dict = {}
        for a, c in vec.items():
            for h, d in self.H.algebra.unit_vec.items():
                out[a * self.nH + h] = c * d
        return out

    def embed_hopf(self, h) -> dict:
        """``a -> 1_A (x) a``."""
        vec = h.coeffs if isinstance(h, Element) else h
        out: dict = {}
        for t, c in self.A.unit_vec.items():
            for a, d in vec.items():
                out[t * self.nH + a] = c * d
        return out

    def pure(self, a_idx: int, h_idx: int) -> int:
        return a_idx * self.nH + h_idx

    def element(self, vec) -> Element:
        return self.algebra.element(vec)

    def pullback(self, vec: dict) -> dict:
        """Inverse of :meth:`embed` on its image (reads one Hopf component)."""
        hu = self.H.algebra.unit_vec
        k0 = min(hu)
        c0 = hu[k0]
        nH = self.nH
        return {i // nH: c / c0 for i, c in vec.items() if i % nH == k0}


def crossed_product(A: BasisAlgebra, H: HopfAlgebra, act: ModuleAction, verify: bool = True,
                    monomial: bool = False, name: str | None = None, **kw) -> CrossedProduct:
    """Build ``A x| H``; with ``verify`` the action is checked first and the
    embeddings afterwards (raising :class:`ActionInvalid` on failure)."""
    if verify:
        rep = verify_module_algebra(act, **kw)
        if not rep.ok:
            raise ActionInvalid(str(rep.first_failure()))
    X = CrossedProduct(A, H, act, name=name, monomial=monomial)
    if verify:
        rep = verify_crossed(X, **({"seed": kw["seed"]} if "seed" in kw else {}))
        if not rep.ok:
            raise ActionInvalid(str(rep.first_failure()))
    return X


def verify_crossed(X: CrossedProduct, exhaustive_limit: int = 1_000_000, samples: int = 1000,
                   seed: int = 0) -> Report:
    """Star formula consistency and the embedding ``T -> T (x) 1``."""
    from .algebra import verify_algebra_axioms
    A, XA = X.A, X.algebra
    rep = Report()
    rep.extend(verify_algebra_axioms(XA, exhaustive_limit=exhaustive_limit, samples=samples, seed=seed),
               prefix="crossed.")
    rng = random.Random(seed)
    n = A.dim
    if n * n <= exhaustive_limit:
        pairs, mode = list(itertools.product(range(n), repeat=2)), "exact"
    else:
        pairs, mode = [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)], "sampled"

    def emb_mult():
        for i, j in pairs:
            if XA.mul_vec(X.embed({i: 1}), X.embed({j: 1})) != X.embed(A.mul_basis(i, j)):
                return False, (A.labels[i], A.labels[j])
        return True, None

    rep.run("embedding multiplicative", emb_mult, mode=mode)

    def emb_star():
        for i in range(n):
            if XA.star_vec(X.embed({i: 1})) != X.embed(A.star_basis(i)):
                return False, A.labels[i]
        return True, None

    rep.run("embedding star", emb_star)
    rep.run("embedding unital", lambda: (X.embed(A.unit_vec) == XA.unit_vec, "unit"))

    def emb_inj():
        e = Echelon()
        for i in range(n):
            e.add(X.embed({i: 1}))
        return e.rank == n, f"rank {e.rank}"

    rep.run("embedding injective", emb_inj)

    def star_formula():
        m = XA.dim
        idx = range(m) if m <= 5000 else [rng.randrange(m) for _ in range(samples)]
        for i in idx:
            t, a = divmod(i, X.nH)
            lhs = XA.star_basis(i)
            rhs = X.mul_tensor(X.embed_hopf(X.H.algebra.star_basis(a)), X.embed(A.star_basis(t)))
            if lhs != rhs:
                return False, XA.labels[i]
        return True, None

    rep.run("star (T⋊a)* = (1⋊a*)(T*⋊1)", star_formula)
    return rep


# ---------------------------------------------------------------- Jones element


def jones_element(X: CrossedProduct) -> dict:
    """``e = 1_A (x) h_int``."""
    h = X.H.integral
    if h is None:
        raise NoIntegral(f"{X.H.name} has no integral")
    return X.embed_hopf(h)


def jones_checks(X: CrossedProduct, monomials=None, expectation: LinearMap | None = None) -> Report:
    """``e = e^2 = e^*`` and ``e (T (x) 1) e = (E(T) (x) 1) e`` on the given carrier labels."""
    e = jones_element(X)
    E = expectation or integral_expectation(X.act)
    XA = X.algebra
    rep = Report()
    rep.run("jones idempotent", lambda: (X.mul_tensor(e, e) == e, "e^2 != e"))
    rep.run("jones self-adjoint", lambda: (XA.star_vec(e) == e, "e* != e"))
    labels = range(X.A.dim) if monomials is None else monomials

    def covariant():
        for t in labels:
            lhs = X.mul_tensor(X.mul_tensor(e, X.embed({t: 1})), e)
            rhs = X.mul_tensor(X.embed(E.column(t)), e)
            if lhs != rhs:
                return False, X.A.labels[t]
        return True, None

    rep.run("jones covariance e(T⋊1)e = (E(T)⋊1)e", covariant,
            mode="exact" if monomials is None else "sampled")
    return rep


# ---------------------------------------------------------------- sigma, E2


def _require_double(X: CrossedProduct):
    if getattr(X.H, "kind", None) != "double":
        raise WrongHopf("expected a crossed product by the quantum double")


def dual_action_sigma(X: CrossedProduct, Dhat: HopfAlgebra | None = None) -> ModuleAction:
    """``(y, delta_x)(F (x) (g, h)) = [x = h] F (x) (g y^-1, h)``."""
    _require_double(X)
    G = X.H.group
    Dhat = Dhat or dual_double_explicit(G)
    n = G.order
    t, iv = G.table, G.inv
    nH = X.nH

    def act(phi, i):
        y, x = divmod(phi, n)
        f, a = divmod(i, nH)
        g, h = divmod(a, n)
        if x != h:
            return {}
        return {f * nH + t[g][iv[y]] * n + h: 1}

    return ModuleAction(Dhat, X.algebra, act, name="sigma")


def expectation_E2(X: CrossedProduct, sigma: ModuleAction | None = None, verify_invariants: bool = True):
    """``E2 = sigma(h_int)``, its range basis and an :class:`ExpectationSetup`."""
    sigma = sigma or dual_action_sigma(X)
    E2 = integral_expectation(sigma)
    rng_basis = invariant_subalgebra(sigma, verify=verify_invariants)
    A = X.A
    gens = None
    if hasattr(A, "field"):
        gens = [X.embed(g) for g in A.field.generators()]
    setup = ExpectationSetup(X.algebra, E2, rng_basis, name="E2", A_generators=gens,
                             range_algebra=A if A.monomial and A.state is not None else None,
                             pullback=lambda v: _float_pullback(X, v))
    return sigma, E2, setup


def _float_pullback(X: CrossedProduct, v):
    hu = X.H.algebra.unit_vec
    k0 = min(hu)
    return v[k0::X.nH] / complex(hu[k0])


def e2_formula(X: CrossedProduct, i: int) -> dict:
    """``E2(F (x) (g, h)) = (1/|G|) [h = u] F (x) 1``."""
    G = X.H.group
    n = G.order
    f, a = divmod(i, X.nH)
    g, h = divmod(a, n)
    if h != G.unit:
        return {}
    return scale(Fraction(1, n), X.embed({f: 1}))


# ---------------------------------------------------------------- iterated product, tau


def iterated_crossed(X: CrossedProduct, sigma: ModuleAction | None = None, verify: bool = False,
                     **kw) -> CrossedProduct:
    """``(F x| D(G)) x| D(G)^`` with flattened triple labels."""
    sigma = sigma or dual_action_sigma(X)
    Y = crossed_product(X.algebra, sigma.H, sigma, verify=verify, monomial=X.algebra.monomial, **kw)
    Y.sigma = sigma
    Y.inner = X
    return Y


def tau_action(Y: CrossedProduct, D: HopfAlgebra | None = None) -> ModuleAction:
    """``(g,h)(F~ (x) (y, delta_x)) = [h^-1 g h = x^-1 y x] F~ (x) (y, delta_{x h^-1})``."""
    if getattr(Y.H, "kind", None) != "dual" or Y.depth != 2:
        raise ValueError("tau acts on the iterated crossed product")
    X = Y.inner
    G = Y.H.group
    D = D or X.H
    n = G.order
    t, iv = G.table, G.inv
    nH = Y.nH

    def act(a, i):
        g, h = divmod(a, n)
        f, phi = divmod(i, nH)
        y, x = divmod(phi, n)
        if t[t[iv[h]][g]][h] != t[t[iv[x]][y]][x]:
            return {}
        return {f * nH + y * n + t[x][iv[h]]: 1}

    return ModuleAction(D, Y.algebra, act, name="tau")


def crossed_generators(X: CrossedProduct, A_generators) -> list[dict]:
    """Generators of ``X`` as an algebra: ``A_gens (x) 1`` and ``1 (x) H``-basis."""
    gens = [X.embed(g) for g in A_generators]
    gens += [X.embed_hopf({h: 1}) for h in range(X.nH)]
    return gens


def check_integral_maps(act: ModuleAction):
    """Integral of the acting algebra verifies and its expectation is idempotent
    with range equal to the invariants."""
    rep = Report()
    rep.add(verify_integral(act.H))
    E = integral_expectation(act)
    rep.run(f"{act.name} expectation idempotent", E.is_idempotent)
    inv = invariant_subalgebra(act, verify=False)

    def rng():
        img = E.image_echelon()
        if img.rank != len(inv):
            return False, f"rank {img.rank} vs {len(inv)}"
        return all(img.contains(v) for v in inv), "invariant outside range"

    rep.run(f"{act.name} expectation range = invariants", rng)
    return rep, E, inv
