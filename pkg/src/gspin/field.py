"""Local field algebras of G-spin models on finite lattice windows.

Sites are half-integers stored doubled: even numbers are integer sites
(carrying order variables ``d[g]@x``), odd numbers are half-integer sites
(carrying disorder variables ``r[h]@l``).

A *partial monomial* is a pair ``(ds, rs)``: ``ds[p]`` is the group element
of the order variable at the p-th integer site or ``None`` (an unconstrained
site, i.e. the sum over all values), ``rs[q]`` the group element at the q-th
half site (the unit meaning no disorder variable there).  Partial monomials
with no ``None`` are the basis labels; there are ``|G|**len(window)`` of
them.  Products of partial monomials are again partial monomials or zero,
which is what makes the closed-form arithmetic below cheap.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import BasisAlgebra, Element
from .groups import FiniteGroup
from .hopf import HopfAlgebra, ModuleAction, integral_expectation, invariant_subalgebra, quantum_double
from .linalg import axpy


class InvalidWindow(ValueError):
    pass


class WrongWindow(ValueError):
    pass


def _parse_half(x) -> int:
    """Half-integer (number or string like ``"3/2"``, ``"1.5"``) -> doubled int."""
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            num, den = x.split("/")
            x = Fraction(int(num), int(den))
        else:
            x = Fraction(x)
    d = Fraction(x) * 2
    if d.denominator != 1:
        raise InvalidWindow(f"{x} is not a half-integer")
    return int(d)


def site_str(d: int) -> str:
    """Doubled site -> display form (``1``, ``3/2``, ``-1/2``)."""
    return str(d // 2) if d % 2 == 0 else f"{d}/2"


class Window:
    def __init__(self, doubled):
        ds = sorted(set(int(d) for d in doubled))
        if not ds:
            raise InvalidWindow("window must be nonempty")
        self.doubled = tuple(ds)
        self.ints = tuple(d for d in ds if d % 2 == 0)
        self.halves = tuple(d for d in ds if d % 2 != 0)
        self._ipos = {d: p for p, d in enumerate(self.ints)}
        self._hpos = {d: q for q, d in enumerate(self.halves)}
        # number of half sites to the left of each integer site
        self.left_halves = tuple(sum(1 for l in self.halves if l < x) for x in self.ints)

    @classmethod
    def interval(cls, a, b) -> "Window":
        lo, hi = _parse_half(a), _parse_half(b)
        if hi < lo:
            raise InvalidWindow(f"empty window {a}:{b}")
        return cls(range(lo, hi + 1))

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"0.5:2"`` or ``"1/2:2"``."""
        try:
            a, b = text.split(":")
        except ValueError as exc:
            raise InvalidWindow(f"window must look like A:B, got {text!r}") from exc
        return cls.interval(a, b)

    def __len__(self):
        return len(self.doubled)

    def __eq__(self, other):
        return isinstance(other, Window) and other.doubled == self.doubled

    def __hash__(self):
        return hash(self.doubled)

    def __repr__(self):
        return "Window{" + ",".join(site_str(d) for d in self.doubled) + "}"

    def __contains__(self, d):
        return d in self._ipos or d in self._hpos

    def int_pos(self, d: int) -> int:
        try:
            return self._ipos[d]
        except KeyError:
            raise InvalidWindow(f"site {site_str(d)} is not an integer site of {self}") from None

    def half_pos(self, d: int) -> int:
        try:
            return self._hpos[d]
        except KeyError:
            raise InvalidWindow(f"site {site_str(d)} is not a half-integer site of {self}") from None

    def text(self) -> str:
        return f"{site_str(self.doubled[0])}:{site_str(self.doubled[-1])}"


STANDARD_WINDOW = Window((1, 2, 3, 4))  # {1/2, 1, 3/2, 2}


class FieldAlgebra:
    """``F(window)`` with closed-form monomial arithmetic."""

    def __init__(self, G: FiniteGroup, window: Window):
        if not isinstance(window, Window):
            raise InvalidWindow("expected a Window")
        self.G = G
        self.window = window
        n = G.order
        self.n = n
        self.nx = len(window.ints)
        self.nl = len(window.halves)
        t, iv = G.table, G.inv
        self._t, self._iv = t, iv
        u = G.unit
        labels = [(ds, rs) for ds in itertools.product(range(n), repeat=self.nx)
                  for rs in itertools.product(range(n), repeat=self.nl)]
        self._rsize = n ** self.nl
        names = G.names

        def fmt(lab):
            return format_monomial(self, lab)

        unit = {self.encode(ds, (u,) * self.nl): 1 for ds in itertools.product(range(n), repeat=self.nx)}
        scale = Fraction(1, n ** self.nx)

        def state(i):
            ds, rs = labels[i]
            return scale if all(r == u for r in rs) else 0

        self.algebra = BasisAlgebra(labels, self._mul_index, unit, self._star_index, state=state,
                                    name=f"F({G.label},{window.text()})", fmt=fmt, monomial=True)
        self.algebra.field = self
        self.names = names

    # -- encoding
    def encode(self, ds, rs) -> int:
        n = self.n
        i = 0
        for d in ds:
            i = i * n + d
        for r in rs:
            i = i * n + r
        return i

    def decode(self, i: int):
        return self.algebra.labels[i]

    @property
    def dim(self):
        return self.algebra.dim

    # -- partial monomial arithmetic
    def pmul(self, m1, m2):
        """Product of partial monomials; ``None`` when it vanishes."""
        t, iv = self._t, self._iv
        ds1, rs1 = m1
        ds2, rs2 = m2
        u = self.G.unit
        # prefix products of the left factor's disorder values
        pref = [u]
        for a in rs1:
            pref.append(t[pref[-1]][a])
        ds = []
        for p, s in enumerate(ds2):
            g = ds1[p]
            if s is None:
                ds.append(g)
                continue
            pushed = t[pref[self.window.left_halves[p]]][s]
            if g is not None and g != pushed:
                return None
            ds.append(pushed)
        rs = []
        c = u
        for a, b in zip(rs1, rs2):
            rs.append(t[t[t[iv[c]][a]][c]][b])
            c = t[c][b]
        return tuple(ds), tuple(rs)

    def _mul_index(self, i, j):
        labs = self.algebra.labels
        r = self.pmul(labs[i], labs[j])
        return {} if r is None else {self.encode(*r): 1}

    def unit_pm(self):
        return (None,) * self.nx, (self.G.unit,) * self.nl

    def delta_pm(self, site: int, g: int):
        ds = [None] * self.nx
        ds[self.window.int_pos(site)] = g
        return tuple(ds), (self.G.unit,) * self.nl

    def rho_pm(self, site: int, h: int):
        rs = [self.G.unit] * self.nl
        rs[self.window.half_pos(site)] = h
        return (None,) * self.nx, tuple(rs)

    def pm_word(self, word):
        """Multiply a word of ``('d'|'r', doubled_site, g)`` generators."""
        m = self.unit_pm()
        for kind, site, g in word:
            gen = self.delta_pm(site, g) if kind == "d" else self.rho_pm(site, g)
            m = self.pmul(m, gen)
            if m is None:
                return None
        return m

    def star_pm(self, m):
        """``(D R)* = R^* D``, renormalised."""
        ds, rs = m
        iv = self._iv
        word = [("r", self.window.halves[q], iv[rs[q]]) for q in reversed(range(self.nl))]
        word += [("d", self.window.ints[p], ds[p]) for p in range(self.nx) if ds[p] is not None]
        return self.pm_word(word)

    def _star_index(self, i):
        return {self.encode(*self.star_pm(self.algebra.labels[i])): 1}

    def expand(self, m) -> dict:
        """Partial monomial -> sparse vector over total monomials."""
        if m is None:
            return {}
        ds, rs = m
        choices = [range(self.n) if d is None else (d,) for d in ds]
        return {self.encode(full, rs): 1 for full in itertools.product(*choices)}

    # -- generators as elements
    def delta(self, site, g) -> Element:
        """``d[g]@site`` with ``site`` doubled (``2`` is site 1)."""
        return Element(self.algebra, self.expand(self.delta_pm(site, self._g(g))))

    def rho(self, site, h) -> Element:
        return Element(self.algebra, self.expand(self.rho_pm(site, self._g(h))))

    def _g(self, g):
        return self.G.index(g) if isinstance(g, str) else g

    def one(self) -> Element:
        return self.algebra.one()

    def monomial(self, ds, rs) -> Element:
        return Element(self.algebra, {self.encode(tuple(ds), tuple(rs)): 1})

    def generators(self) -> list[dict]:
        """Order and disorder variables at every site: a generating set."""
        out = []
        for x in self.window.ints:
            for g in range(self.n):
                out.append(self.expand(self.delta_pm(x, g)))
        for l in self.window.halves:
            for h in range(self.n):
                out.append(self.expand(self.rho_pm(l, h)))
        return out

    def factor_words(self, i: int):
        """Two factorisations of a basis monomial into generator words.

        The first puts order variables first; the second puts disorder
        variables first, with the order values conjugated back.
        """
        ds, rs = self.algebra.labels[i]
        t, iv = self._t, self._iv
        w = self.window
        first = [("d", x, ds[p]) for p, x in enumerate(w.ints)] + \
                [("r", l, rs[q]) for q, l in enumerate(w.halves)]
        second = [("r", l, rs[q]) for q, l in enumerate(w.halves)]
        for p, x in enumerate(w.ints):
            pref = self.G.unit
            for q in range(w.left_halves[p]):
                pref = t[pref][rs[q]]
            second.append(("d", x, t[iv[pref]][ds[p]]))
        return first, second


# ---------------------------------------------------------------- rewriting oracle


def normalize_word(F: FieldAlgebra, word):
    """Normal form of a generator word by one-step local rewriting.

    Independent of :meth:`FieldAlgebra.pmul`: only the defining relations
    are applied, one adjacent pair at a time, until the word is sorted
    (order variables by site, then disorder variables by site) and merged.
    Returns a partial monomial or ``None`` for zero.
    """
    t, iv, u = F.G.table, F.G.inv, F.G.unit
    w = [tuple(g) for g in word if not (g[0] == "r" and g[2] == u)]

    def key(g):
        return (0 if g[0] == "d" else 1, g[1])

    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            a, b = w[k], w[k + 1]
            if a[0] == b[0] and a[1] == b[1]:
                if a[0] == "d":
                    if a[2] != b[2]:
                        return None
                    w[k:k + 2] = [a]
                else:
                    h = t[a[2]][b[2]]
                    w[k:k + 2] = [] if h == u else [("r", a[1], h)]
                changed = True
                break
            if key(a) <= key(b):
                continue
            # out of order: a must move right past b
            if a[0] == "d" and b[0] == "d":
                w[k:k + 2] = [b, a]
            elif a[0] == "r" and b[0] == "d":
                l, x = a[1], b[1]
                if l < x:
                    w[k:k + 2] = [("d", x, t[a[2]][b[2]]), a]
                else:
                    w[k:k + 2] = [b, a]
            else:
                # two disorder variables with a at the larger site
                h1, h2 = a[2], b[2]
                w[k:k + 2] = [b, ("r", a[1], t[t[iv[h2]][h1]][h2])]
            changed = True
            break
    ds = [None] * F.nx
    rs = [u] * F.nl
    for kind, site, g in w:
        if kind == "d":
            ds[F.window.int_pos(site)] = g
        else:
            rs[F.window.half_pos(site)] = g
    return tuple(ds), tuple(rs)


def field_algebra(G: FiniteGroup, window: Window | None = None) -> FieldAlgebra:
    return FieldAlgebra(G, window or STANDARD_WINDOW)


# ---------------------------------------------------------------- the action gamma


def gamma_generator(F: FieldAlgebra, g: int, h: int, gen):
    """Image of one generator under ``(g, h)``; a partial monomial or ``None``."""
    t, iv, u = F.G.table, F.G.inv, F.G.unit
    kind, site, f = gen
    if kind == "d":
        if g != u:
            return None
        return F.delta_pm(site, t[h][f])
    if g != t[t[h][f]][iv[h]]:
        return None
    return F.rho_pm(site, g)


def gamma_word(F: FieldAlgebra, g: int, h: int, word) -> dict:
    """Act with ``(g, h)`` on a generator word through the iterated coproduct.

    ``Delta(g, h) = sum_t (t, h) (x) (t^-1 g, h)``, so the word's first
    letter sees ``(t, h)`` and the rest sees ``(t^-1 g, h)``.
    """
    t, iv, u = F.G.table, F.G.inv, F.G.unit
    out: dict = {}

    def rec(g, k, acc):
        if k == len(word):
            if g == u:
                axpy(out, 1, F.expand(acc))
            return
        for s in range(F.n):
            img = gamma_generator(F, s, h, word[k])
            if img is None:
                continue
            m = F.pmul(acc, img)
            if m is not None:
                rec(t[iv[s]][g], k + 1, m)

    rec(g, 0, F.unit_pm())
    return out


def gamma_closed(F: FieldAlgebra, g: int, h: int, i: int) -> dict:
    """Closed form: ``(g,h)(D R) = [h^-1 g h = prod t] * (h s_x) (h t_l h^-1)``."""
    t, iv = F.G.table, F.G.inv
    ds, rs = F.algebra.labels[i]
    prod = F.G.unit
    for r in rs:
        prod = t[prod][r]
    if t[t[iv[h]][g]][h] != prod:
        return {}
    nds = tuple(t[h][s] for s in ds)
    nrs = tuple(t[t[h][r]][iv[h]] for r in rs)
    return {F.encode(nds, nrs): 1}


def gamma_action(F: FieldAlgebra, D: HopfAlgebra | None = None, closed_form: bool = True) -> ModuleAction:
    """The action of ``D(G)`` on ``F``.

    With ``closed_form=False`` each monomial is factorised into its
    generator word and acted on through the coproduct.
    """
    D = D or quantum_double(F.G)
    n = F.n

    if closed_form:
        def act(a, i):
            g, h = divmod(a, n)
            return gamma_closed(F, g, h, i)
    else:
        def act(a, i):
            g, h = divmod(a, n)
            word, _ = F.factor_words(i)
            return gamma_word(F, g, h, word)

    return ModuleAction(D, F.algebra, act, name="gamma")


def gamma_order_independence(F: FieldAlgebra, monomials=None):
    """Both factorisations of each monomial normalise to it and give equal images."""
    n = F.n
    for i in (range(F.dim) if monomials is None else monomials):
        w1, w2 = F.factor_words(i)
        lab = F.algebra.labels[i]
        if normalize_word(F, w1) != lab or normalize_word(F, w2) != lab:
            return False, ("factorisation", lab)
        for a in range(n * n):
            g, h = divmod(a, n)
            r1, r2 = gamma_word(F, g, h, w1), gamma_word(F, g, h, w2)
            if r1 != r2 or r1 != gamma_closed(F, g, h, i):
                return False, (F.algebra.labels[i], (g, h))
    return True, None


# ---------------------------------------------------------------- E, observables, trace


class FieldExpectation:
    """``E = h_int(.)`` on ``F`` together with its range (the observable algebra)."""

    def __init__(self, F: FieldAlgebra, gamma: ModuleAction | None = None, verify_invariants: bool = True):
        self.F = F
        self.gamma = gamma or gamma_action(F)
        self.map = integral_expectation(self.gamma)
        self.range_basis = invariant_subalgebra(self.gamma, verify=verify_invariants)

    def __call__(self, x):
        return self.map(x)

    def setup(self):
        from .expectation import ExpectationSetup
        return ExpectationSetup(self.F.algebra, self.map, self.range_basis,
                                state=self.F.algebra.state, name="E", B_generators=self.F.generators())


def expectation_E(G: FiniteGroup, window: Window | None = None, F: FieldAlgebra | None = None,
                  samples: int = 100, seed: int = 0, tol: float = 1e-8):
    """Build ``E`` and run the conditional-expectation battery; returns ``(record, report)``."""
    F = F or field_algebra(G, window)
    rec = FieldExpectation(F)
    rep = rec.setup().verify(samples=samples, seed=seed, tol=tol)
    return rec, rep


def expectation_formula(F: FieldAlgebra, i: int) -> dict:
    """``E(D R) = (1/|G|) [prod t = u] sum_f (f s_x)(f t_l f^-1)``."""
    t, iv, u = F.G.table, F.G.inv, F.G.unit
    ds, rs = F.algebra.labels[i]
    prod = u
    for r in rs:
        prod = t[prod][r]
    if prod != u:
        return {}
    out: dict = {}
    for f in range(F.n):
        k = F.encode(tuple(t[f][s] for s in ds), tuple(t[t[f][r]][iv[f]] for r in rs))
        axpy(out, Fraction(1, F.n), {k: 1})
    return out


def wv_observable(F: FieldAlgebra, y, x) -> Element:
    """``sum_s d[s]@1 d[sy]@2 r[s x^-1 s^-1]@1/2 r[s x s^-1]@3/2`` on the standard window."""
    if F.window != STANDARD_WINDOW:
        raise WrongWindow("w/v observables are defined on the window {1/2, 1, 3/2, 2} only")
    y, x = F._g(y), F._g(x)
    t, iv = F.G.table, F.G.inv
    out: dict = {}
    for s in range(F.n):
        k = F.encode((s, t[s][y]), (t[t[s][iv[x]]][iv[s]], t[t[s][x]][iv[s]]))
        axpy(out, 1, {k: 1})
    return Element(F.algebra, out)


def canonical_trace(F: FieldAlgebra):
    """The normalised trace: ``|G|**-(#integer sites)`` on disorder-free monomials."""
    return F.algebra.state


def check_trace(F: FieldAlgebra, pairs=None):
    """Unital and tracial on the given label pairs (default all)."""
    A = F.algebra
    phi = A.state_vec
    if phi(A.unit_vec) != 1:
        return False, "phi(I) != 1"
    it = itertools.product(range(A.dim), repeat=2) if pairs is None else pairs
    for i, j in it:
        if phi(A.mul_basis(i, j)) != phi(A.mul_basis(j, i)):
            return False, (A.labels[i], A.labels[j])
    return True, None


def random_pairs(n: int, k: int, seed: int):
    rng = random.Random(seed)
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(k)]


# ---------------------------------------------------------------- display


def format_monomial(F: FieldAlgebra, lab) -> str:
    """``d[g]@x ... r[h]@l ...`` for a total or partial monomial label."""
    ds, rs = lab
    names = F.G.names
    parts = [f"d[{names[g]}]@{site_str(x)}" for g, x in zip(ds, F.window.ints) if g is not None]
    parts += [f"r[{names[h]}]@{site_str(l)}" for h, l in zip(rs, F.window.halves)]
    return " ".join(parts) if parts else "I"
