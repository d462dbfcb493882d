"""Finite-dimensional *-algebras presented by a labelled basis.

An algebra is a list of hashable labels plus three callables on label
indices: ``mul(i, j)`` and ``star(i)`` return sparse vectors (``dict``
index -> scalar) and ``state(i)`` optionally returns a scalar.  Products are
cached, so large algebras can be defined lazily by a closed-form rule and
only the products actually used are ever computed.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

import numpy as np

from .linalg import Echelon, axpy, float_rank, psd_check, scale
from .report import Check, Report
from .scalars import conj, format_scalar, parse_scalar


class ParentMismatch(TypeError):
    pass


class NotAState(ValueError):
    pass


class NotSelfAdjoint(ValueError):
    pass


class BasisAlgebra:
    def __init__(self, labels, mul, unit: dict, star, state=None, name: str = "A",
                 fmt=None, monomial: bool = False):
        self.labels = list(labels)
        self.dim = len(self.labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != self.dim:
            raise ValueError("labels must be distinct")
        self._mul = mul
        self._star = star
        self._cache: dict = {}
        self._star_cache: dict = {}
        self.unit_vec = {k: v for k, v in unit.items() if v != 0}
        self.state = state
        self.name = name
        self.fmt = fmt or (lambda lab: str(lab))
        # every basis product is a multiple of one basis element (or zero)
        self.monomial = monomial

    def __repr__(self):
        return f"BasisAlgebra({self.name}, dim={self.dim})"

    def __len__(self):
        return self.dim

    def index(self, label) -> int:
        return self._index[label]

    def has_label(self, label) -> bool:
        return label in self._index

    # -- structure constants
    def mul_basis(self, i: int, j: int) -> dict:
        key = i * self.dim + j
        r = self._cache.get(key)
        if r is None:
            r = self._mul(i, j)
            self._cache[key] = r
        return r

    def star_basis(self, i: int) -> dict:
        r = self._star_cache.get(i)
        if r is None:
            r = self._star(i)
            self._star_cache[i] = r
        return r

    def mul_vec(self, x: dict, y: dict) -> dict:
        u = self.unit_vec
        if len(x) == len(u) and len(u) > 1 and x == u:
            return dict(y)
        if len(y) == len(u) and len(u) > 1 and y == u:
            return dict(x)
        out: dict = {}
        mb = self.mul_basis
        for i, a in x.items():
            for j, b in y.items():
                p = mb(i, j)
                if p:
                    axpy(out, a * b, p)
        return out

    def star_vec(self, x: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            axpy(out, conj(a), self.star_basis(i))
        return out

    def state_vec(self, x: dict):
        if self.state is None:
            raise NotAState(f"{self.name} has no distinguished state")
        s = 0
        for i, a in x.items():
            v = self.state(i)
            if v != 0:
                s = s + a * v
        return s

    # -- elements
    def element(self, coeffs=None) -> "Element":
        if coeffs is None:
            coeffs = {}
        return Element(self, {k: v for k, v in coeffs.items() if v != 0})

    def basis(self, i: int) -> "Element":
        return Element(self, {i: 1})

    def by_label(self, label, coef=1) -> "Element":
        return Element(self, {self._index[label]: coef})

    def one(self) -> "Element":
        return Element(self, dict(self.unit_vec))

    def zero(self) -> "Element":
        return Element(self, {})

    def is_unit_vec(self, x: dict) -> bool:
        return x is self.unit_vec or x == self.unit_vec

    def format_vec(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            lab = self.fmt(self.labels[i])
            parts.append(lab if c == 1 else f"({format_scalar(c)})*{lab}")
        return " + ".join(parts)

    # -- float tables for monomial algebras
    def product_tables(self):
        """``(idx, coef)`` arrays with ``b_i b_j = coef[i,j] * b_idx[i,j]`` (idx -1 for zero)."""
        if not self.monomial:
            raise ValueError("product tables need a monomial algebra")
        n = self.dim
        idx = np.full((n, n), -1, dtype=np.int64)
        coef = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                p = self.mul_basis(i, j)
                if p:
                    (k, c), = p.items()
                    idx[i, j] = k
                    coef[i, j] = complex(c)
        return idx, coef


class Element:
    """Sparse exact element of a :class:`BasisAlgebra`."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: BasisAlgebra, coeffs: dict):
        self.parent = parent
        self.coeffs = coeffs

    def _same(self, other):
        if not isinstance(other, Element):
            return False
        if other.parent is not self.parent:
            raise ParentMismatch(f"{self.parent.name} vs {other.parent.name}")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.coeffs)
        axpy(out, 1, other.coeffs)
        return Element(self.parent, out)

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.coeffs)
        axpy(out, -1, other.coeffs)
        return Element(self.parent, out)

    def __neg__(self):
        return Element(self.parent, scale(-1, self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Element):
            self._same(other)
            return Element(self.parent, self.parent.mul_vec(self.coeffs, other.coeffs))
        return Element(self.parent, scale(other, self.coeffs))

    def __rmul__(self, other):
        return Element(self.parent, scale(other, self.coeffs))

    def __truediv__(self, other):
        from fractions import Fraction
        from .scalars import inv
        if isinstance(other, int):
            other = Fraction(other)
        return Element(self.parent, scale(inv(other), self.coeffs))

    def star(self) -> "Element":
        return Element(self.parent, self.parent.star_vec(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, Element):
            return other.parent is self.parent and self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((id(self.parent), frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, label):
        return self.coeffs.get(self.parent.index(label), 0)

    def terms(self):
        """``(label, coef)`` pairs in basis order."""
        return [(self.parent.labels[i], self.coeffs[i]) for i in sorted(self.coeffs)]

    def __repr__(self):
        return self.parent.format_vec(self.coeffs)


@dataclass
class AlgebraMorphism:
    """Linear map given on basis labels: ``images[i]`` is a sparse target vector."""

    source: BasisAlgebra
    target: BasisAlgebra
    images: dict

    def __call__(self, x):
        vec = x.coeffs if isinstance(x, Element) else x
        out: dict = {}
        for i, a in vec.items():
            axpy(out, a, self.images.get(i, {}))
        return Element(self.target, out) if isinstance(x, Element) else out

    def check_multiplicative(self, pairs=None) -> Check:
        src = self.source
        pairs = pairs if pairs is not None else itertools.product(range(src.dim), repeat=2)
        for i, j in pairs:
            lhs = self(src.mul_basis(i, j))
            rhs = self.target.mul_vec(self.images.get(i, {}), self.images.get(j, {}))
            if lhs != rhs:
                return Check("multiplicative", False, (src.labels[i], src.labels[j]))
        return Check("multiplicative", True)

    def check_star(self) -> Check:
        src, tgt = self.source, self.target
        for i in range(src.dim):
            if self(src.star_basis(i)) != tgt.star_vec(self.images.get(i, {})):
                return Check("star-preserving", False, src.labels[i])
        return Check("star-preserving", True)

    def check_unital(self) -> Check:
        ok = self(self.source.unit_vec) == self.target.unit_vec
        return Check("unital", ok, None if ok else "unit not preserved")

    def rank(self) -> int:
        e = Echelon()
        for i in range(self.source.dim):
            e.add(self.images.get(i, {}))
        return e.rank

    def check_bijective(self) -> Check:
        r = self.rank()
        ok = r == self.source.dim == self.target.dim
        return Check("bijective", ok, None if ok else f"rank {r}, dims {self.source.dim}->{self.target.dim}")


# ---------------------------------------------------------------- axioms


def _triples(n, limit, samples, rng):
    if n ** 3 <= limit:
        return itertools.product(range(n), repeat=3), "exact"
    return ([(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples)], "sampled")


def verify_algebra_axioms(A: BasisAlgebra, exhaustive_limit: int = 10 ** 6,
                          samples: int = 1000, seed: int = 0) -> Report:
    """Associativity, unit and star axioms with the first counterexample on failure.

    Triple sweeps are exhaustive up to ``exhaustive_limit`` triples and
    otherwise use ``samples`` seeded random triples.
    """
    rng = random.Random(seed)
    rep = Report()
    n = A.dim
    mb, mv = A.mul_basis, A.mul_vec

    triples, mode = _triples(n, exhaustive_limit, samples, rng)

    def assoc():
        for i, j, k in triples:
            if mv(mb(i, j), {k: 1}) != mv({i: 1}, mb(j, k)):
                return False, tuple(A.labels[t] for t in (i, j, k))
        return True, None

    rep.run("associativity", assoc, mode=mode)

    def unit():
        u = A.unit_vec
        for i in range(n):
            if mv(u, {i: 1}) != {i: 1} or mv({i: 1}, u) != {i: 1}:
                return False, A.labels[i]
        return True, None

    rep.run("unit", unit)

    def involutive():
        for i in range(n):
            if A.star_vec(A.star_basis(i)) != {i: 1}:
                return False, A.labels[i]
        return True, None

    rep.run("star involutive", involutive)

    if n * n <= exhaustive_limit:
        pairs, pmode = itertools.product(range(n), repeat=2), "exact"
    else:
        pairs, pmode = [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)], "sampled"

    def antimult():
        for i, j in pairs:
            if A.star_vec(mb(i, j)) != mv(A.star_basis(j), A.star_basis(i)):
                return False, (A.labels[i], A.labels[j])
        return True, None

    rep.run("star anti-multiplicative", antimult, mode=pmode)

    def unit_star():
        ok = A.star_vec(A.unit_vec) == A.unit_vec
        return ok, "unit not self-adjoint"

    rep.run("unit self-adjoint", unit_star)
    return rep


# ---------------------------------------------------------------- spans


def span_closure(A: BasisAlgebra, gens, unital: bool = True, star: bool = True) -> list[dict]:
    """Basis of the smallest (unital, *-closed) subalgebra containing ``gens``.

    Breadth-first: every new basis vector is multiplied on the right by each
    generator, so all words in the generators are reached.
    """
    gvecs = [g.coeffs if isinstance(g, Element) else g for g in gens]
    if star:
        gvecs = gvecs + [A.star_vec(g) for g in gvecs]
    ech = Echelon()
    basis: list[dict] = []
    frontier = []

    def push(v):
        if ech.add(v)[0] is not None:
            basis.append(v)
            frontier.append(v)

    if unital:
        push(dict(A.unit_vec))
    for g in gvecs:
        push(g)
    while frontier:
        x = frontier.pop()
        for g in gvecs:
            push(A.mul_vec(x, g))
    return basis


def span_rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v.coeffs if isinstance(v, Element) else v)
    return e.rank


def same_span(xs, ys) -> bool:
    ex = Echelon()
    for v in xs:
        ex.add(v.coeffs if isinstance(v, Element) else v)
    r = ex.rank
    for v in ys:
        if not ex.contains(v.coeffs if isinstance(v, Element) else v):
            return False
    return span_rank(ys) == r


def label_generators(A: BasisAlgebra, order=None) -> list[int]:
    """Greedy set of basis labels whose products reach every label.

    Only meaningful for monomial algebras, where each product of labels is
    a nonzero multiple of a single label or zero.
    """
    if not A.monomial:
        raise ValueError("label generators need a monomial algebra")
    n = A.dim
    reached = [False] * n
    gens: list[int] = []
    reached_list: list[int] = []

    def close(start):
        queue = list(start)
        while queue:
            x = queue.pop()
            for g in gens:
                for p in (A.mul_basis(x, g), A.mul_basis(g, x)):
                    for k in p:
                        if not reached[k]:
                            reached[k] = True
                            reached_list.append(k)
                            queue.append(k)

    for cand in (order if order is not None else range(n)):
        if reached[cand]:
            continue
        gens.append(cand)
        new = []
        if not reached[cand]:
            reached[cand] = True
            reached_list.append(cand)
            new.append(cand)
        # products of the new generator with everything reached so far
        for x in list(reached_list):
            for p in (A.mul_basis(x, cand), A.mul_basis(cand, x)):
                for k in p:
                    if not reached[k]:
                        reached[k] = True
                        reached_list.append(k)
                        new.append(k)
        close(new)
    return gens


def center_basis(A: BasisAlgebra, generators=None) -> list[dict]:
    """Exact basis of the center, as the commutant of a generating set.

    With no generators given, monomial algebras use :func:`label_generators`
    and other algebras use every basis label.
    """
    n = A.dim
    if generators is None:
        generators = label_generators(A) if A.monomial else list(range(n))
    gvecs = [({g: 1} if isinstance(g, int) else (g.coeffs if isinstance(g, Element) else g)) for g in generators]
    # commutant of the generators seen so far, shrunk one generator at a time
    K: list[dict] = [{c: 1} for c in range(n)]
    for g in gvecs:
        ech = Echelon()
        rows: dict = {}
        for c, v in enumerate(K):
            comm = A.mul_vec(v, g)
            axpy(comm, -1, A.mul_vec(g, v))
            for k, w in comm.items():
                rows.setdefault(k, {})[c] = w
        if not rows:
            continue
        for r in rows.values():
            ech.add(r)
        newK = []
        for coef in ech.kernel(len(K)):
            z: dict = {}
            for c, a in coef.items():
                axpy(z, a, K[c])
            newK.append(z)
        K = newK
    return K


# ---------------------------------------------------------------- GNS / positivity


@dataclass
class GNS:
    matrices: list
    gram: np.ndarray
    faithful: bool

    def rep(self, x: dict) -> np.ndarray:
        n = self.gram.shape[0]
        out = np.zeros((n, n), dtype=complex)
        for i, a in x.items():
            out += complex(a) * self.matrices[i]
        return out

    def adjoint(self, m: np.ndarray) -> np.ndarray:
        return np.linalg.solve(self.gram, m.conj().T @ self.gram)


def gns_representation(A: BasisAlgebra, state=None, tol: float = 1e-9) -> GNS:
    """Left-regular matrices and Gram matrix ``gram[i][j] = state(b_i^* b_j)``."""
    state = state or A.state
    if state is None:
        raise NotAState("no state given")
    n = A.dim

    def st(vec):
        s = 0
        for i, a in vec.items():
            v = state(i)
            if v != 0:
                s = s + a * v
        return s

    if abs(complex(st(A.unit_vec)) - 1) > tol:
        raise NotAState("state is not normalised on the unit")
    gram = np.zeros((n, n), dtype=complex)
    for i in range(n):
        si = A.star_basis(i)
        for j in range(n):
            gram[i, j] = complex(st(A.mul_vec(si, {j: 1})))
    if not psd_check(gram, tol=max(tol, 1e-8)):
        raise NotAState("state is not positive")
    mats = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k, v in A.mul_basis(i, j).items():
                m[k, j] += complex(v)
        mats.append(m)
    faithful = float_rank(gram, tol) == n
    return GNS(mats, gram, faithful)


def positivity_matrix(A: BasisAlgebra, x: dict, state=None) -> np.ndarray:
    """``H[i][j] = state(b_i^* x b_j)``: PSD iff ``x`` is positive (faithful state)."""
    state = state or A.state
    n = A.dim
    h = np.zeros((n, n), dtype=complex)
    for j in range(n):
        xb = A.mul_vec(x, {j: 1})
        for i in range(n):
            v = A.mul_vec(A.star_basis(i), xb)
            s = 0
            for k, a in v.items():
                w = state(k)
                if w != 0:
                    s = s + a * w
            h[i, j] = complex(s)
    return h


def is_positive(A: BasisAlgebra, x, state=None, tol: float = 1e-8) -> bool:
    vec = x.coeffs if isinstance(x, Element) else x
    if A.star_vec(vec) != vec:
        raise NotSelfAdjoint("positivity needs a self-adjoint element")
    return psd_check(positivity_matrix(A, vec, state), tol)


class FloatRep:
    """Vectorised float arithmetic for a monomial algebra with a faithful state.

    Used for the positivity oracle on algebras too large for the dense
    per-element :func:`positivity_matrix` loop.
    """

    def __init__(self, A: BasisAlgebra, state=None):
        self.A = A
        self.idx, self.coef = A.product_tables()
        n = A.dim
        state = state or A.state
        self.phi = np.array([complex(state(i)) for i in range(n)])
        self.star_idx = np.zeros(n, dtype=np.int64)
        self.star_coef = np.zeros(n, dtype=complex)
        for i in range(n):
            (k, c), = A.star_basis(i).items()
            self.star_idx[i] = k
            self.star_coef[i] = complex(c)
        mask = self.idx >= 0
        self._i, self._j = np.nonzero(mask)
        self._k = self.idx[mask]
        self._c = self.coef[mask]
        # gram[i, j] = phi(b_i^* b_j)
        sx = self.star_idx
        sc = self.star_coef
        kk = self.idx[sx][:, :]
        cc = self.coef[sx] * sc[:, None]
        phik = np.where(kk >= 0, self.phi[np.maximum(kk, 0)], 0)
        self.gram = cc * phik

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        w = x[self._i] * y[self._j] * self._c
        return np.bincount(self._k, weights=w.real, minlength=self.A.dim) + \
            1j * np.bincount(self._k, weights=w.imag, minlength=self.A.dim)

    def star(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        np.add.at(out, self.star_idx, np.conj(x) * self.star_coef)
        return out

    def left(self, x: np.ndarray) -> np.ndarray:
        n = self.A.dim
        m = np.zeros((n, n), dtype=complex)
        np.add.at(m, (self._k, self._j), x[self._i] * self._c)
        return m

    def positivity_matrix(self, x: np.ndarray) -> np.ndarray:
        return self.gram @ self.left(x)

    def is_positive(self, x: np.ndarray, tol: float = 1e-8) -> bool:
        h = self.positivity_matrix(x)
        return psd_check((h + h.conj().T) / 2, tol)


# ---------------------------------------------------------------- JSON dump


def _label_to_json(lab):
    if isinstance(lab, tuple):
        return [_label_to_json(x) for x in lab]
    return lab


def _label_from_json(lab):
    if isinstance(lab, list):
        return tuple(_label_from_json(x) for x in lab)
    return lab


def dump_algebra(A: BasisAlgebra) -> str:
    """JSON text with labels, nonzero structure constants ``[i, j, k, scalar]``,
    the star table and the unit vector.  Deterministic for a fixed algebra."""
    n = A.dim
    mul = []
    for i in range(n):
        for j in range(n):
            p = A.mul_basis(i, j)
            for k in sorted(p):
                mul.append([i, j, k, format_scalar(p[k])])
    star = [[[k, format_scalar(v)] for k, v in sorted(A.star_basis(i).items())] for i in range(n)]
    doc = {
        "name": A.name,
        "labels": [_label_to_json(x) for x in A.labels],
        "mul": mul,
        "star": star,
        "unit": [[k, format_scalar(v)] for k, v in sorted(A.unit_vec.items())],
        "monomial": A.monomial,
    }
    if A.state is not None:
        doc["state"] = [[i, format_scalar(A.state(i))] for i in range(n) if A.state(i) != 0]
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)


def load_algebra(text: str) -> BasisAlgebra:
    doc = json.loads(text)
    labels = [_label_from_json(x) for x in doc["labels"]]
    table: dict = {}
    for i, j, k, c in doc["mul"]:
        table.setdefault((i, j), {})[k] = parse_scalar(c)
    star = [{k: parse_scalar(c) for k, c in row} for row in doc["star"]]
    unit = {k: parse_scalar(c) for k, c in doc["unit"]}
    state = None
    if "state" in doc:
        sv = {i: parse_scalar(c) for i, c in doc["state"]}
        state = lambda i: sv.get(i, 0)  # noqa: E731
    return BasisAlgebra(labels, lambda i, j: dict(table.get((i, j), {})), unit,
                        lambda i: dict(star[i]), state=state, name=doc["name"],
                        monomial=doc.get("monomial", False))


# ---------------------------------------------------------------- small presets


def matrix_algebra(n: int) -> BasisAlgebra:
    """Full matrix algebra ``M_n`` on matrix units ``(i, j)`` with the normalised trace."""
    labels = [(i, j) for i in range(n) for j in range(n)]

    def mul(a, b):
        (i, j), (k, l) = labels[a], labels[b]
        return {i * n + l: 1} if j == k else {}

    from fractions import Fraction
    return BasisAlgebra(labels, mul, {i * n + i: 1 for i in range(n)},
                        lambda a: {labels[a][1] * n + labels[a][0]: 1},
                        state=lambda a: Fraction(1, n) if labels[a][0] == labels[a][1] else 0,
                        name=f"M{n}", fmt=lambda lab: f"E{lab[0]}{lab[1]}", monomial=True)


def function_algebra(G) -> BasisAlgebra:
    """Commutative ``C(G)`` on point indicators with the uniform state."""
    from fractions import Fraction
    n = G.order
    return BasisAlgebra(list(G.names), lambda i, j: {i: 1} if i == j else {},
                        {i: 1 for i in range(n)}, lambda i: {i: 1},
                        state=lambda i: Fraction(1, n), name=f"C({G.label})",
                        fmt=lambda s: f"d[{s}]", monomial=True)
