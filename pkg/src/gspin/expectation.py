"""Conditional expectations ``Gamma: B -> A`` and their verification battery."""

from __future__ import annotations

import itertools
import random

import numpy as np

from .algebra import BasisAlgebra, FloatRep
from .hopf import LinearMap
from .linalg import Echelon, axpy
from .report import Check, Report


class SetupInvalid(ValueError):
    pass


class ExpectationSetup:
    """``B``, a basis of the subalgebra ``A`` and the map ``Gamma``.

    ``A_generators`` (vectors in ``B``) generate ``A`` as an algebra and
    allow the bimodule law to be proved on generators when the exhaustive
    sweep over ``A``-basis pairs is too large.  ``pullback`` maps a float
    vector in the range to a float vector of ``range_algebra``, where
    positivity is then tested.
    """

    def __init__(self, B: BasisAlgebra, gamma: LinearMap, A_basis, state=None, name: str = "Gamma",
                 A_generators=None, B_generators=None, range_algebra=None, pullback=None):
        self.B = B
        self.gamma = gamma
        self.A_basis = [dict(v) for v in A_basis]
        self.state = state or B.state
        self.name = name
        self.A_generators = A_generators
        self.B_generators = B_generators
        self.range_algebra = range_algebra
        self.pullback = pullback
        self._A_ech = None

    def __call__(self, x):
        return self.gamma(x)

    @property
    def A_echelon(self) -> Echelon:
        if self._A_ech is None:
            e = Echelon()
            for v in self.A_basis:
                e.add(v)
            self._A_ech = e
        return self._A_ech

    def in_A(self, vec: dict) -> bool:
        return self.A_echelon.contains(vec)

    def inner(self, x: dict, y: dict) -> dict:
        """The ``A``-valued inner product ``Gamma(x^* y)``."""
        B = self.B
        return self.gamma(B.mul_vec(B.star_vec(x), y))

    def verify(self, samples: int = 100, seed: int = 0, tol: float = 1e-8,
               exhaustive_limit: int = 200_000, positivity: bool = True,
               faithful_limit: int = 1000, positivity_samples: int | None = None) -> Report:
        """The conditional-expectation battery.

        The bimodule law is swept over all ``(a, x, b)`` while
        ``dim(A)^2 dim(B)`` stays under ``exhaustive_limit``, then over
        ``A_generators`` (an exact proof) or, failing those, ``samples``
        seeded triples.  Above ``faithful_limit`` faithfulness is decided
        through invariance of the state when that holds, else skipped.
        """
        B, G = self.B, self.gamma
        n = B.dim
        rep = Report()

        rep.run(f"{self.name} unital", lambda: (G(B.unit_vec) == B.unit_vec, "Gamma(1) != 1"))
        rep.run(f"{self.name} idempotent", lambda: G.is_idempotent())

        def range_is_A():
            img = G.image_echelon()
            for v in self.A_basis:
                if G(v) != v:
                    return False, "Gamma does not fix A"
            if img.rank != len(self.A_basis):
                return False, f"range rank {img.rank} vs dim A {len(self.A_basis)}"
            for v in self.A_basis:
                if not img.contains(v):
                    return False, "A not inside range"
            return True, None

        rep.run(f"{self.name} range = A", range_is_A)

        A = self.A_basis
        m = len(A)
        if m * m * n <= exhaustive_limit:
            triples, mode = None, "exact"
        elif self.A_generators is not None:
            triples, mode = None, "generators"
        else:
            rng = random.Random(seed)
            triples = [(rng.randrange(m), rng.randrange(n), rng.randrange(m)) for _ in range(samples)]
            mode = "sampled"

        def bimod():
            if mode == "generators":
                for ig, a in enumerate(self.A_generators):
                    for x in range(n):
                        gx = G.column(x)
                        if G(B.mul_vec(a, {x: 1})) != B.mul_vec(a, gx):
                            return False, ("left", ig, B.labels[x])
                        if G(B.mul_vec({x: 1}, a)) != B.mul_vec(gx, a):
                            return False, ("right", ig, B.labels[x])
                return True, None
            it = triples if triples is not None else itertools.product(range(m), range(n), range(m))
            for ia, x, ib in it:
                a, b = A[ia], A[ib]
                lhs = G(B.mul_vec(B.mul_vec(a, {x: 1}), b))
                if lhs != B.mul_vec(B.mul_vec(a, G.column(x)), b):
                    return False, (ia, B.labels[x], ib)
            return True, None

        rep.run(f"{self.name} A-bimodular", bimod, mode=mode)

        if n <= faithful_limit:
            rep.run(f"{self.name} faithful", self.check_faithful)
        elif self.state_invariant():
            rep.run(f"{self.name} faithful", self.check_state_faithful, mode="invariant state")
        else:
            rep.add(Check(f"{self.name} faithful", True, f"skipped: dim {n} above exact Gram limit",
                          skipped=True))
        if positivity:
            k = samples if positivity_samples is None else positivity_samples
            rep.run(f"{self.name} positive", lambda: self.check_positive(k, seed, tol), mode="float")
        return rep

    def gram_rows(self):
        """Exact ``state(Gamma(b_i^* b_j))`` rows."""
        B = self.B
        rows = []
        for i in range(B.dim):
            si = B.star_basis(i)
            row = {}
            for j in range(B.dim):
                p = B.mul_vec(si, {j: 1})
                if p:
                    v = B.state_vec(self.gamma(p)) if self.state is B.state else _apply_state(self.state, self.gamma(p))
                    if v != 0:
                        row[j] = v
            rows.append(row)
        return rows

    def check_faithful(self):
        """Nondegeneracy of the exact Gram of ``state o Gamma``.

        The Gram is positive semidefinite, so full rank means
        ``Gamma(x^* x) = 0`` forces ``x = 0``.
        """
        e = Echelon()
        for r in self.gram_rows():
            e.add(r)
        return e.rank == self.B.dim, f"Gram rank {e.rank} of {self.B.dim}"

    def state_invariant(self) -> bool:
        """``state o Gamma = state`` on every basis element."""
        B = self.B
        return all(_apply_state(self.state, self.gamma.column(i)) == self.state(i) for i in range(B.dim))

    def check_state_faithful(self):
        """Faithfulness of the state itself; with ``state o Gamma = state``
        the Gram of ``state o Gamma`` is the state's own Gram."""
        B = self.B
        e = Echelon()
        for i in range(B.dim):
            si = B.star_basis(i)
            row = {}
            for j in range(B.dim):
                v = _apply_state(self.state, B.mul_vec(si, {j: 1}))
                if v != 0:
                    row[j] = v
            e.add(row)
        return e.rank == B.dim, f"state Gram rank {e.rank} of {B.dim}"

    def float_matrix(self) -> np.ndarray:
        n = self.B.dim
        m = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for i, v in self.gamma.column(j).items():
                m[i, j] = complex(v)
        return m

    def check_positive(self, samples: int, seed: int, tol: float):
        """``Gamma(y^* y)`` is positive for seeded random ``y`` (float oracle)."""
        B = self.B
        rep_B = FloatRep(B, self.state)
        gm = self.float_matrix()
        if self.range_algebra is not None:
            rep_R = FloatRep(self.range_algebra)
        rng = np.random.default_rng(seed)
        for s in range(samples):
            y = rng.standard_normal(B.dim) + 1j * rng.standard_normal(B.dim)
            x = gm @ rep_B.mul(rep_B.star(y), y)
            if self.range_algebra is not None:
                ok = rep_R.is_positive(self.pullback(x), tol)
            else:
                ok = rep_B.is_positive(x, tol)
            if not ok:
                return False, f"sample {s}"
        return True, None


def _apply_state(state, vec):
    s = 0
    for i, a in vec.items():
        v = state(i)
        if v != 0:
            s = s + a * v
    return s


def identity_expectation(B: BasisAlgebra) -> ExpectationSetup:
    return ExpectationSetup(B, LinearMap(B.dim, lambda i: {i: 1}), [{i: 1} for i in range(B.dim)],
                            name="id")


def compose_maps(f: LinearMap, g: LinearMap) -> LinearMap:
    """``f o g``."""
    def col(i):
        out: dict = {}
        for k, a in g.column(i).items():
            axpy(out, a, f.column(k))
        return out
    return LinearMap(g.dim, col)
