"""Sparse exact linear algebra plus a small float backend.

Vectors are plain ``dict`` objects mapping an index to an exact scalar
(``int``, ``Fraction`` or :class:`~gspin.scalars.Scalar`); absent keys are
zero and exact zeros are never stored.  Elimination pivots on the first
nonzero column, so no numerical pivoting heuristics are involved.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import inv as _inv


class DimensionMismatch(ValueError):
    pass


class NotHermitian(ValueError):
    pass


def clean(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if v != 0}


def axpy(y: dict, a, x: dict) -> None:
    """``y += a*x`` in place, dropping cancellations."""
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if w == 0:
            y.pop(k, None)
        else:
            y[k] = w


def scale(a, x: dict) -> dict:
    if a == 0:
        return {}
    return {k: a * v for k, v in x.items()}


def add(x: dict, y: dict) -> dict:
    out = dict(x)
    axpy(out, 1, y)
    return out


def sub(x: dict, y: dict) -> dict:
    out = dict(x)
    axpy(out, -1, y)
    return out


class SparseMat:
    """Row-major sparse matrix with fixed shape."""

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows, self.ncols = nrows, ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise DimensionMismatch(f"{len(rows)} rows given for a {nrows}-row matrix")
        self.rows = [clean(dict(r)) for r in rows]
        for r in self.rows:
            for k in r:
                if not 0 <= k < ncols:
                    raise DimensionMismatch(f"column {k} outside 0..{ncols - 1}")

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, [{j: v for j, v in enumerate(r) if v != 0} for r in data])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    def transpose(self) -> "SparseMat":
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return SparseMat(self.ncols, self.nrows, cols)

    def __matmul__(self, vec: dict) -> dict:
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, v in r.items():
                w = vec.get(j)
                if w is not None:
                    s = s + v * w
            if s != 0:
                out[i] = s
        return out

    def to_dense(self, dtype=complex) -> np.ndarray:
        a = np.zeros((self.nrows, self.ncols), dtype=dtype)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                a[i, j] = complex(v) if dtype is complex else v
        return a


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Each stored row has its pivot (its smallest column) normalised to 1 and
    zeros in every other pivot column, so reducing a vector is a single
    pass.  Rows may carry an *augmented* sparse vector that undergoes the
    same row operations; this is how a linear map given on a spanning set is
    pushed onto the span (see :meth:`add` and :meth:`image`).
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot column -> [row, aug]
        self._cols: dict = {}  # non-pivot column -> set of pivots whose row uses it

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict, aug: dict | None = None):
        """Return ``(rest, rest_aug, coords)`` with ``vec = sum(coords[c]*row_c) + rest``."""
        pivots = self.pivots
        coords = {c: f for c, f in vec.items() if c in pivots}
        rest = dict(vec)
        a = dict(aug) if aug is not None else None
        for c, f in coords.items():
            row, raug = pivots[c]
            axpy(rest, -f, row)
            if a is not None and raug:
                axpy(a, -f, raug)
        return rest, a, coords

    def _track(self, pid, row, old_keys):
        cols = self._cols
        new_keys = row.keys()
        for k in old_keys - new_keys:
            s = cols.get(k)
            if s is not None:
                s.discard(pid)
        for k in new_keys - old_keys:
            if k != pid:
                cols.setdefault(k, set()).add(pid)

    def add(self, vec: dict, aug: dict | None = None):
        """Insert ``vec``.  Returns ``(new_pivot_or_None, leftover_aug)``.

        When ``vec`` is already in the span, the leftover augmented vector
        is the inconsistency between its tag and the tags already stored; a
        nonzero leftover means the augmented map is not well defined.
        """
        rest, a, _ = self.reduce(vec, aug)
        if not rest:
            return None, (a or {})
        c = min(rest)
        f = _inv(rest[c])
        row = {k: w * f for k, w in rest.items()}
        row[c] = 1
        raug = {k: w * f for k, w in a.items()} if a else {}
        # clear column c from the existing rows
        users = self._cols.pop(c, set())
        for pid in users:
            prow, paug = self.pivots[pid]
            g = prow[c]
            old = set(prow)
            axpy(prow, -g, row)
            if raug:
                axpy(paug, -g, raug)
            self._track(pid, prow, old)
        self.pivots[c] = [row, raug]
        self._track(c, row, {c})
        return c, {}

    def contains(self, vec: dict) -> bool:
        rest, _, _ = self.reduce(vec)
        return not rest

    def coordinates(self, vec: dict) -> dict | None:
        """Coordinates of ``vec`` in terms of stored rows (keyed by pivot), or None."""
        rest, _, coords = self.reduce(vec)
        return None if rest else coords

    def image(self, vec: dict, check: bool = True):
        """Push ``vec`` through the augmented map; ``None`` if not in the span."""
        pivots = self.pivots
        if check and not self.contains(vec):
            return None
        out = {}
        for c, f in vec.items():
            entry = pivots.get(c)
            if entry is not None and entry[1]:
                axpy(out, f, entry[1])
        return out

    def rows(self):
        return [self.pivots[c][0] for c in sorted(self.pivots)]

    def free_columns(self, ncols: int):
        return [j for j in range(ncols) if j not in self.pivots]

    def kernel(self, ncols: int) -> list[dict]:
        """Basis of ``{x : row.x = 0 for every stored row}``."""
        out = []
        for f in self.free_columns(ncols):
            x = {f: 1}
            for pid in self._cols.get(f, ()):
                x[pid] = -self.pivots[pid][0][f]
            out.append(x)
        return out


def exact_rank(m) -> int:
    rows = m.rows if isinstance(m, SparseMat) else list(m)
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def row_space(vectors) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def solve_linear(m: SparseMat, rhs: dict):
    """Return some ``x`` with ``m x = rhs`` (free variables zero), or ``None``."""
    if any(not 0 <= k < m.nrows for k in rhs):
        raise DimensionMismatch("rhs length does not match matrix rows")
    # the right-hand side rides along as augmented data on key 0
    e = Echelon()
    for i, r in enumerate(m.rows):
        b = rhs.get(i, 0)
        _, left = e.add(r, {0: b} if b != 0 else {})
        if left:
            return None
    return {c: aug[0] for c, (row, aug) in e.pivots.items() if aug.get(0, 0) != 0}


def nullspace(rows, ncols: int) -> list[dict]:
    """Basis of ``{x : r.x = 0 for all r}`` as sparse vectors."""
    return row_space(rows).kernel(ncols)


def rank_mod_p(rows, p: int = 2_147_483_647) -> int:
    """Rank of integer/rational rows reduced modulo the prime ``p``.

    This never exceeds the rank over Q, so it certifies lower bounds
    cheaply for systems too large for Fraction elimination.
    """
    piv: dict = {}
    rank = 0
    for r in rows:
        v = {}
        for k, x in r.items():
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ValueError("denominator divisible by p")
                x = x.numerator * pow(x.denominator, -1, p)
            elif not isinstance(x, int):
                raise TypeError("rank_mod_p needs rational entries")
            x %= p
            if x:
                v[k] = x
        while v:
            c = min(v)
            row = piv.get(c)
            if row is None:
                f = pow(v[c], -1, p)
                piv[c] = {k: (w * f) % p for k, w in v.items()}
                rank += 1
                break
            f = v[c]
            for k, w in row.items():
                t = (v.get(k, 0) - f * w) % p
                if t:
                    v[k] = t
                else:
                    v.pop(k, None)
    return rank


# ---------------------------------------------------------------- floats


def psd_check(h, tol: float = 1e-8) -> bool:
    """True iff the Hermitian matrix ``h`` has all eigenvalues ``>= -tol``."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian("matrix must be square")
    if h.size and np.max(np.abs(h - h.conj().T)) > max(tol, 1e-12) * max(1.0, np.max(np.abs(h))):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    if h.size == 0:
        return True
    w = np.linalg.eigvalsh((h + h.conj().T) / 2)
    return bool(w.min() >= -tol)


def float_rank(a, tol: float = 1e-8) -> int:
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int((s > tol * max(1.0, s[0])).sum())
