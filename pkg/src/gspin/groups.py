"""Finite groups as validated Cayley tables.

Elements are the integers ``0..n-1``; ``names`` are for display and parsing
only.  Presets use a fixed element ordering so that test vectors stay stable:

* ``cyclic(n)``: powers of the generator, ``u, a, a^2, ...``
* ``dihedral(n)``: ``r^k s^e`` ordered by ``e`` then ``k`` (order ``2n``)
* ``symmetric(n)``: permutations in lexicographic one-line order, composed as
  ``(p*q)(i) = p(q(i))``
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path


class GroupError(ValueError):
    pass


class InvalidTable(GroupError):
    pass


class BadSpec(GroupError):
    pass


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple | None = None


@dataclass
class GroupReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> AxiomCheck | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def __str__(self):
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else f"FAIL {c.witness}"
            lines.append(f"{c.name:15s} {status}")
        return "\n".join(lines)


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i][j]`` is the index of ``i*j``.  The unit is found from the table
    (the element whose row is the identity), not assumed to be index 0.
    Construction validates all group axioms and raises :class:`InvalidTable`
    on failure.
    """

    def __init__(self, table, names=None, label: str = "G", validate: bool = True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.order = len(self.table)
        if self.order == 0:
            raise BadSpec("group must have at least one element")
        if names is None:
            names = [str(i) for i in range(self.order)]
        self.names = tuple(str(s) for s in names)
        self.label = label
        if validate:
            report = validate_group(self)
            if not report.ok:
                bad = report.first_failure()
                raise InvalidTable(f"{bad.name} fails at {bad.witness}")
        self.unit = _find_unit(self.table)
        n = self.order
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == self.unit:
                    inv[i] = j
                    break
        self.inv = tuple(inv)
        self._index = {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"

    def mul(self, *xs: int) -> int:
        r = self.unit
        for x in xs:
            r = self.table[r][x]
        return r

    def conj(self, h: int, g: int) -> int:
        """``h g h^-1``."""
        return self.table[self.table[h][g]][self.inv[h]]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.unit:
            x = self.table[x][g]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.order) for j in range(i))

    def index(self, name: str) -> int:
        """Resolve an element name; ``u`` always names the unit."""
        if name in self._index:
            return self._index[name]
        if name == "u":
            return self.unit
        raise KeyError(name)

    def name(self, g: int) -> str:
        return self.names[g]

    def dumps(self) -> str:
        lines = [str(self.order), " ".join(self.names)]
        lines += [" ".join(str(v) for v in row) for row in self.table]
        return "\n".join(lines) + "\n"


def _find_unit(table) -> int | None:
    n = len(table)
    ident = tuple(range(n))
    for e in range(n):
        if tuple(table[e]) == ident and tuple(table[j][e] for j in range(n)) == ident:
            return e
    return None


def validate_group(g: FiniteGroup) -> GroupReport:
    """Check closure, unit, inverses and associativity; never raises."""
    t, n = g.table, g.order
    report = GroupReport()

    closure_witness = None
    for i, row in enumerate(t):
        if len(row) != n:
            closure_witness = (i, "row length", len(row))
            break
        for j, v in enumerate(row):
            if not 0 <= v < n:
                closure_witness = (i, j, v)
                break
        if closure_witness:
            break
    report.checks.append(AxiomCheck("closure", closure_witness is None, closure_witness))
    if closure_witness is not None:
        return report

    e = _find_unit(t)
    report.checks.append(AxiomCheck("unit", e is not None, None if e is not None else ("no unit",)))

    inv_witness = None
    if e is not None:
        for i in range(n):
            if not any(t[i][j] == e and t[j][i] == e for j in range(n)):
                inv_witness = (i,)
                break
    else:
        inv_witness = ("no unit",)
    report.checks.append(AxiomCheck("inverses", inv_witness is None, inv_witness))

    latin_witness = None
    full = set(range(n))
    for i in range(n):
        if set(t[i]) != full:
            latin_witness = ("row", i)
            break
        if {t[j][i] for j in range(n)} != full:
            latin_witness = ("column", i)
            break
    report.checks.append(AxiomCheck("latin square", latin_witness is None, latin_witness))

    assoc_witness = None
    for a in range(n):
        ta = t[a]
        for b in range(n):
            ab = ta[b]
            tb = t[b]
            for c in range(n):
                if t[ab][c] != ta[tb[c]]:
                    assoc_witness = (a, b, c)
                    break
            if assoc_witness:
                break
        if assoc_witness:
            break
    report.checks.append(AxiomCheck("associativity", assoc_witness is None, assoc_witness))
    return report


# ---------------------------------------------------------------- presets


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise BadSpec("cyclic group needs n >= 1")
    names = ["u"] + ["a" if k == 1 else f"a^{k}" for k in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, names, label=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``; index ``e*n + k`` is ``r^k s^e``."""
    if n < 2:
        raise BadSpec("dihedral group needs n >= 2")
    elems = [(k, e) for e in range(2) for k in range(n)]

    def mul(x, y):
        (a, e), (b, f) = x, y
        return ((a + (b if e == 0 else -b)) % n, (e + f) % 2)

    idx = {x: i for i, x in enumerate(elems)}
    table = [[idx[mul(x, y)] for y in elems] for x in elems]

    def name(k, e):
        r = "" if k == 0 else ("r" if k == 1 else f"r^{k}")
        s = "s" if e else ""
        return (r + s) or "u"

    return FiniteGroup(table, [name(*x) for x in elems], label=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise BadSpec("symmetric group needs n >= 1")
    if n > 6:
        raise BadSpec("symmetric(n) is limited to n <= 6 (desk scale)")
    perms = list(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    names = ["".join(str(v + 1) for v in p) for p in perms]
    return FiniteGroup(table, names, label=f"S{n}")


def from_table(table, names=None, label="G") -> FiniteGroup:
    return FiniteGroup(table, names, label=label)


def loads(text: str, label: str = "G") -> FiniteGroup:
    """Parse the text group format (order, names, then ``n`` table rows)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        n = int(lines[0])
    except (IndexError, ValueError) as exc:
        raise BadSpec("first line must be the group order") from exc
    if n < 1:
        raise BadSpec("group order must be positive")
    if len(lines) != n + 2:
        raise BadSpec(f"expected {n + 2} non-empty lines, got {len(lines)}")
    names = lines[1].split()
    if len(names) != n or len(set(names)) != n:
        raise BadSpec("line 2 must hold n distinct names")
    try:
        table = [[int(v) for v in ln.split()] for ln in lines[2:]]
    except ValueError as exc:
        raise BadSpec("table entries must be integers") from exc
    if any(len(row) != n for row in table):
        raise InvalidTable("table rows must have n entries")
    return FiniteGroup(table, names, label=label)


def load(path) -> FiniteGroup:
    p = Path(path)
    return loads(p.read_text(encoding="utf-8"), label=p.stem)


_SPEC = re.compile(r"^\s*(cyclic|dihedral|symmetric)\s*[:(]\s*(\d+)\s*\)?\s*$")


def build_group(spec) -> FiniteGroup:
    """Build a group from ``cyclic:N``, ``dihedral:N``, ``symmetric:N``,
    ``file:PATH``, a ``(kind, n)`` tuple, or a dict ``{"table": ..., "names": ...}``."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        if "table" not in spec:
            raise BadSpec("explicit payload needs a 'table'")
        return FiniteGroup(spec["table"], spec.get("names"), label=spec.get("label", "G"))
    if isinstance(spec, tuple) and len(spec) == 2:
        spec = f"{spec[0]}:{spec[1]}"
    if not isinstance(spec, str):
        raise BadSpec(f"unrecognised group spec {spec!r}")
    if spec.startswith("file:"):
        return load(spec[5:])
    m = _SPEC.match(spec)
    if not m:
        raise BadSpec(f"unrecognised group spec {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}[kind](n)


@functools.lru_cache(maxsize=None)
def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n = k*k*d`` and ``d`` square-free."""
    k, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            k *= p
        if m % p == 0:
            m //= p
            d *= p
        p += 1
    d *= m
    return k, d
