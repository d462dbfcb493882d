"""A small expression language for field and quantum-double elements.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*'? factor)*          juxtaposition also multiplies
    factor := scalar | 'I' | '-' factor
            | 'd[' name ']@' site | 'r[' name ']@' site
            | 'U[' name ']V[' name ']'
            | '(' expr ')' | 'E(' expr ')' | 'star(' expr ')'
    scalar := integer | integer '/' integer | 'i' | 'sqrt(' integer ')'
    site   := '-'? integer ('/2')?

``d``/``r`` build order and disorder variables of the field algebra, ``U[g]V[h]``
the quantum double basis element ``(g, h)``; the two may not be mixed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import Element
from .field import FieldAlgebra, Window, field_algebra, site_str
from .groups import FiniteGroup
from .linalg import axpy, scale
from .scalars import I as IMAG, Scalar, conj, sqrt


class ExprError(ValueError):
    """``kind`` is one of syntax-error, unknown-element, site-out-of-window,
    type-mismatch; ``col`` is 1-based."""

    def __init__(self, kind: str, message: str, col: int | None = None, expected=None):
        self.kind, self.col = kind, col
        self.expected = sorted(expected) if expected else []
        where = f" at column {col}" if col is not None else ""
        exp = f" (expected one of {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{kind}{where}: {message}{exp}")


# ---------------------------------------------------------------- AST


@dataclass
class Node:
    pos: int = dc_field(default=0, compare=False, kw_only=True)


@dataclass
class Num(Node):
    value: object = 0


@dataclass
class Imag(Node):
    pass


@dataclass
class Sqrt(Node):
    n: int = 1


@dataclass
class Unit(Node):
    pass


@dataclass
class Gen(Node):
    kind: str = "d"  # 'd' or 'r'
    g: int = 0
    site: int = 0  # doubled


@dataclass
class UV(Node):
    g: int = 0
    h: int = 0


@dataclass
class Sum(Node):
    terms: list = dc_field(default_factory=list)  # [(sign, node)]


@dataclass
class Prod(Node):
    factors: list = dc_field(default_factory=list)


@dataclass
class Neg(Node):
    arg: Node = None


@dataclass
class Exp(Node):
    arg: Node = None


@dataclass
class Star(Node):
    arg: Node = None


# ---------------------------------------------------------------- context


class ExprContext:
    """Group and window against which names and sites are resolved."""

    def __init__(self, G: FiniteGroup, window: Window | None = None, F: FieldAlgebra | None = None):
        self.G = G
        self.window = window or (F.window if F is not None else None) or Window((1, 2, 3, 4))
        self._F = F
        self._D = None
        self._E = None

    @property
    def F(self) -> FieldAlgebra:
        if self._F is None:
            self._F = field_algebra(self.G, self.window)
        return self._F

    @property
    def D(self):
        if self._D is None:
            from .hopf import quantum_double
            self._D = quantum_double(self.G)
        return self._D

    @property
    def E(self):
        if self._E is None:
            from .field import gamma_action
            from .hopf import integral_expectation
            self._E = integral_expectation(gamma_action(self.F, self.D))
        return self._E


# ---------------------------------------------------------------- parser


_FACTOR_START = ["integer", "'i'", "'sqrt('", "'I'", "'-'", "'d['", "'r['", "'U['", "'('", "'E('", "'star('"]


class _Parser:
    def __init__(self, src: str, ctx: ExprContext):
        self.s = src
        self.p = 0
        self.ctx = ctx

    def err(self, msg, expected=None, pos=None, kind="syntax-error"):
        return ExprError(kind, msg, (self.p if pos is None else pos) + 1, expected)

    def ws(self):
        while self.p < len(self.s) and self.s[self.p].isspace():
            self.p += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.s.startswith(lit, self.p)

    def eat(self, lit: str) -> bool:
        if self.peek(lit):
            self.p += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.eat(lit):
            raise self.err(f"found {self._found()}", [repr(lit)])

    def _found(self) -> str:
        return repr(self.s[self.p]) if self.p < len(self.s) else "end of input"

    def integer(self) -> int:
        self.ws()
        start = self.p
        while self.p < len(self.s) and self.s[self.p].isdigit():
            self.p += 1
        if start == self.p:
            raise self.err(f"found {self._found()}", ["integer"])
        return int(self.s[start:self.p])

    def parse(self) -> Node:
        node = self.expr()
        self.ws()
        if self.p != len(self.s):
            raise self.err(f"unexpected {self.s[self.p]!r}", ["'+'", "'-'", "'*'", "end of input"])
        return node

    def expr(self) -> Node:
        self.ws()
        pos = self.p
        terms = [("+", self.term())]
        while True:
            if self.eat("+"):
                terms.append(("+", self.term()))
            elif self.eat("-"):
                terms.append(("-", self.term()))
            else:
                break
        return terms[0][1] if len(terms) == 1 else Sum(terms, pos=pos)

    def _starts_factor(self) -> bool:
        self.ws()
        if self.p >= len(self.s):
            return False
        c = self.s[self.p]
        return c.isdigit() or c in "iIdrUE(s"

    def term(self) -> Node:
        self.ws()
        pos = self.p
        factors = [self.factor()]
        while True:
            if self.eat("*"):
                factors.append(self.factor())
            elif self._starts_factor():
                factors.append(self.factor())
            else:
                break
        return factors[0] if len(factors) == 1 else Prod(factors, pos=pos)

    def name(self) -> tuple[int, int]:
        start = self.p
        end = self.s.find("]", start)
        if end < 0:
            self.p = len(self.s)
            raise self.err("unterminated name", ["']'"])
        nm = self.s[start:end]
        try:
            g = self.ctx.G.index(nm)
        except KeyError:
            raise self.err(f"{nm!r} is not an element of {self.ctx.G.label}", pos=start,
                           kind="unknown-element") from None
        self.p = end + 1
        return g, start

    def site(self, kind: str) -> int:
        self.ws()
        start = self.p
        neg = self.eat("-")
        v = self.integer()
        if neg:
            v = -v
        d = v if self.eat("/2") else 2 * v
        w = self.ctx.window
        ok = d in (w.ints if kind == "d" else w.halves)
        if not ok:
            what = "integer" if kind == "d" else "half-integer"
            raise self.err(f"site {site_str(d)} is not a{'n' if kind == 'd' else ''} {what} site of "
                           f"{w}", pos=start, kind="site-out-of-window")
        return d

    def factor(self) -> Node:
        self.ws()
        pos = self.p
        s = self.s
        if self.p >= len(s):
            raise self.err("found end of input", _FACTOR_START)
        c = s[self.p]
        if c.isdigit():
            v = self.integer()
            if self.eat("/"):
                q = self.integer()
                if q == 0:
                    raise self.err("zero denominator", pos=pos)
                return Num(Fraction(v, q), pos=pos)
            return Num(v, pos=pos)
        if self.eat("-"):
            return Neg(self.factor(), pos=pos)
        if self.eat("sqrt("):
            n = self.integer()
            self.expect(")")
            return Sqrt(n, pos=pos)
        if self.eat("star("):
            a = self.expr()
            self.expect(")")
            return Star(a, pos=pos)
        if self.eat("E("):
            a = self.expr()
            self.expect(")")
            return Exp(a, pos=pos)
        if self.eat("d[") or self.eat("r["):
            kind = s[pos]
            g, _ = self.name()
            self.expect("@")
            return Gen(kind, g, self.site(kind), pos=pos)
        if self.eat("U["):
            g, _ = self.name()
            self.expect("V[")
            h, _ = self.name()
            return UV(g, h, pos=pos)
        if self.eat("("):
            a = self.expr()
            self.expect(")")
            return a
        if self.eat("I"):
            return Unit(pos=pos)
        if self.eat("i"):
            return Imag(pos=pos)
        raise self.err(f"found {c!r}", _FACTOR_START)


def parse_expression(src: str, ctx: ExprContext) -> Node:
    return _Parser(src, ctx).parse()


# ---------------------------------------------------------------- printer


def _scalar_text(x) -> str:
    """Exact scalar in expression syntax."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if not isinstance(x, Scalar):
        raise TypeError(f"not an exact scalar: {x!r}")
    parts = []
    rad = f"sqrt({x.d})"
    for coef, unit in ((x.a, ""), (x.b, "i"), (x.c, rad), (x.e, "i*" + rad)):
        if coef == 0:
            continue
        mag = _scalar_text(abs(coef))
        body = unit if unit and mag == "1" else (mag + ("*" + unit if unit else ""))
        parts.append(("-" if coef < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def print_expression(node: Node, ctx: ExprContext) -> str:
    names = ctx.G.names

    def p(n, ctxprec=0):
        # ctxprec: 0 top/sum, 1 product factor, 2 unary operand
        if isinstance(n, Num):
            v = n.value
            if isinstance(v, Scalar):
                return f"({_scalar_text(v)})"
            return _scalar_text(v)
        if isinstance(n, Imag):
            return "i"
        if isinstance(n, Sqrt):
            return f"sqrt({n.n})"
        if isinstance(n, Unit):
            return "I"
        if isinstance(n, Gen):
            return f"{n.kind}[{names[n.g]}]@{site_str(n.site)}"
        if isinstance(n, UV):
            return f"U[{names[n.g]}]V[{names[n.h]}]"
        if isinstance(n, Exp):
            return f"E({p(n.arg)})"
        if isinstance(n, Star):
            return f"star({p(n.arg)})"
        if isinstance(n, Neg):
            return "-" + p(n.arg, 2)
        if isinstance(n, Prod):
            body = "*".join(p(f, 1) for f in n.factors)
            return body if ctxprec <= 1 else f"({body})"
        if isinstance(n, Sum):
            out = ""
            for k, (sign, t) in enumerate(n.terms):
                s = p(t, 0 if k == 0 and sign == "+" else 1)
                out += (("-" if sign == "-" else "") + s) if k == 0 else (sign + s)
            return out if ctxprec == 0 else f"({out})"
        raise TypeError(f"unknown node {n!r}")

    return p(node)


# ---------------------------------------------------------------- evaluator


def eval_expression(node: Node, ctx: ExprContext, default: str = "F") -> Element:
    """Evaluate to an exact :class:`Element` of ``F(window)`` or ``D(G)``.

    A purely scalar expression becomes a multiple of the unit of ``default``.
    """
    kind, val = _eval(node, ctx)
    if kind == "S":
        kind = default
        alg = ctx.F.algebra if kind == "F" else ctx.D.algebra
        return Element(alg, scale(val, alg.unit_vec))
    alg = ctx.F.algebra if kind == "F" else ctx.D.algebra
    return Element(alg, val)


def evaluate(src: str, ctx: ExprContext, default: str = "F") -> Element:
    return eval_expression(parse_expression(src, ctx), ctx, default)


def _alg(ctx, kind):
    return ctx.F.algebra if kind == "F" else ctx.D.algebra


def _lift(ctx, kind, v):
    """Scalar -> multiple of the unit of ``kind``."""
    return scale(v, _alg(ctx, kind).unit_vec)


def _join(a, b, node):
    ka, kb = a[0], b[0]
    if ka == "S" or kb == "S" or ka == kb:
        return kb if ka == "S" else ka
    raise ExprError("type-mismatch", "field and quantum double elements cannot be combined", node.pos + 1)


def _eval(n, ctx):
    if isinstance(n, Num):
        return "S", n.value
    if isinstance(n, Imag):
        return "S", IMAG
    if isinstance(n, Sqrt):
        try:
            return "S", sqrt(n.n)
        except ValueError as exc:
            raise ExprError("type-mismatch", str(exc), n.pos + 1) from None
    if isinstance(n, Unit):
        return "S", 1
    if isinstance(n, Gen):
        F = ctx.F
        pm = F.delta_pm(n.site, n.g) if n.kind == "d" else F.rho_pm(n.site, n.g)
        return "F", F.expand(pm)
    if isinstance(n, UV):
        return "D", {n.g * ctx.G.order + n.h: 1}
    if isinstance(n, Neg):
        k, v = _eval(n.arg, ctx)
        return k, (-v if k == "S" else scale(-1, v))
    if isinstance(n, Star):
        k, v = _eval(n.arg, ctx)
        return k, (conj(v) if k == "S" else _alg(ctx, k).star_vec(v))
    if isinstance(n, Exp):
        k, v = _eval(n.arg, ctx)
        if k == "D":
            raise ExprError("type-mismatch", "E applies to field elements", n.pos + 1)
        if k == "S":
            return "S", v
        return "F", ctx.E(v)
    if isinstance(n, Sum):
        acc = None
        for sign, t in n.terms:
            r = _eval(t, ctx)
            if sign == "-":
                r = (r[0], -r[1] if r[0] == "S" else scale(-1, r[1]))
            acc = r if acc is None else _add(acc, r, ctx, t)
        return acc
    if isinstance(n, Prod):
        acc = None
        for f in n.factors:
            r = _eval(f, ctx)
            acc = r if acc is None else _mul(acc, r, ctx, f)
        return acc
    raise TypeError(f"unknown node {n!r}")


def _add(a, b, ctx, node):
    k = _join(a, b, node)
    if k == "S":
        return "S", a[1] + b[1]
    x = a[1] if a[0] != "S" else _lift(ctx, k, a[1])
    y = b[1] if b[0] != "S" else _lift(ctx, k, b[1])
    out = dict(x)
    axpy(out, 1, y)
    return k, out


def _mul(a, b, ctx, node):
    k = _join(a, b, node)
    if k == "S":
        return "S", a[1] * b[1]
    if a[0] == "S":
        return k, scale(a[1], b[1])
    if b[0] == "S":
        return k, scale(b[1], a[1])
    return k, _alg(ctx, k).mul_vec(a[1], b[1])


# ---------------------------------------------------------------- elements -> text


def _coef_text(c) -> tuple[str, str]:
    """``(sign, magnitude-prefix)`` for a coefficient in front of a monomial."""
    if isinstance(c, Scalar):
        return "+", f"({_scalar_text(c)})"
    t = _scalar_text(c)
    sign = "-" if t.startswith("-") else "+"
    t = t.lstrip("-")
    return sign, t


def format_element(x: Element, ctx: ExprContext) -> str:
    """Expression text that evaluates back to ``x``."""
    A = x.parent
    names = ctx.G.names
    terms = []
    is_field = A is ctx.F.algebra
    for i in sorted(x.coeffs):
        c = x.coeffs[i]
        if is_field:
            mono = _field_monomial_text(ctx.F, A.labels[i])
        else:
            g, h = divmod(i, ctx.G.order)
            mono = f"U[{names[g]}]V[{names[h]}]"
        sign, mag = _coef_text(c)
        body = mono if mag == "1" else f"{mag}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


def _field_monomial_text(F: FieldAlgebra, lab) -> str:
    ds, rs = lab
    names = F.G.names
    parts = [f"d[{names[g]}]@{site_str(x)}" for g, x in zip(ds, F.window.ints)]
    parts += [f"r[{names[h]}]@{site_str(l)}" for h, l in zip(rs, F.window.halves) if h != F.G.unit]
    return "*".join(parts) if parts else "I"


# ---------------------------------------------------------------- random expressions


def random_expression(rng: random.Random, ctx: ExprContext, depth: int = 3, double: bool = False) -> Node:
    """Seeded random AST over field generators (or double generators)."""
    G, w = ctx.G, ctx.window

    def leaf():
        r = rng.random()
        if r < 0.15:
            return Num(Fraction(rng.randint(1, 9), rng.choice([1, 1, 2, 3])))
        if r < 0.2:
            return Unit()
        if r < 0.25:
            return Imag()
        if double:
            return UV(rng.randrange(G.order), rng.randrange(G.order))
        if w.halves and (not w.ints or rng.random() < 0.5):
            return Gen("r", rng.randrange(G.order), rng.choice(w.halves))
        return Gen("d", rng.randrange(G.order), rng.choice(w.ints))

    def node(d):
        if d == 0:
            return leaf()
        r = rng.random()
        if r < 0.3:
            return leaf()
        if r < 0.55:
            return Prod([node(d - 1) for _ in range(rng.randint(2, 3))])
        if r < 0.8:
            return Sum([(rng.choice("+-"), node(d - 1)) for _ in range(rng.randint(2, 3))])
        if r < 0.87:
            return Neg(node(d - 1))
        if r < 0.94:
            return Star(node(d - 1))
        return Exp(node(d - 1)) if not double else Star(node(d - 1))

    return node(depth)
