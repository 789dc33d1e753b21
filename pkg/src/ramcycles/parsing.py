"""Text input for field elements, germs, maps and scalars.

Expressions use + - * / ^ (or **), parentheses and integers.  Symbols:

    z           the series / polynomial variable
    x           generator of F_{p^k} (extension fields only)
    t           uniformizer of F_q((t))
    p           the prime, in ``padic:`` texts
    l, lambda   the multiplier lambda of a map (bound from --lambda)
    mu          the extra parameter of a map (bound from --mu)

Prefixes ``poly:``, ``rat:`` and ``padic:`` are accepted on the whole
text; ``poly:`` may also precede a coefficient inside an expression.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction

import numpy as np

from .errors import OrderMismatch, ParseError
from .fields import FFElem, FieldSpec
from .ratpoly import RatFunc, tp_const
from .series import Germ, Series, make_germ

_ALLOWED = re.compile(r"[0-9A-Za-z_+\-*/^() \t.:]*")


_LAMBDA = re.compile(r"\blambda\b")


def _prepare(text: str):
    """Replace ^ by ** and drop poly: markers, keeping a map back to source columns."""
    # ``lambda`` is a Python keyword; swap it for a same-length identifier
    text = _LAMBDA.sub("lam___", text)
    out, cols = [], []
    i = 0
    while i < len(text):
        if text.startswith("poly:", i):
            i += 5
            continue
        ch = text[i]
        if ch == "^":
            out.append("**")
            cols += [i, i]
        else:
            out.append(ch)
            cols.append(i)
        i += 1
    cols.append(len(text))
    return "".join(out), cols


def _parse_ast(text: str):
    bad = next((i for i, ch in enumerate(text) if not _ALLOWED.fullmatch(ch)), None)
    if bad is not None:
        raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
    src, cols = _prepare(text)
    if not src.strip():
        raise ParseError("empty expression", text, 0)
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        off = (exc.offset or 1) - 1 + (len(src) - len(src.lstrip()))
        raise ParseError(f"syntax error: {exc.msg}", text, cols[min(off, len(cols) - 1)]) from None
    lead = len(src) - len(src.lstrip())
    return tree.body, (lambda node: cols[min(node.col_offset + lead, len(cols) - 1)])


class _Poly:
    """Sparse polynomial in z with coefficients in a ring (dict exponent -> coefficient)."""

    __slots__ = ("terms", "ring")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if ring.nonzero(c)}

    def const(self):
        if any(e != 0 for e in self.terms):
            return None
        return self.terms.get(0, self.ring.zero())

    def __add__(self, o):
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = self.ring.add(t[e], c) if e in t else c
        return _Poly(self.ring, t)

    def __neg__(self):
        return _Poly(self.ring, {e: self.ring.neg(c) for e, c in self.terms.items()})

    def __mul__(self, o):
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                c = self.ring.mul(c1, c2)
                t[e1 + e2] = self.ring.add(t[e1 + e2], c) if e1 + e2 in t else c
        return _Poly(self.ring, t)


class _CharPRing:
    def __init__(self, spec: FieldSpec):
        self.spec = spec

    def zero(self):
        return RatFunc.const(self.spec, 0)

    def one(self):
        return RatFunc.const(self.spec, 1)

    def from_int(self, n):
        return RatFunc.const(self.spec, n)

    def nonzero(self, c):
        return bool(c)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def t(self):
        a = np.zeros((2, self.spec.k), dtype=np.int64)
        a[1, 0] = 1
        return RatFunc(self.spec, a, reduced=True)

    def x(self):
        return RatFunc(self.spec, tp_const(self.spec, self.spec.gen), reduced=True)


class _PadicRing:
    def __init__(self, p: int):
        self.p = p

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def nonzero(self, c):
        return c != 0

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b


def _evaluate(text: str, ring, symbols: dict, allow_z: bool):
    node, col = _parse_ast(text)

    def ev(nd):
        if isinstance(nd, ast.Constant) and isinstance(nd.value, int) and not isinstance(nd.value, bool):
            return _Poly(ring, {0: ring.from_int(nd.value)})
        if isinstance(nd, ast.Name):
            name = nd.id
            if name == "z":
                if not allow_z:
                    raise ParseError("the variable z is not allowed here", text, col(nd))
                return _Poly(ring, {1: ring.one()})
            if name == "x" and "x" not in symbols:
                raise ParseError("x names the generator of an extension field; here k = 1", text, col(nd))
            if name not in symbols or symbols[name] is None:
                shown = "lambda" if name == "lam___" else name
                raise ParseError(f"unknown or unbound symbol {shown!r}", text, col(nd))
            val = symbols[name]
            return val if isinstance(val, _Poly) else _Poly(ring, {0: val})
        if isinstance(nd, ast.UnaryOp) and isinstance(nd.op, (ast.USub, ast.UAdd)):
            v = ev(nd.operand)
            return -v if isinstance(nd.op, ast.USub) else v
        if isinstance(nd, ast.BinOp):
            if isinstance(nd.op, ast.Pow):
                ex = nd.right
                sign = 1
                if isinstance(ex, ast.UnaryOp) and isinstance(ex.op, ast.USub):
                    sign, ex = -1, ex.operand
                if not (isinstance(ex, ast.Constant) and isinstance(ex.value, int)):
                    raise ParseError("exponents must be integer literals", text, col(nd.right))
                e = sign * ex.value
                base = ev(nd.left)
                if e < 0:
                    c = base.const()
                    if c is None or not ring.nonzero(c):
                        raise ParseError("negative powers need a nonzero z-free base", text, col(nd.left))
                    base = _Poly(ring, {0: ring.div(ring.one(), c)})
                    e = -e
                out = _Poly(ring, {0: ring.one()})
                while e:
                    if e & 1:
                        out = out * base
                    base = base * base
                    e >>= 1
                return out
            a, b = ev(nd.left), ev(nd.right)
            if isinstance(nd.op, ast.Add):
                return a + b
            if isinstance(nd.op, ast.Sub):
                return a + (-b)
            if isinstance(nd.op, ast.Mult):
                return a * b
            if isinstance(nd.op, ast.Div):
                c = b.const()
                if c is None or not ring.nonzero(c):
                    raise ParseError("division only by nonzero z-free expressions", text, col(nd.right))
                inv = ring.div(ring.one(), c)
                return _Poly(ring, {e: ring.mul(v, inv) for e, v in a.terms.items()})
        raise ParseError("unsupported expression", text, col(nd))

    try:
        return ev(node)
    except ZeroDivisionError:
        raise ParseError("division by zero", text, 0) from None


def _strip_prefix(text: str):
    s = text.strip()
    for pre in ("padic:", "rat:", "poly:"):
        if s.startswith(pre):
            return pre[:-1], s[len(pre):]
    return None, s


# -- public entry points -------------------------------------------------------


def _char_symbols(spec: FieldSpec, allow_t: bool, extra: dict | None = None):
    ring = _CharPRing(spec)
    sym = {}
    if spec.k > 1:
        sym["x"] = ring.x()
    if allow_t:
        sym["t"] = ring.t()
    for k, v in (extra or {}).items():
        sym[k] = v
    return ring, sym


def parse_field_element(text: str, spec: FieldSpec) -> FFElem:
    _, body = _strip_prefix(text)
    ring, sym = _char_symbols(spec, allow_t=False)
    v = _evaluate(body, ring, sym, allow_z=False).const()
    return _const_elem(v, spec, text)


def _const_elem(rf: RatFunc, spec: FieldSpec, text: str) -> FFElem:
    if rf.num.shape[0] > 1 or rf.den.shape[0] > 1:
        raise ParseError("expected a field constant", text, 0)
    if rf.num.shape[0] == 0:
        return spec.zero
    return FFElem(spec, tuple(int(c) for c in rf.num[0])) / FFElem(spec, tuple(int(c) for c in rf.den[0]))


def _bind(spec: FieldSpec, symbols: dict | None) -> dict:
    return {k: RatFunc(spec, tp_const(spec, v), reduced=True) for k, v in (symbols or {}).items()}


def parse_series(text: str, spec: FieldSpec, trunc: int | None = None, symbols: dict | None = None) -> Series:
    """A polynomial in z over F_{p^k}; exact unless ``trunc`` cuts it.

    ``symbols`` binds extra names to field elements, e.g. ``{"g": gamma}``.
    """
    _, body = _strip_prefix(text)
    ring, sym = _char_symbols(spec, allow_t=False, extra=_bind(spec, symbols))
    poly = _evaluate(body, ring, sym, allow_z=True)
    if any(e < 0 for e in poly.terms):
        raise ParseError("negative powers of z are not allowed", text, 0)
    deg = max(poly.terms, default=0)
    a = np.zeros((deg + 1, spec.k), dtype=np.int64)
    for e, c in poly.terms.items():
        a[e] = _const_elem(c, spec, text).coeffs
    s = Series(spec, a, exact=True)
    if trunc is not None:
        s = s.with_trunc(trunc)
    return s


def parse_germ(text: str, spec: FieldSpec, trunc: int | None = None, q: int | None = None,
               symbols: dict | None = None) -> Germ:
    s = parse_series(text, spec, trunc, symbols)
    if s.trunc < 2:
        s = s.with_trunc(2)
    try:
        return make_germ(s, q)
    except OrderMismatch:
        raise
    except ValueError as exc:
        raise ParseError(f"not a germ: {exc}", text, 0) from None


def parse_scalar(text: str, spec: FieldSpec) -> RatFunc:
    """An element of F_{p^k}(t) such as ``1+t`` or ``t^-1*(1 + t + 2*t^3)``."""
    mode, body = _strip_prefix(text)
    if mode == "padic":
        raise ParseError("padic: scalars need the p-adic backend", text, 0)
    ring, sym = _char_symbols(spec, allow_t=True)
    v = _evaluate(body, ring, sym, allow_z=False).const()
    return v


def parse_padic(text: str, p: int) -> Fraction:
    _, body = _strip_prefix(text)
    ring = _PadicRing(p)
    v = _evaluate(body, ring, {"p": Fraction(p)}, allow_z=False).const()
    return v


def parse_map(text: str, spec: FieldSpec, lam=None, mu=None) -> dict:
    """Map text to {z-degree: RatFunc}; ``lam`` and ``mu`` are RatFunc values."""
    _, body = _strip_prefix(text)
    ring, sym = _char_symbols(spec, allow_t=True, extra={"l": lam, "lam___": lam, "mu": mu})
    poly = _evaluate(body, ring, sym, allow_z=True)
    if any(e < 0 for e in poly.terms):
        raise ParseError("negative powers of z are not allowed", text, 0)
    return poly.terms


def parse_padic_map(text: str, p: int, lam=None, mu=None) -> dict:
    _, body = _strip_prefix(text)
    ring = _PadicRing(p)
    poly = _evaluate(body, ring, {"p": Fraction(p), "l": lam, "lam___": lam, "mu": mu}, allow_z=True)
    if any(e < 0 for e in poly.terms):
        raise ParseError("negative powers of z are not allowed", text, 0)
    return poly.terms


def parse_modulus(text: str, p: int) -> list:
    """``x^4+x+1`` or a comma list of low-to-high coefficients."""
    s = text.strip()
    if "," in s or re.fullmatch(r"\d+", s):
        try:
            return [int(c) % p for c in s.split(",")]
        except ValueError:
            raise ParseError("modulus list must hold integers", text, 0) from None
    ring = _PadicRing(p)
    # evaluate with x as the polynomial variable
    poly = _evaluate(s.replace("x", "z"), ring, {}, allow_z=True)
    deg = max(poly.terms, default=0)
    out = [0] * (deg + 1)
    for e, c in poly.terms.items():
        if c.denominator != 1 or e < 0:
            raise ParseError("modulus coefficients must be integers", text, 0)
        out[e] = int(c) % p
    return out
