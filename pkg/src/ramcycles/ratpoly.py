"""Exact polynomials over F_{p^k}[t], the field F_{p^k}(t), and F_{p^k}(t)[z].

t-polynomials are (L, k) int64 arrays, low degree first, with no trailing
zero rows (the zero polynomial has L = 0).
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .fields import FFElem, FieldSpec

# -- F[t] ----------------------------------------------------------------------


def tp_trim(a: np.ndarray) -> np.ndarray:
    nz = np.nonzero(a.any(axis=1))[0]
    return a[: nz[-1] + 1] if nz.size else a[:0]


def tp_const(spec: FieldSpec, c) -> np.ndarray:
    if isinstance(c, FFElem):
        return tp_trim(np.array([c.coeffs], dtype=np.int64))
    a = np.zeros((1, spec.k), dtype=np.int64)
    a[0, 0] = int(c) % spec.p
    return tp_trim(a)


def tp_ord(a: np.ndarray) -> int | None:
    nz = np.nonzero(a.any(axis=1))[0]
    return int(nz[0]) if nz.size else None


def tp_deg(a: np.ndarray) -> int:
    return a.shape[0] - 1


def tp_add(a, b, spec):
    n = max(a.shape[0], b.shape[0])
    out = np.zeros((n, spec.k), dtype=np.int64)
    out[: a.shape[0]] += a
    out[: b.shape[0]] += b
    return tp_trim(out % spec.p)


def tp_neg(a, spec):
    return (-a) % spec.p


def tp_sub(a, b, spec):
    return tp_add(a, tp_neg(b, spec), spec)


def tp_mul(a, b, spec):
    if a.shape[0] == 0 or b.shape[0] == 0:
        return a[:0] if a.shape[0] == 0 else b[:0]
    return tp_trim(K.mulmod(a, b, spec.p, spec.red_matrix))


def tp_scale(c: FFElem, a, spec):
    return tp_trim(K.scalar_mul(np.array(c.coeffs), a, spec.p, spec.red_matrix))


def tp_lead(a, spec) -> FFElem:
    return FFElem(spec, tuple(int(x) for x in a[-1]))


def tp_divmod(a, b, spec):
    if b.shape[0] == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.shape[0] - 1
    if a.shape[0] - 1 < db:
        return a[:0], a
    inv = tp_lead(b, spec).inverse()
    r = a.copy()
    qt = np.zeros((a.shape[0] - db, spec.k), dtype=np.int64)
    for i in range(a.shape[0] - 1, db - 1, -1):
        if not r[i].any():
            continue
        c = FFElem(spec, tuple(int(x) for x in r[i])) * inv
        qt[i - db] = c.coeffs
        r[i - db : i + 1] = (r[i - db : i + 1] - K.scalar_mul(np.array(c.coeffs), b, spec.p, spec.red_matrix)) % spec.p
    return tp_trim(qt), tp_trim(r[:db] if db else r[:0])


def tp_monic(a, spec):
    if a.shape[0] == 0:
        return a
    return tp_scale(tp_lead(a, spec).inverse(), a, spec)


def tp_gcd(a, b, spec):
    while b.shape[0]:
        a, b = b, tp_divmod(a, b, spec)[1]
    return tp_monic(a, spec)


def tp_pow(a, e, spec):
    out = tp_const(spec, 1)
    while e:
        if e & 1:
            out = tp_mul(out, a, spec)
        a = tp_mul(a, a, spec)
        e >>= 1
    return out


def tp_eval0(a, spec) -> FFElem:
    return FFElem(spec, tuple(int(x) for x in a[0])) if a.shape[0] else spec.zero


# -- F(t) ----------------------------------------------------------------------


class RatFunc:
    """num/den in lowest terms with den monic."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, spec: FieldSpec, num, den=None, reduced: bool = False):
        num = tp_trim(np.asarray(num, dtype=np.int64).reshape(-1, spec.k) % spec.p)
        den = tp_const(spec, 1) if den is None else tp_trim(np.asarray(den, dtype=np.int64).reshape(-1, spec.k) % spec.p)
        if den.shape[0] == 0:
            raise ZeroDivisionError("zero denominator")
        if num.shape[0] == 0:
            den = tp_const(spec, 1)
        elif not reduced and den.shape[0] > 1:
            g = tp_gcd(num, den, spec)
            if g.shape[0] > 1:
                num = tp_divmod(num, g, spec)[0]
                den = tp_divmod(den, g, spec)[0]
        lc = tp_lead(den, spec)
        if lc != spec.one:
            inv = lc.inverse()
            num, den = tp_scale(inv, num, spec), tp_scale(inv, den, spec)
        self.spec, self.num, self.den = spec, num, den

    @classmethod
    def const(cls, spec, c):
        return cls(spec, tp_const(spec, c), reduced=True)

    def __bool__(self):
        return self.num.shape[0] > 0

    def __add__(self, o):
        s = self.spec
        if self.den.shape[0] == 1 and o.den.shape[0] == 1:
            return RatFunc(s, tp_add(self.num, o.num, s), reduced=True)
        return RatFunc(s, tp_add(tp_mul(self.num, o.den, s), tp_mul(o.num, self.den, s), s), tp_mul(self.den, o.den, s))

    def __neg__(self):
        return RatFunc(self.spec, tp_neg(self.num, self.spec), self.den, reduced=True)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        s = self.spec
        if self.den.shape[0] == 1 and o.den.shape[0] == 1:
            return RatFunc(s, tp_mul(self.num, o.num, s), reduced=True)
        return RatFunc(s, tp_mul(self.num, o.num, s), tp_mul(self.den, o.den, s))

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.spec, self.den, self.num, reduced=True)

    def __truediv__(self, o):
        return self * o.inverse()

    def __eq__(self, o):
        return isinstance(o, RatFunc) and np.array_equal(self.num, o.num) and np.array_equal(self.den, o.den)

    __hash__ = None

    def val(self):
        """t-adic valuation; None for zero."""
        if not self:
            return None
        return tp_ord(self.num) - tp_ord(self.den)

    def __repr__(self):
        return f"RatFunc({self.num.tolist()}/{self.den.tolist()})"


# -- F(t)[z] -------------------------------------------------------------------


def zp_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def zp_deg(a: list) -> int:
    return len(a) - 1


def zp_derivative(a: list, spec) -> list:
    return zp_trim([a[i] * RatFunc.const(spec, i) for i in range(1, len(a))])


def zp_divmod(a: list, b: list, spec):
    b = zp_trim(list(b))
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], zp_trim(r)
    inv = b[-1].inverse()
    qt = [RatFunc.const(spec, 0)] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        if not r[i]:
            continue
        c = r[i] * inv
        qt[i - db] = c
        for j in range(db + 1):
            r[i - db + j] = r[i - db + j] - c * b[j]
    return zp_trim(qt), zp_trim(r[:db])


def zp_monic(a: list) -> list:
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def zp_gcd(a: list, b: list, spec) -> list:
    a, b = zp_trim(list(a)), zp_trim(list(b))
    while b:
        a, b = b, zp_divmod(a, b, spec)[1]
    return zp_monic(a)


def zp_exact_div(a: list, b: list, spec) -> list:
    qt, r = zp_divmod(a, b, spec)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return qt


def zp_primitive_vals(a: list) -> list:
    """Valuations of the coefficients (None for zero), for Newton polygons."""
    return [c.val() for c in a]
