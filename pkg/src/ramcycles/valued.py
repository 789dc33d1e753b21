"""Valued scalars for the ground field K: F_q((t)) truncated, F_q(t) exact, Z_p truncated."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import _kernels as K
from .errors import IndeterminateValuation
from .fields import FFElem, FieldSpec, ff_make
from .ratpoly import RatFunc, tp_const, tp_eval0, tp_ord, tp_trim
from .series import AtLeast, CensoredNat, Series, reciprocal


class LaurentTrunc:
    """t^e (c_0 + c_1 t + ... + c_{L-1} t^{L-1}) with every term below t^{e+L} known.

    ``c_0`` is nonzero unless the element is a censored zero, i.e. only
    known to have valuation >= e + L.
    """

    backend = "laurent"
    __slots__ = ("spec", "e", "c")

    def __init__(self, spec: FieldSpec, e: int, c):
        c = np.asarray(c, dtype=np.int64).reshape(-1, spec.k) % spec.p
        nz = np.nonzero(c.any(axis=1))[0]
        if nz.size and nz[0] > 0:
            e, c = e + int(nz[0]), c[nz[0]:]
        elif not nz.size:
            e, c = e + c.shape[0], c[:0]
        self.spec, self.e, self.c = spec, e, c

    @property
    def prec(self) -> int:
        """Absolute precision: terms of degree < prec are known."""
        return self.e + self.c.shape[0]

    @classmethod
    def from_ratfunc(cls, rf: RatFunc, T: int) -> "LaurentTrunc":
        """Expand an exact rational function keeping T terms of relative precision."""
        spec = rf.spec
        if not rf:
            return cls(spec, T, np.zeros((0, spec.k)))
        a, b = tp_ord(rf.num), tp_ord(rf.den)
        num = rf.num[a:]
        den = rf.den[b:]
        nser = np.zeros((T, spec.k), dtype=np.int64)
        nser[: min(T, num.shape[0])] = num[:T]
        dser = np.zeros((T, spec.k), dtype=np.int64)
        dser[: min(T, den.shape[0])] = den[:T]
        inv = reciprocal(Series(spec, dser)).coeffs
        return cls(spec, a - b, K.mulmod(nser, inv, spec.p, spec.red_matrix, (T,)))

    def val(self):
        return self.e if self.c.shape[0] else AtLeast(self.prec)

    def _aligned(self, o):
        lo = min(self.e, o.e)
        hi = min(self.prec, o.prec)
        n = max(hi - lo, 0)

        def place(x):
            out = np.zeros((n, self.spec.k), dtype=np.int64)
            s = x.e - lo
            m = max(0, min(x.c.shape[0], n - s))
            if m:
                out[s : s + m] = x.c[:m]
            return out

        return lo, place(self), place(o)

    def __add__(self, o):
        o = _lift(self, o)
        lo, a, b = self._aligned(o)
        return LaurentTrunc(self.spec, lo, (a + b) % self.spec.p)

    def __neg__(self):
        return LaurentTrunc(self.spec, self.e, -self.c)

    def __sub__(self, o):
        return self + (-_lift(self, o))

    def __mul__(self, o):
        if isinstance(o, int):
            if o % self.spec.p == 0:
                return LaurentTrunc(self.spec, self.prec, self.c[:0])
            return LaurentTrunc(self.spec, self.e, self.c * (o % self.spec.p))
        if not self.c.shape[0] or not o.c.shape[0]:
            # a censored zero stays censored, at the sum of the lower bounds
            lo = (self.e if self.c.shape[0] else self.prec) + (o.e if o.c.shape[0] else o.prec)
            return LaurentTrunc(self.spec, lo, self.c[:0])
        L = min(self.c.shape[0], o.c.shape[0])
        prod = K.mulmod(self.c[:L], o.c[:L], self.spec.p, self.spec.red_matrix, (L,))
        return LaurentTrunc(self.spec, self.e + o.e, prod)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, m: int):
        one = np.zeros((max(self.c.shape[0], 1), self.spec.k), dtype=np.int64)
        one[0, 0] = 1
        out = LaurentTrunc(self.spec, 0, one)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def residue(self) -> FFElem:
        if self.c.shape[0] == 0:
            if self.prec > 0:
                return self.spec.zero
            raise IndeterminateValuation("residue of a censored element")
        if self.e < 0:
            raise ValueError("element is not in the valuation ring")
        if self.e > 0:
            return self.spec.zero
        return FFElem(self.spec, tuple(int(x) for x in self.c[0]))

    def __repr__(self):
        return f"LaurentTrunc(t^{self.e}*{self.c[:, 0].tolist() if self.spec.k == 1 else self.c.tolist()}, prec={self.prec})"


class RationalExact:
    backend = "rational"
    __slots__ = ("rf",)

    def __init__(self, rf: RatFunc):
        self.rf = rf

    @property
    def spec(self):
        return self.rf.spec

    def val(self):
        v = self.rf.val()
        if v is None:
            return CensoredNat("infinite")
        return v

    def __add__(self, o):
        return RationalExact(self.rf + _lift(self, o).rf)

    def __neg__(self):
        return RationalExact(-self.rf)

    def __sub__(self, o):
        return RationalExact(self.rf - _lift(self, o).rf)

    def __mul__(self, o):
        return RationalExact(self.rf * _lift(self, o).rf)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, o):
        return RationalExact(self.rf / _lift(self, o).rf)

    def __pow__(self, m: int):
        out = RatFunc.const(self.spec, 1)
        base = self.rf
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return RationalExact(out)

    def residue(self) -> FFElem:
        v = self.rf.val()
        if v is None or v > 0:
            return self.spec.zero
        if v < 0:
            raise ValueError("element is not in the valuation ring")
        return tp_eval0(self.rf.num[tp_ord(self.rf.num):], self.spec) / tp_eval0(self.rf.den[tp_ord(self.rf.den):], self.spec)

    def to_laurent(self, T: int) -> LaurentTrunc:
        return LaurentTrunc.from_ratfunc(self.rf, T)

    def __repr__(self):
        return f"RationalExact({self.rf})"


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicTrunc:
    """An element of Z_p known modulo p^M."""

    backend = "padic"
    __slots__ = ("p", "M", "v")

    def __init__(self, p: int, M: int, v: int):
        self.p, self.M = p, M
        self.v = v % p ** M

    @classmethod
    def from_fraction(cls, p: int, M: int, x) -> "PadicTrunc":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ValueError("element is not in Z_p")
        mod = p ** M
        return cls(p, M, x.numerator * pow(x.denominator, -1, mod))

    @property
    def spec(self):
        return ff_make(self.p)

    def val(self):
        if self.v == 0:
            return AtLeast(self.M)
        return _vp(self.v, self.p)

    def __add__(self, o):
        o = _lift(self, o)
        return PadicTrunc(self.p, min(self.M, o.M), self.v + o.v)

    def __neg__(self):
        return PadicTrunc(self.p, self.M, -self.v)

    def __sub__(self, o):
        return self + (-_lift(self, o))

    def __mul__(self, o):
        o = _lift(self, o)
        return PadicTrunc(self.p, min(self.M, o.M), self.v * o.v)

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, m: int):
        return PadicTrunc(self.p, self.M, pow(self.v, m, self.p ** self.M))

    def residue(self) -> FFElem:
        return self.spec.from_int(self.v % self.p)

    def __repr__(self):
        return f"PadicTrunc({self.v} mod {self.p}^{self.M})"


def _lift(x, o):
    """Coerce an int into the backend of x."""
    if not isinstance(o, int):
        return o
    if isinstance(x, PadicTrunc):
        return PadicTrunc(x.p, x.M, o)
    if isinstance(x, RationalExact):
        return RationalExact(RatFunc.const(x.spec, o))
    # exact integers carry unlimited precision; give them the operand's window
    c = np.zeros((max(x.prec, 1), x.spec.k), dtype=np.int64)
    c[0, 0] = o % x.spec.p
    return LaurentTrunc(x.spec, 0, c) if o % x.spec.p else LaurentTrunc(x.spec, max(x.prec, 1), c[:0])


def val(x):
    """Valuation: an int, or a CensoredNat (AtLeast cutoff, or infinite for exact zero)."""
    return x.val()


def char_of(x) -> int:
    return x.p if isinstance(x, PadicTrunc) else x.spec.p


def lambda_power_val(lam, m: int):
    """val(lambda^m - 1) for a unit lambda."""
    v0 = lam.val()
    if isinstance(v0, CensoredNat) or v0 != 0:
        raise ValueError("lambda must be a unit (valuation 0)")
    return (lam ** m - 1).val()


def bound_valuation(lam, q: int, n: int) -> Fraction:
    """Largest valuation a point of minimal period q p^n can have.

    n = 0: val(lambda^q - 1)/q.
    n >= 1: (val(lambda^{qp^n} - 1) - val(lambda^{qp^{n-1}} - 1)) / (q p^n).
    """
    p = char_of(lam)
    top = lambda_power_val(lam, q * p ** n)
    if isinstance(top, CensoredNat):
        raise IndeterminateValuation(f"val(lambda^{q * p ** n} - 1) is censored: {top}")
    if n == 0:
        return Fraction(top, q)
    low = lambda_power_val(lam, q * p ** (n - 1))
    if isinstance(low, CensoredNat):  # pragma: no cover - low <= top always
        raise IndeterminateValuation(f"val(lambda^{q * p ** (n - 1)} - 1) is censored")
    return Fraction(top - low, q * p ** n)


def laurent_from_poly(spec: FieldSpec, coeffs, T: int, e: int = 0) -> LaurentTrunc:
    """t^e * sum coeffs[i] t^i, keeping T terms."""
    c = np.zeros((T, spec.k), dtype=np.int64)
    for i, x in enumerate(coeffs[:T]):
        c[i] = x.coeffs if isinstance(x, FFElem) else [int(x) % spec.p] + [0] * (spec.k - 1)
    return LaurentTrunc(spec, e, c)


def rational_from_polys(spec: FieldSpec, num, den=None) -> RationalExact:
    def arr(cs):
        a = np.zeros((len(cs), spec.k), dtype=np.int64)
        for i, x in enumerate(cs):
            a[i] = x.coeffs if isinstance(x, FFElem) else [int(x) % spec.p] + [0] * (spec.k - 1)
        return tp_trim(a)

    return RationalExact(RatFunc(spec, arr(num), None if den is None else arr(den)))
