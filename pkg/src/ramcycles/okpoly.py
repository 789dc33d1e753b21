"""Polynomials in z over the valuation ring O_K, in three coefficient backends.

rational  exact coefficients in F_q[t] over a common unit denominator d(t)
laurent   coefficients in F_q[t] known modulo t^T
padic     integer coefficients known modulo p^M

Bivariate data is an array of shape (Dz, Dt, k).  ``zprec`` marks a
z-window: only coefficients of z^0 .. z^{zprec-1} are kept.  ``zlow``
records how many low coefficients are structurally zero.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import _kernels as K
from .errors import DegreeCeiling
from .fields import FieldSpec, ff_make
from .ratpoly import RatFunc, tp_eval0, tp_mul, tp_ord, tp_pow, tp_trim
from .series import CensoredNat, AtLeast, INFINITE, Series, reciprocal

DEFAULT_CEILING = 10 ** 4


def _tp_to_series(a: np.ndarray, T: int, spec: FieldSpec) -> np.ndarray:
    out = np.zeros((T, spec.k), dtype=np.int64)
    out[: min(T, a.shape[0])] = a[:T]
    return out


class OKPoly:
    __slots__ = ("backend", "spec", "num", "den", "T", "zprec", "zlow", "p", "M")

    def __init__(self, backend, spec, num, den=None, T=None, zprec=None, zlow=0, M=None):
        self.backend = backend
        self.spec = spec
        self.num = num
        self.den = den
        self.T = T
        self.zprec = zprec
        self.zlow = zlow
        self.p = spec.p
        self.M = M

    # -- construction --------------------------------------------------------

    @classmethod
    def from_ratfuncs(cls, coeffs: dict, spec: FieldSpec, backend: str = "rational", T: int | None = None) -> "OKPoly":
        """coeffs maps z-degree to a RatFunc in O_K."""
        deg = max([i for i, c in coeffs.items() if c] or [0])
        for i, c in coeffs.items():
            if c and c.val() < 0:
                raise ValueError(f"coefficient of z^{i} is not in O_K")
        if backend == "rational":
            den = np.zeros((1, spec.k), dtype=np.int64)
            den[0, 0] = 1
            for c in coeffs.values():
                if c and c.den.shape[0] > 1:
                    den = _tp_lcm(den, c.den, spec)
            rows = []
            for i in range(deg + 1):
                c = coeffs.get(i)
                if c is None or not c:
                    rows.append(np.zeros((0, spec.k), dtype=np.int64))
                else:
                    from .ratpoly import tp_divmod

                    rows.append(tp_mul(c.num, tp_divmod(den, c.den, spec)[0], spec))
            Dt = max([r.shape[0] for r in rows] + [1])
            num = np.zeros((deg + 1, Dt, spec.k), dtype=np.int64)
            for i, r in enumerate(rows):
                num[i, : r.shape[0]] = r
            zl = _first_nonzero_z(num)
            return cls("rational", spec, num, tp_trim(den), zlow=zl)
        if backend == "laurent":
            if T is None:
                raise ValueError("laurent backend needs a t-precision T")
            num = np.zeros((deg + 1, T, spec.k), dtype=np.int64)
            for i, c in coeffs.items():
                if c:
                    ser = _rf_series(c, T, spec)
                    num[i] = ser
            zl = min([i for i, c in coeffs.items() if c] or [deg + 1])
            return cls("laurent", spec, num, T=T, zlow=zl)
        raise ValueError(f"unknown backend {backend}")

    @classmethod
    def from_padic(cls, coeffs: dict, p: int, M: int) -> "OKPoly":
        """coeffs maps z-degree to a Fraction with p-unit denominator."""
        mod = p ** M
        deg = max([i for i, c in coeffs.items() if c] or [0])
        vals = [0] * (deg + 1)
        for i, c in coeffs.items():
            c = Fraction(c)
            if c.denominator % p == 0:
                raise ValueError(f"coefficient of z^{i} is not in Z_p")
            vals[i] = c.numerator * pow(c.denominator, -1, mod) % mod
        zl = min([i for i, c in coeffs.items() if c] or [deg + 1])
        return cls("padic", ff_make(p), vals, M=M, zlow=zl)

    # -- basic data ----------------------------------------------------------

    def ncoeffs(self) -> int:
        return len(self.num) if self.backend == "padic" else self.num.shape[0]

    def degree(self) -> int:
        if self.backend == "padic":
            nz = [i for i, v in enumerate(self.num) if v]
            return nz[-1] if nz else -1
        nz = np.nonzero(self.num.reshape(self.num.shape[0], -1).any(axis=1))[0]
        return int(nz[-1]) if nz.size else -1

    def coeff_val(self, i: int):
        """int valuation, INFINITE for an exact zero, AtLeast(c) when censored."""
        if i < self.zlow:
            return INFINITE
        if i >= self.ncoeffs():
            if self.zprec is not None and i >= self.zprec:
                raise IndexError(f"z^{i} lies outside the window z^{self.zprec}")
            return INFINITE
        if self.backend == "padic":
            v = self.num[i]
            if v == 0:
                return AtLeast(self.M)
            n = 0
            while v % self.p == 0:
                v //= self.p
                n += 1
            return n
        o = tp_ord(self.num[i])
        if self.backend == "rational":
            return INFINITE if o is None else o
        return AtLeast(self.T) if o is None else o

    def coeff_vals(self) -> list:
        n = self.ncoeffs() if self.zprec is None else min(self.ncoeffs(), self.zprec)
        return [self.coeff_val(i) for i in range(n)]

    def reduce(self) -> Series:
        """Reduction modulo the maximal ideal, as a series over the residue field."""
        n = self.ncoeffs()
        exact = self.zprec is None
        if self.backend == "padic":
            return Series(self.spec, [v % self.p for v in self.num], exact)
        arr = self.num[:, 0, :] if self.num.shape[1] else np.zeros((n, self.spec.k), dtype=np.int64)
        if self.backend == "rational":
            d0 = tp_eval0(self.den, self.spec)
            inv = np.array(d0.inverse().coeffs)
            arr = K.scalar_mul(inv, arr, self.p, self.spec.red_matrix)
        return Series(self.spec, arr, exact)

    def linear_coeff(self):
        """The coefficient of z as a valued scalar."""
        from .valued import LaurentTrunc, PadicTrunc, RationalExact

        if self.backend == "padic":
            return PadicTrunc(self.p, self.M, self.num[1] if self.ncoeffs() > 1 else 0)
        row = tp_trim(self.num[1]) if self.ncoeffs() > 1 else self.num[0][:0]
        if self.backend == "rational":
            return RationalExact(RatFunc(self.spec, row, self.den))
        return LaurentTrunc(self.spec, 0, _tp_to_series(row, self.T, self.spec))

    def to_zpoly(self) -> list:
        """Coefficient list of RatFunc (rational backend, full polynomials only)."""
        if self.backend != "rational" or self.zprec is not None:
            raise ValueError("exact coefficient access needs the rational backend without a z-window")
        return [RatFunc(self.spec, tp_trim(self.num[i]), self.den) for i in range(self.degree() + 1)]

    def window(self, W: int) -> "OKPoly":
        W = max(W, 1)
        num = self.num[:W]
        zp = W if self.zprec is None else min(W, self.zprec)
        return OKPoly(self.backend, self.spec, num, self.den, self.T, zp, self.zlow, self.M)

    def minus_z(self) -> "OKPoly":
        """self(z) - z; the result keeps the structural zero constant term."""
        if self.backend == "padic":
            num = list(self.num) + [0] * max(0, 2 - len(self.num))
            num[1] = (num[1] - 1) % self.p ** self.M
            return OKPoly("padic", self.spec, num, zprec=self.zprec, zlow=min(self.zlow, 1), M=self.M)
        num = self.num
        if num.shape[0] < 2:
            num = np.concatenate([num, np.zeros((2 - num.shape[0],) + num.shape[1:], dtype=np.int64)])
        num = num.copy()
        d = self.den if self.backend == "rational" else np.eye(1, self.spec.k, dtype=np.int64)
        if num.shape[1] < d.shape[0]:
            num = np.concatenate([num, np.zeros((num.shape[0], d.shape[0] - num.shape[1], self.spec.k), dtype=np.int64)], axis=1)
        num[1, : d.shape[0]] = (num[1, : d.shape[0]] - d) % self.p
        return OKPoly(self.backend, self.spec, num, self.den, self.T, self.zprec, min(self.zlow, 1), self.M)

    def __repr__(self):
        return f"OKPoly({self.backend}, deg={self.degree()}, zprec={self.zprec}, T={self.T}, M={self.M})"


def _first_nonzero_z(num: np.ndarray) -> int:
    nz = np.nonzero(num.reshape(num.shape[0], -1).any(axis=1))[0]
    return int(nz[0]) if nz.size else num.shape[0]


def _tp_lcm(a, b, spec):
    from .ratpoly import tp_divmod, tp_gcd, tp_monic

    g = tp_gcd(a, b, spec)
    return tp_monic(tp_mul(tp_divmod(a, g, spec)[0], b, spec), spec)


def _rf_series(c: RatFunc, T: int, spec: FieldSpec) -> np.ndarray:
    b = tp_ord(c.den)
    if b:
        raise ValueError("coefficient is not in O_K")
    inv = reciprocal(Series(spec, _tp_to_series(c.den, T, spec))).coeffs
    return K.mulmod(_tp_to_series(c.num, T, spec), inv, spec.p, spec.red_matrix, (T,))


# -- composition -------------------------------------------------------------


def _bimul(a, b, spec, zcap, tcap):
    shape = (zcap if zcap is not None else a.shape[0] + b.shape[0] - 1,
             tcap if tcap is not None else a.shape[1] + b.shape[1] - 1)
    out = K.mulmod(a, b, spec.p, spec.red_matrix, shape)
    return out


def _badd(a, b, p):
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape, dtype=np.int64)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out % p


def _trim_t(a):
    nz = np.nonzero(a.any(axis=(0, 2)))[0]
    return a[:, : nz[-1] + 1] if nz.size else a[:, :1]


def _padic_mul(a: list, b: list, p: int, M: int, zcap):
    mod = p ** M
    n = len(a) + len(b) - 1
    if zcap is not None:
        n = min(n, zcap)
    if n <= 0 or not a or not b:
        return []
    bits = (2 * mod.bit_length()) + max(len(a), len(b)).bit_length() + 1
    A = sum(c << (bits * i) for i, c in enumerate(a))
    B = sum(c << (bits * i) for i, c in enumerate(b))
    C = A * B
    mask = (1 << bits) - 1
    out = []
    for _ in range(n):
        out.append((C & mask) % mod)
        C >>= bits
    return out


def compose_outer(P: OKPoly, F: OKPoly) -> OKPoly:
    """P(F(z)); windows and precisions follow F."""
    spec = F.spec
    zcap = F.zprec
    if P.backend == "padic":
        mod = P.p ** P.M
        acc = [P.num[-1] % mod]
        for c in reversed(P.num[:-1]):
            acc = _padic_mul(acc, F.num, P.p, P.M, zcap)
            acc = acc + [0] * max(0, 1 - len(acc))
            acc[0] = (acc[0] + c) % mod
        zl = P.zlow * F.zlow
        return OKPoly("padic", spec, acc, zprec=zcap, zlow=zl, M=min(P.M, F.M))
    tcap = F.T if F.backend == "laurent" else None
    D = P.degree()
    # P = sum A_i z^i / dP, F = N / dF  ->  P(F) = sum A_i N^i dF^{D-i} / (dP dF^D)
    if P.backend == "rational":
        dF = F.den
        acc = P.num[D][None]
        for i in range(D - 1, -1, -1):
            acc = _bimul(acc, F.num, spec, zcap, tcap)
            Ai = P.num[i]
            if Ai.any():
                term = tp_mul(tp_trim(Ai), tp_pow(dF, D - i, spec), spec)
                acc = _badd(acc, term[None], spec.p)
            acc = _trim_t(acc)
        den = tp_mul(P.den, tp_pow(dF, D, spec), spec)
        zl = P.zlow * F.zlow
        return OKPoly("rational", spec, acc, tp_trim(den), zprec=zcap, zlow=zl)
    acc = P.num[D][None, :tcap]
    for i in range(D - 1, -1, -1):
        acc = _bimul(acc, F.num, spec, zcap, tcap)
        acc = _badd(acc, P.num[i][None, :tcap], spec.p)
    zl = P.zlow * F.zlow
    return OKPoly("laurent", spec, acc, T=F.T, zprec=zcap, zlow=zl)


def iterate_chain(P: OKPoly, counts, zprec: int | None = None, ceiling: int = DEFAULT_CEILING) -> dict:
    """{m: P^m} for each requested m, sharing the left-to-right iteration."""
    counts = sorted(set(counts))
    top = counts[-1]
    d = P.degree()
    if zprec is None and d > 1 and d ** top > ceiling:
        raise DegreeCeiling(f"degree {d}^{top} exceeds the ceiling {ceiling}")
    F = P if zprec is None else P.window(zprec)
    out = {}
    for m in range(1, top + 1):
        if m > 1:
            F = compose_outer(P, F)
        if m in counts:
            out[m] = F
    if 0 in counts:
        raise ValueError("iteration count must be >= 1")
    return out


def iterate_okpoly(P: OKPoly, m: int, zprec: int | None = None, ceiling: int = DEFAULT_CEILING) -> OKPoly:
    if m < 1:
        raise ValueError("iteration count must be >= 1")
    return iterate_chain(P, [m], zprec, ceiling)[m]
