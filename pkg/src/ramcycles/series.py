"""Truncated power series in one variable over F_{p^k}.

A series stores its first N coefficients as an (N, k) integer array.
Terms of degree >= N are unknown unless the series is flagged ``exact``,
in which case it is a polynomial of degree < N and every higher
coefficient is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import FieldMismatch, NonzeroConstantInner, NotInvertible
from .fields import FFElem, FieldSpec, mult_order


@dataclass(frozen=True)
class CensoredNat:
    """A natural number known exactly, known only from below, or infinite."""

    kind: str  # "exact" | "atleast" | "infinite"
    value: int | None = None

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self):
        if self.kind == "exact":
            return str(self.value)
        if self.kind == "atleast":
            return f">={self.value}"
        return "inf"

    def lower(self) -> float:
        """Best known lower bound."""
        return math.inf if self.kind == "infinite" else self.value

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": self.value}


def Exact(n: int) -> CensoredNat:
    return CensoredNat("exact", int(n))


def AtLeast(n: int) -> CensoredNat:
    return CensoredNat("atleast", int(n))


INFINITE = CensoredNat("infinite")


class Series:
    __slots__ = ("spec", "coeffs", "exact")

    def __init__(self, spec: FieldSpec, coeffs, exact: bool = False):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.shape[-1] != spec.k:
            raise ValueError(f"coefficient width {arr.shape[-1]} != k={spec.k}")
        arr = arr % spec.p
        arr.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @property
    def trunc(self) -> int:
        return self.coeffs.shape[0]

    def __len__(self):
        return self.trunc

    def __getitem__(self, i: int) -> FFElem:
        if i >= self.trunc:
            if self.exact:
                return self.spec.zero
            raise IndexError(f"coefficient {i} is beyond truncation {self.trunc}")
        return FFElem(self.spec, tuple(int(c) for c in self.coeffs[i]))

    def __eq__(self, other):
        if not isinstance(other, Series) or other.spec != self.spec:
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return bool(np.array_equal(self.coeffs[:n], other.coeffs[:n]))

    __hash__ = None

    def __repr__(self):
        return f"Series({to_text(self)}, trunc={self.trunc}{', exact' if self.exact else ''})"

    def degree(self) -> int:
        """Index of the last nonzero stored coefficient, -1 for zero."""
        nz = np.nonzero(self.coeffs.any(axis=1))[0]
        return int(nz[-1]) if nz.size else -1

    def with_trunc(self, n: int) -> "Series":
        """Re-truncate; extending is allowed only for exact polynomials."""
        if n <= self.trunc:
            return Series(self.spec, self.coeffs[:n], self.exact and self.degree() < n)
        if not self.exact:
            raise ValueError(f"cannot extend a series known only to degree {self.trunc}")
        pad = np.zeros((n - self.trunc, self.spec.k), dtype=np.int64)
        return Series(self.spec, np.vstack([self.coeffs, pad]), True)

    def to_list(self) -> list:
        return [self[i] for i in range(self.trunc)]


# -- constructors ------------------------------------------------------------

def zero_series(spec: FieldSpec, n: int, exact: bool = False) -> Series:
    return Series(spec, np.zeros((n, spec.k), dtype=np.int64), exact)


def identity(spec: FieldSpec, n: int, exact: bool = False) -> Series:
    a = np.zeros((n, spec.k), dtype=np.int64)
    if n > 1:
        a[1, 0] = 1
    return Series(spec, a, exact)


def from_elements(spec: FieldSpec, elems, trunc: int | None = None, exact: bool = False) -> Series:
    """Build from a list of FFElem or ints (low degree first)."""
    elems = list(elems)
    n = len(elems) if trunc is None else trunc
    a = np.zeros((max(n, len(elems)), spec.k), dtype=np.int64)
    for i, e in enumerate(elems):
        if isinstance(e, FFElem):
            if e.spec != spec:
                raise FieldMismatch(f"{e.spec} vs {spec}")
            a[i] = e.coeffs
        else:
            a[i, 0] = int(e) % spec.p
    s = Series(spec, a, exact)
    return s.with_trunc(n) if n < len(elems) else s


# -- arithmetic --------------------------------------------------------------

def _check(f: Series, g: Series):
    if f.spec != g.spec:
        raise FieldMismatch(f"{f.spec} vs {g.spec}")


def _common_trunc(f: Series, g: Series) -> int:
    if f.exact and g.exact:
        return max(f.trunc, g.trunc)
    if f.exact:
        return g.trunc
    if g.exact:
        return f.trunc
    return min(f.trunc, g.trunc)


def s_add(f: Series, g: Series) -> Series:
    _check(f, g)
    n = _common_trunc(f, g)
    a = np.zeros((n, f.spec.k), dtype=np.int64)
    a[: min(n, f.trunc)] += f.coeffs[:n]
    a[: min(n, g.trunc)] += g.coeffs[:n]
    return Series(f.spec, a, f.exact and g.exact)


def s_neg(f: Series) -> Series:
    return Series(f.spec, -f.coeffs, f.exact)


def s_sub(f: Series, g: Series) -> Series:
    return s_add(f, s_neg(g))


def s_scale(c: FFElem, f: Series) -> Series:
    return Series(f.spec, K.scalar_mul(np.array(c.coeffs), f.coeffs, f.spec.p, f.spec.red_matrix), f.exact)


def s_mul(f: Series, g: Series) -> Series:
    _check(f, g)
    spec = f.spec
    if f.exact and g.exact:
        n = f.trunc + g.trunc - 1
        return Series(spec, K.mulmod(f.coeffs, g.coeffs, spec.p, spec.red_matrix, (n,)), True)
    n = _common_trunc(f, g)
    a = f.coeffs if f.trunc >= n else f.with_trunc(n).coeffs
    b = g.coeffs if g.trunc >= n else g.with_trunc(n).coeffs
    out = K.mulmod(a, b, spec.p, spec.red_matrix, (n,))
    if out.shape[0] < n:
        out = np.vstack([out, np.zeros((n - out.shape[0], spec.k), dtype=np.int64)])
    return Series(spec, out, False)


def shift_down(f: Series, j: int) -> Series:
    """Divide by the monomial z^j; the low j coefficients must vanish."""
    if f.coeffs[:j].any():
        raise ValueError(f"series is not divisible by z^{j}")
    return Series(f.spec, f.coeffs[j:], f.exact)


def shift_up(f: Series, j: int) -> Series:
    pad = np.zeros((j, f.spec.k), dtype=np.int64)
    return Series(f.spec, np.vstack([pad, f.coeffs]), f.exact)


def reciprocal(f: Series) -> Series:
    """1/f for a unit f (c_0 != 0), by Newton iteration inv <- inv(2 - f inv)."""
    c0 = f[0]
    if not c0:
        raise NotInvertible("constant term is zero")
    spec, n = f.spec, f.trunc
    p, red = spec.p, spec.red_matrix
    inv = np.zeros((1, spec.k), dtype=np.int64)
    inv[0] = c0.inverse().coeffs
    m = 1
    while m < n:
        m = min(2 * m, n)
        e = K.mulmod(f.coeffs[:m], inv, p, red, (m,))
        e = -e % p
        e[0, 0] = (e[0, 0] + 2) % p
        inv = K.mulmod(inv, e, p, red, (m,))
        if inv.shape[0] < m:
            inv = np.vstack([inv, np.zeros((m - inv.shape[0], spec.k), dtype=np.int64)])
    return Series(spec, inv, False)


def s_ord(f: Series) -> CensoredNat:
    nz = np.nonzero(f.coeffs.any(axis=1))[0]
    if nz.size:
        return Exact(int(nz[0]))
    if f.exact:
        return INFINITE
    return AtLeast(f.trunc)


# -- composition -------------------------------------------------------------

def _powers(g: np.ndarray, m: int, n: int, spec: FieldSpec) -> np.ndarray:
    """Array of g^0 .. g^{m-1} truncated at n, shape (m, n, k)."""
    out = np.zeros((m, n, spec.k), dtype=np.int64)
    out[0, 0, 0] = 1
    if m > 1:
        out[1, : g.shape[0]] = g[:n]
    for i in range(2, m):
        out[i] = K.mulmod(out[i - 1], g, spec.p, spec.red_matrix, (n,))
    return out


def _compose_arrays(f: np.ndarray, g: np.ndarray, n: int, spec: FieldSpec) -> np.ndarray:
    """f(g) mod z^n for coefficient arrays with g[0] = 0 (Brent-Kung blocking)."""
    p, red = spec.p, spec.red_matrix
    f = f[:n]
    g = g[:n]
    if g.shape[0] < n:
        g = np.vstack([g, np.zeros((n - g.shape[0], spec.k), dtype=np.int64)])
    nf = f.shape[0]
    m = max(1, math.isqrt(max(nf - 1, 1)) + 1)
    pw = _powers(g, m + 1, n, spec)
    gm = pw[m]
    blocks = -(-nf // m)
    F = np.zeros((blocks * m, spec.k), dtype=np.int64)
    F[:nf] = f
    F = F.reshape(blocks, m, spec.k)
    # B[j] = sum_i F[j, i] g^i
    B = K.matmul_field(F, pw[:m], p, red)
    acc = B[blocks - 1]
    for j in range(blocks - 2, -1, -1):
        acc = (K.mulmod(acc, gm, p, red, (n,)) + B[j]) % p
    return acc


def compose(f: Series, g: Series) -> Series:
    """f o g, truncated at the tighter of the two truncations."""
    _check(f, g)
    if g.coeffs.shape[0] and g.coeffs[0].any():
        raise NonzeroConstantInner("inner series must have zero constant term")
    spec = f.spec
    if f.exact and g.exact:
        df, dg = max(f.degree(), 0), max(g.degree(), 0)
        n = df * dg + 1
        return Series(spec, _compose_arrays(f.coeffs, g.coeffs, n, spec), True)
    n = _common_trunc(f, g)
    fa = f.coeffs if f.trunc >= n else f.with_trunc(n).coeffs
    ga = g.coeffs if g.trunc >= n else g.with_trunc(n).coeffs
    return Series(spec, _compose_arrays(fa, ga, n, spec), False)


def iterate(g, m: int) -> Series:
    """m-fold self-composition g^m, truncated at trunc(g).

    Uses binary powering; all factors are powers of g so they commute.
    Exact linear germs stay exact, everything else becomes a truncated series.
    """
    s = g.series if isinstance(g, Germ) else g
    if m < 0:
        raise ValueError("iteration count must be >= 0")
    n = s.trunc
    linear = s.exact and s.degree() <= 1
    base = s if linear else Series(s.spec, s.coeffs, False)
    result = None
    while m:
        if m & 1:
            result = base if result is None else compose(result, base)
        m >>= 1
        if m:
            base = compose(base, base)
    if result is None:
        return identity(s.spec, n, linear)
    return result.with_trunc(n) if result.trunc != n else result


def comp_inverse(h: Series) -> Series:
    """Compositional inverse, solved one degree at a time."""
    if h.trunc < 2 or not h.coeffs[1].any():
        raise NotInvertible("linear coefficient is zero")
    if h.coeffs[0].any():
        raise NonzeroConstantInner("series must have zero constant term")
    spec, n = h.spec, h.trunc
    c1inv = h[1].inverse()
    k = np.zeros((n, spec.k), dtype=np.int64)
    k[1] = c1inv.coeffs
    for d in range(2, n):
        comp = _compose_arrays(h.coeffs[: d + 1], k[: d + 1], d + 1, spec)
        e = FFElem(spec, tuple(int(c) for c in comp[d]))
        if e:
            k[d] = ((FFElem(spec, tuple(int(c) for c in k[d])) - e * c1inv).coeffs)
    return Series(spec, k, False)


# -- germs -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Germ:
    series: Series
    gamma: FFElem
    q: int

    @property
    def spec(self) -> FieldSpec:
        return self.series.spec

    @property
    def p(self) -> int:
        return self.series.spec.p

    @property
    def exact(self) -> bool:
        return self.series.exact

    def with_trunc(self, n: int) -> "Germ":
        return Germ(self.series.with_trunc(n), self.gamma, self.q)


def make_germ(s: Series, q: int | None = None) -> Germ:
    """Validate c_0 = 0, c_1 != 0 and derive q from the multiplier."""
    from .errors import OrderMismatch

    if s.trunc < 2:
        raise ValueError("a germ needs truncation >= 2")
    if s.coeffs[0].any():
        raise ValueError("a germ needs a zero constant term")
    gamma = s[1]
    if not gamma:
        raise ValueError("a germ needs a nonzero linear coefficient")
    qq = mult_order(gamma)
    if q is not None and q != qq:
        raise OrderMismatch(f"supplied q={q} but the multiplier {gamma} has order {qq}")
    return Germ(s, gamma, qq)


# -- text --------------------------------------------------------------------

def _elem_text(e: FFElem) -> str:
    if e.spec.k == 1:
        return str(e.coeffs[0])
    inner = []
    for i, c in enumerate(e.coeffs):
        if c:
            mono = "x" if i == 1 else f"x^{i}"
            inner.append(str(c) if i == 0 else mono if c == 1 else f"{c}*{mono}")
    return "(" + "+".join(inner) + ")"


def to_text(s: Series, var: str = "z") -> str:
    terms = []
    for i in range(s.trunc):
        e = s[i]
        if not e:
            continue
        c = _elem_text(e)
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            terms.append(c)
        elif c == "1":
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


def to_json(s: Series) -> list:
    return [e.to_json() for e in s.to_list()]
