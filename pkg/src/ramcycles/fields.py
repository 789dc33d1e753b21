"""Finite fields F_{p^k} in the power basis of a generator ``x``.

Elements are immutable.  The prime field is the case ``k == 1`` and is
stored with the modulus ``x`` so that every element is a length-1 tuple.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import FieldMismatch, NoDefaultModulus, NotPrime, ReducibleModulus, ZeroElement

# Low-to-high coefficients of monic irreducible moduli.  (2, 4) is the
# 5th cyclotomic polynomial so that ``x`` has order 5 in F_16.
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 1, 1, 1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (2, 0, 0, 1, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 0, 1, 1),
    (5, 4): (2, 0, 2, 1, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 1, 1, 1),
    (7, 4): (3, 0, 1, 1, 1),
    (11, 2): (2, 4, 1),
    (11, 3): (3, 0, 1, 1),
    (11, 4): (2, 0, 0, 4, 1),
    (13, 2): (2, 1, 1),
    (13, 3): (2, 0, 1, 1),
    (13, 4): (2, 0, 2, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- dense polynomials over F_p as lists, low degree first ------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _pmod(r, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Frobenius test: f | x^{p^k} - x and gcd(x^{p^j} - x, f) = 1 for proper j | k."""
    f = [c % p for c in modulus]
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]

    def frob(j):
        r = _ppowmod(x, p ** j, f, p)
        r = r + [0] * (2 - len(r))
        r[1] = (r[1] - 1) % p
        return _trim(r)

    if frob(k):
        return False
    for j in divisors(k):
        if j < k and len(_pgcd(f, frob(j), p)) > 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.k}[{self.modulus}]"

    @property
    def order(self) -> int:
        return self.p ** self.k

    @cached_property
    def red_matrix(self) -> np.ndarray:
        """Row j holds the coordinates of x^j, for 0 <= j <= 2k-2."""
        k, p = self.k, self.p
        rows = np.zeros((max(2 * k - 1, 1), k), dtype=np.int64)
        cur = [1] + [0] * (k - 1)
        for j in range(2 * k - 1):
            rows[j] = cur
            # multiply by x, reduce with x^k = -sum(m_i x^i)
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(k):
                cur[i] = (cur[i] - top * self.modulus[i]) % p
        return rows

    def element(self, coeffs) -> "FFElem":
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.k:
            return FFElem(self, tuple(int(c) for c in self.reduce_array(np.array(coeffs, dtype=np.int64))))
        return FFElem(self, coeffs + (0,) * (self.k - len(coeffs)))

    def reduce_array(self, a: np.ndarray) -> np.ndarray:
        """Reduce trailing axis of polynomial coordinates (any length) into k coordinates."""
        a = np.asarray(a, dtype=np.int64) % self.p
        n = a.shape[-1]
        if n <= self.k:
            pad = [(0, 0)] * (a.ndim - 1) + [(0, self.k - n)]
            return np.pad(a, pad)
        if n <= 2 * self.k - 1:
            return (a @ self.red_matrix[:n]) % self.p
        # long inputs only arise from parsing; fold from the top
        a = a.copy()
        for j in range(n - 1, self.k - 1, -1):
            top = a[..., j].copy()
            a[..., j] = 0
            for i in range(self.k):
                a[..., j - self.k + i] = (a[..., j - self.k + i] - top * self.modulus[i]) % self.p
        return a[..., : self.k] % self.p

    def from_int(self, n: int) -> "FFElem":
        return FFElem(self, (n % self.p,) + (0,) * (self.k - 1))

    @property
    def zero(self) -> "FFElem":
        return self.from_int(0)

    @property
    def one(self) -> "FFElem":
        return self.from_int(1)

    @property
    def gen(self) -> "FFElem":
        if self.k == 1:
            raise ValueError("the prime field has no generator symbol x")
        return self.element((0, 1))

    def elements(self):
        """All field elements in lexicographic coordinate order."""
        for n in range(self.order):
            coeffs = []
            for _ in range(self.k):
                n, r = divmod(n, self.p)
                coeffs.append(r)
            yield FFElem(self, tuple(coeffs))

    def nonzero_elements(self):
        return (e for e in self.elements() if e)

    def random(self, rng: _random.Random, nonzero: bool = False) -> "FFElem":
        while True:
            e = FFElem(self, tuple(rng.randrange(self.p) for _ in range(self.k)))
            if e or not nonzero:
                return e

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


def ff_make(p: int, k: int = 1, modulus=None) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        if k == 1:
            modulus = (0, 1)
        elif (p, k) in DEFAULT_MODULI:
            modulus = DEFAULT_MODULI[(p, k)]
        else:
            raise NoDefaultModulus(f"no built-in modulus for p={p}, k={k}")
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise ValueError(f"modulus must be monic of degree {k}: {modulus}")
    if not is_irreducible(modulus, p):
        raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
    return FieldSpec(p, k, modulus)


@dataclass(frozen=True)
class FFElem:
    spec: FieldSpec
    coeffs: tuple = field()

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.spec != self.spec:
                raise FieldMismatch(f"{self.spec} vs {other.spec}")
            return other
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __bool__(self):
        return any(self.coeffs)

    def __int__(self):
        if self.spec.k == 1:
            return self.coeffs[0]
        raise TypeError("extension field element is not an integer")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.spec.p
        return FFElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FFElem(self.spec, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        if spec.k == 1:
            return FFElem(spec, (self.coeffs[0] * other.coeffs[0] % spec.p,))
        prod = [0] * (2 * spec.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        red = spec.red_matrix
        out = [0] * spec.k
        for j, c in enumerate(prod):
            if c:
                row = red[j]
                for i in range(spec.k):
                    out[i] += c * int(row[i])
        return FFElem(spec, tuple(c % spec.p for c in out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FFElem":
        if not self:
            raise ZeroElement("0 has no inverse")
        return self ** (self.spec.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __repr__(self):
        return to_text(self)

    def to_json(self):
        return int(self) if self.spec.k == 1 else to_text(self)


def to_text(e: FFElem) -> str:
    """Integers for the prime field, ``poly:c0+c1*x+...`` otherwise."""
    if e.spec.k == 1:
        return str(e.coeffs[0])
    terms = []
    for i, c in enumerate(e.coeffs):
        if c:
            terms.append(str(c) if i == 0 else f"{c}*x" if i == 1 else f"{c}*x^{i}")
    return "poly:" + ("+".join(terms) if terms else "0")


def mult_order(x: FFElem) -> int:
    """Least q >= 1 with x^q = 1."""
    if not x:
        raise ZeroElement("the zero element has no multiplicative order")
    n = x.spec.order - 1
    q = n
    for r in factorize(n):
        while q % r == 0 and x ** (q // r) == x.spec.one:
            q //= r
    return q


def element_with_order(spec: FieldSpec, q: int) -> FFElem:
    """Smallest (lexicographic) element of exact multiplicative order q."""
    for e in spec.nonzero_elements():
        if mult_order(e) == q:
            return e
    raise ValueError(f"{spec} has no element of order {q}")
