"""Conjugation to the normal form g = gamma z s(z^q) and the iterative residue."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResitUndefined
from .fields import FFElem
from .ramification import TruncPolicy, Verdict, ram_index
from .series import Germ, Series, comp_inverse, compose, from_elements


@dataclass
class NormalForm:
    h: Series
    ghat: Series
    a1: FFElem
    a2: FFElem
    resit: FFElem | None
    gamma: FFElem
    q: int
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .series import to_json as sj

        return {
            "gamma": self.gamma.to_json(),
            "q": self.q,
            "trunc": self.ghat.trunc,
            "h": sj(self.h),
            "ghat": sj(self.ghat),
            "a1": self.a1.to_json(),
            "a2": self.a2.to_json(),
            "resit": None if self.resit is None else self.resit.to_json(),
            "trace": [{"l": l, "alpha": a.to_json()} for l, a in self.trace],
        }


def half_q_plus_one(q: int, spec) -> FFElem:
    """(q+1)/2 as a field element: integer division when q is odd, else divide by 2."""
    if (q + 1) % 2 == 0:
        return spec.from_int((q + 1) // 2)
    return spec.from_int(q + 1) / spec.from_int(2)


def resit_from(a1: FFElem, a2: FFElem, q: int) -> FFElem:
    if not a1:
        raise ResitUndefined("resit needs a_1 != 0, i.e. i_0(g^q) = q")
    ratio = a2 / (a1 * a1)
    if q == 1:
        return a1.spec.one - ratio
    return half_q_plus_one(q, a1.spec) - ratio


def normalize(g: Germ, degree: int | None = None) -> NormalForm:
    """Clear every coefficient off the exponent grid 1 + qZ, one level at a time.

    ``degree`` is the highest exponent kept; the working truncation is
    degree + 1 and defaults to 2q + 2.
    """
    q, gamma, spec = g.q, g.gamma, g.spec
    if degree is None:
        degree = 2 * q + 1
    if degree < 2 * q + 1:
        raise ValueError(f"degree must be >= 2q+1 = {2 * q + 1}")
    N = degree + 1
    s = g.series
    cur = s.with_trunc(N) if (s.exact or s.trunc >= N) else s
    if cur.trunc < N:
        raise ValueError(f"germ known only to truncation {s.trunc}, need {N}")
    cur = Series(spec, cur.coeffs, False)
    hk = from_elements(spec, [0, 1], trunc=N)
    ginv = gamma.inverse()
    trace = []
    for l in range(1, N - 1):
        if l % q == 0:
            continue
        A = cur[l + 1] * ginv
        if not A:
            continue
        alpha = -A / (gamma ** l - 1)
        coeffs = np.zeros((N, spec.k), dtype=np.int64)
        coeffs[1, 0] = 1
        coeffs[l + 1] = alpha.coeffs
        h = Series(spec, coeffs)
        cur = compose(compose(h, cur), comp_inverse(h))
        hk = compose(h, hk)
        trace.append((l, alpha))
    a1 = cur[q + 1] * ginv
    a2 = cur[2 * q + 1] * ginv
    resit = resit_from(a1, a2, q) if a1 else None
    return NormalForm(hk, cur, a1, a2, resit, gamma, q, trace)


def iterative_residue(g: Germ) -> FFElem:
    nf = normalize(g)
    if nf.resit is None:
        raise ResitUndefined("a_1 = 0 after normalization, so i_0(g^q) != q")
    return nf.resit


def characterize_mr(g: Germ) -> Verdict:
    """Decide minimal ramification from i_0 and resit alone."""
    q, p = g.q, g.p
    i0 = ram_index(g, 0, TruncPolicy(trunc=q + 2))
    witness = {"i0": i0}
    if g.exact and g.series.degree() <= 1:
        return Verdict(False, witness, "g^q is the identity")
    if g.series.trunc < 2 * q + 2 and not g.exact:
        return Verdict(None, witness, "germ truncation too small to read a_2")
    nf = normalize(g)
    if nf.resit is None or not (i0.is_exact and i0.value == q):
        witness["resit"] = None
        return Verdict(False, witness, f"i_0 is {i0}, not q = {q}")
    witness["resit"] = nf.resit
    if not nf.resit:
        return Verdict(False, witness, "resit = 0")
    if p == 2 and nf.resit == nf.resit.spec.one:
        return Verdict(False, witness, "resit = 1 in characteristic 2")
    return Verdict(True, witness, "i_0 = q and resit admissible")


