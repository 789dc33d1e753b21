"""Lower ramification numbers i_n(g^q) and the MR / AMR decisions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CharMismatch, TruncationTooSmall
from .series import (
    INFINITE,
    AtLeast,
    CensoredNat,
    Exact,
    Germ,
    Series,
    compose,
    identity,
    iterate,
    s_ord,
    s_sub,
    shift_down,
)


def lower_bound(q: int, p: int, n: int) -> int:
    """q(p^{n+1}-1)/(p-1), the smallest possible i_n(g^q)."""
    return q * (p ** (n + 1) - 1) // (p - 1)


def default_trunc(q: int, p: int, n: int) -> int:
    return lower_bound(q, p, n) + q * p ** (n + 1) + 2


@dataclass(frozen=True)
class TruncPolicy:
    """How many coefficients to carry.

    ``trunc`` overrides the default level-dependent truncation.  With
    ``adaptive`` a censored answer on an exact polynomial germ doubles the
    truncation until it resolves or ``ceiling`` is reached.  ``strict``
    turns a remaining censored answer into TruncationTooSmall.
    """

    trunc: int | None = None
    adaptive: bool = False
    ceiling: int = 20000
    strict: bool = False

    def to_json(self) -> dict:
        return {"trunc": self.trunc, "adaptive": self.adaptive, "ceiling": self.ceiling}


DEFAULT_POLICY = TruncPolicy()


def _is_linear_exact(g: Germ) -> bool:
    return g.exact and g.series.degree() <= 1


def _working(g: Germ, n_req: int) -> Series:
    s = g.series
    if s.exact:
        return s.with_trunc(n_req)
    return s.with_trunc(min(n_req, s.trunc))


def level_iterates(g: Germ, nmax: int, N: int) -> list[Series]:
    """[g^q, g^{qp}, ..., g^{qp^nmax}] truncated at N (or the germ's truncation)."""
    s = _working(g, N)
    G = iterate(s, g.q)
    out = [G]
    for _ in range(nmax):
        G = iterate(G, g.p)
        out.append(G)
    return out


def index_of(G: Series) -> CensoredNat:
    """ord((G(z) - z)/z) for an iterate G."""
    d = s_sub(G, identity(G.spec, G.trunc))
    return s_ord(shift_down(d, 1))


def ram_index(g: Germ, n: int, policy: TruncPolicy = DEFAULT_POLICY) -> CensoredNat:
    if n < 0:
        raise ValueError("n must be >= 0")
    if _is_linear_exact(g):
        return INFINITE
    N = policy.trunc or default_trunc(g.q, g.p, n)
    while True:
        G = iterate(_working(g, N), g.q * g.p ** n)
        val = index_of(G)
        if val.is_exact or not (policy.adaptive and g.exact) or N >= policy.ceiling:
            break
        N = min(2 * N, policy.ceiling)
    if policy.strict and not val.is_exact:
        raise TruncationTooSmall(f"i_{n} censored at truncation {G.trunc}: {val}")
    return val


@dataclass
class Verdict:
    value: bool | None
    witness: dict = field(default_factory=dict)
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": {str(k): (v.to_json() if hasattr(v, "to_json") else v) for k, v in self.witness.items()},
            "reason": self.reason,
        }


def is_minimally_ramified(g: Germ) -> Verdict:
    """Check i_n(g^q) = q(p^{n+1}-1)/(p-1) for n = 0, 1 (and n = 2 when p = 2)."""
    p, q = g.p, g.q
    if _is_linear_exact(g):
        return Verdict(False, {0: INFINITE}, "g^q is the identity")
    top = 2 if p == 2 else 1
    witness = {}
    N = lower_bound(q, p, 0) + 2
    G = iterate(_working(g, N), q)
    for n in range(top + 1):
        if n:
            N = lower_bound(q, p, n) + 2
            G = iterate(_working(g, N), q * p ** n)
        val = index_of(G)
        witness[n] = val
        b = lower_bound(q, p, n)
        if val.is_exact and val.value == b:
            continue
        if val.is_exact or val.lower() > b:
            return Verdict(False, witness, f"i_{n} is {val}, not the minimum {b}")
        return Verdict(None, witness, f"i_{n} censored at {val}; germ truncation too small")
    return Verdict(True, witness, "equality at every checked level")


def is_almost_minimally_ramified(g: Germ) -> Verdict:
    """p = 2 only: true iff i_0(g^q) = 2q; witness carries i_0, i_1, i_2."""
    p, q = g.p, g.q
    if p != 2:
        raise CharMismatch("almost minimal ramification is defined in characteristic 2")
    if _is_linear_exact(g):
        return Verdict(False, {0: INFINITE}, "g^q is the identity")
    Gs = level_iterates(g, 2, 8 * q + 2)
    witness = {n: index_of(G) for n, G in enumerate(Gs)}
    i0 = witness[0]
    if i0.is_exact:
        ok = i0.value == 2 * q
        return Verdict(ok, witness, f"i_0 = {i0.value}, 2q = {2 * q}")
    if i0.lower() > 2 * q:
        return Verdict(False, witness, f"i_0 {i0} exceeds 2q")
    return Verdict(None, witness, "i_0 censored; germ truncation too small")


def keating_delta(g: Germ, n: int, m: int, trunc: int | None = None) -> Series:
    """Delta_1 = G - z with G = g^{qp^n}; Delta_m = Delta_{m-1} o G - Delta_{m-1}."""
    if m < 1:
        raise ValueError("m must be >= 1")
    N = trunc or (g.series.trunc if not g.exact else default_trunc(g.q, g.p, n))
    G = iterate(_working(g, N), g.q * g.p ** n)
    delta = s_sub(G, identity(G.spec, G.trunc))
    for _ in range(m - 1):
        delta = s_sub(compose(delta, G), delta)
    return delta


# -- profiles ----------------------------------------------------------------

def _flags(entries: list[CensoredNat], p: int, q: int) -> dict:
    sen = low = kea = None

    def merge(cur, ok):
        return ok if cur is None else (cur and ok)

    for n, v in enumerate(entries):
        if v.is_exact:
            low = merge(low, v.value >= lower_bound(q, p, n))
            if n == 0:
                sen = merge(sen, v.value % q == 0)
        if n == 0:
            continue
        u = entries[n - 1]
        if u.is_exact and v.is_exact:
            sen = merge(sen, (v.value - u.value) % (q * p ** n) == 0)
        if u.is_exact and v.kind != "infinite":
            if u.value % p == 0:
                if v.is_exact:
                    kea = merge(kea, v.value == p * u.value)
                else:
                    kea = merge(kea, v.value <= p * u.value)
            elif v.is_exact:
                kea = merge(kea, v.value >= p * u.value + q)
    return {"sen_ok": sen, "lower_bound_ok": low, "keating_ok": kea}


@dataclass
class RamificationProfile:
    gamma: object
    q: int
    p: int
    entries: list
    flags: dict
    verdict: str
    trunc: int
    mr: Verdict | None = None
    amr: Verdict | None = None

    def values(self) -> list:
        return [e.value if e.is_exact else None for e in self.entries]

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "q": self.q,
            "p": self.p,
            "entries": [{"n": n, **e.to_json()} for n, e in enumerate(self.entries)],
            "flags": self.flags,
            "verdict": self.verdict,
            "trunc": self.trunc,
        }


def ram_profile(g: Germ, nmax: int, policy: TruncPolicy = DEFAULT_POLICY) -> RamificationProfile:
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    p, q = g.p, g.q
    if _is_linear_exact(g):
        entries = [INFINITE] * (nmax + 1)
        N = 2
    else:
        N = policy.trunc or default_trunc(q, p, nmax)
        while True:
            Gs = level_iterates(g, nmax, N)
            entries = [index_of(G) for G in Gs]
            done = all(e.is_exact for e in entries)
            if done or not (policy.adaptive and g.exact) or N >= policy.ceiling:
                break
            N = min(2 * N, policy.ceiling)
        N = Gs[0].trunc
    flags = _flags(entries, p, q)
    mr = is_minimally_ramified(g)
    amr = is_almost_minimally_ramified(g) if p == 2 else None
    if mr.value:
        verdict = "MR"
    elif amr is not None and amr.value:
        verdict = "AMR"
    elif mr.value is None or (amr is not None and amr.value is None):
        verdict = "Indeterminate"
    else:
        verdict = "Neither"
    return RamificationProfile(g.gamma, q, p, entries, flags, verdict, N, mr, amr)


def sen_and_keating_violations(entries: list[CensoredNat], p: int, q: int) -> list[str]:
    """Human-readable list of failed checks (empty when consistent)."""
    flags = _flags(entries, p, q)
    return [k for k, v in flags.items() if v is False]
