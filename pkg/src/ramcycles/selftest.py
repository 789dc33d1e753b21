"""The acceptance checks, runnable from the CLI (`ramcycles selftest`) or pytest.

Each check returns a CheckResult; ``run_all`` times them against their budgets.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .cycles import appendix_check, cycle_report
from .fields import FieldSpec, ff_make, mult_order
from .normal_form import characterize_mr, normalize
from .okpoly import OKPoly
from .parsing import parse_germ, parse_map, parse_padic, parse_scalar
from .ramification import (
    TruncPolicy,
    default_trunc,
    is_minimally_ramified,
    keating_delta,
    lower_bound,
    ram_index,
    ram_profile,
)
from .series import Germ, Series, comp_inverse, compose, identity, iterate, make_germ, s_add, s_scale, s_sub
from .valued import PadicTrunc, RationalExact, bound_valuation


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.budget:g}s)"

    def to_row(self) -> dict:
        return {"criterion": self.number, "pass": self.passed, "seconds": self.seconds, "detail": self.detail}


# -- random corpus -------------------------------------------------------------

# q -> smallest k with q | p^k - 1, for q <= 6
QCHOICES = {
    2: {1: 1, 3: 2, 5: 4},
    3: {1: 1, 2: 1, 4: 2},
    5: {1: 1, 2: 1, 4: 1, 3: 2, 6: 2},
    7: {1: 1, 2: 1, 3: 1, 6: 1},
}


def random_gamma(rng: random.Random, spec: FieldSpec, q: int):
    e = (spec.p ** spec.k - 1) // q
    while True:
        x = spec.random(rng, nonzero=True) ** e
        if mult_order(x) == q:
            return x


def random_germ(rng: random.Random, p: int, q: int | None = None, degree: int | None = None) -> Germ:
    """gamma z + random terms up to ``degree`` over the smallest field holding order q."""
    if q is None:
        q = rng.choice(sorted(QCHOICES[p]))
    spec = ff_make(p, QCHOICES[p][q])
    gamma = random_gamma(rng, spec, q)
    D = degree if degree is not None else rng.randint(2, 2 * q + 2)
    a = np.array([[rng.randrange(p) for _ in range(spec.k)] for _ in range(D + 1)], dtype=np.int64)
    a[0] = 0
    a[1] = gamma.coeffs
    if not a[2:].any():
        a[2, 0] = 1
    return make_germ(Series(spec, a, exact=True))


def corpus(seed: int, p: int, size: int) -> list:
    rng = random.Random(f"{seed}:{p}")
    return [random_germ(rng, p) for _ in range(size)]


def random_conjugator(rng: random.Random, spec: FieldSpec, N: int) -> Series:
    a = np.array([[rng.randrange(spec.p) for _ in range(spec.k)] for _ in range(N)], dtype=np.int64)
    a[0] = 0
    a[1] = spec.random(rng, nonzero=True).coeffs
    return Series(spec, a)


def conjugate(g: Germ, h: Series) -> Germ:
    N = h.trunc
    s = g.series.with_trunc(N) if g.exact else g.series
    return make_germ(compose(compose(h, Series(g.spec, s.coeffs)), comp_inverse(h)))


def delta_oracle(g: Germ, n: int, m: int, N: int) -> Series:
    """Delta_m as sum_j (-1)^(m-1-j) C(m-1, j) (G^(j+1) - G^j), from plain iterates."""
    G = iterate(g.series.with_trunc(N), g.q * g.p ** n)
    spec = g.spec
    total = Series(spec, np.zeros((N, spec.k), dtype=np.int64))
    prev = identity(spec, N)
    for j in range(m):
        nxt = compose(G, prev) if j else G
        c = spec.from_int((-1) ** (m - 1 - j) * comb(m - 1, j))
        total = s_add(total, s_scale(c, s_sub(nxt, prev)))
        prev = nxt
    return total


# -- the ten checks ------------------------------------------------------------


def check_1() -> CheckResult:
    F = ff_make(7)
    g2, g4 = parse_germ("2*z+z^2", F), parse_germ("4*z+z^2", F)
    a, b = is_minimally_ramified(g2), is_minimally_ramified(g4)
    ok = a.value is False and b.value is True and g2.q == 3 and g4.q == 3
    return CheckResult(1, "F_7 quadratics", ok,
                       f"mr(2z+z^2)={a.value}, mr(4z+z^2)={b.value}, orders {g2.q},{g4.q}", budget=1)


def check_2() -> CheckResult:
    F = ff_make(11)
    g = parse_germ("-1*z+z^2", F)
    i0 = ram_index(g, 0)
    i1 = ram_index(g, 1, TruncPolicy(trunc=60))
    ok = (i0.is_exact and i0.value == 2 and i1.is_exact and i1.value > 24
          and (i1.value - i0.value) % 22 == 0)
    return CheckResult(2, "F_11 example", ok, f"i_0={i0}, i_1={i1} at truncation 60", budget=5)


def check_3() -> CheckResult:
    bad = []
    for p in (3, 5, 7, 11, 13):
        g = parse_germ("z+z^2", ff_make(p))
        mr = is_minimally_ramified(g)
        prof = ram_profile(g, 2)
        want = [(p ** (n + 1) - 1) // (p - 1) for n in range(3)]
        if mr.value is not True or prof.values() != want:
            bad.append(f"p={p}: mr={mr.value} entries={prof.values()}")
    return CheckResult(3, "z+z^2 minimally ramified", not bad, "; ".join(bad) or "p in {3,5,7,11,13}", budget=30)


def check_4() -> CheckResult:
    out, ok = [], True
    for (k, text, q) in ((4, "x*z*(1+z^5)", 5), (2, "x*z*(1+z^3+z^6)", 3)):
        F = ff_make(2, k)
        g = parse_germ(text, F, q=q)
        i1 = ram_index(g, 1)
        mr_cut = ram_index(g, 2, TruncPolicy(trunc=lower_bound(q, 2, 2) + 2))
        full = ram_index(g, 2)
        good = (i1.is_exact and i1.value == 3 * q and not mr_cut.is_exact and mr_cut.lower() > 7 * q
                and full.is_exact and full.value > 7 * q)
        ok &= good
        out.append(f"F_{2 ** k}: i_1={i1}, i_2={mr_cut} (full {full})")
    return CheckResult(4, "order-q reproductions in char 2", ok, "; ".join(out), budget=60)


def check_5(seed: int = 0, size: int = 300) -> CheckResult:
    viol, n_delta = [], 0
    for p in (2, 3, 5, 7):
        for idx, g in enumerate(corpus(seed, p, size)):
            prof = ram_profile(g, 2)
            for n, v in enumerate(prof.entries):
                if v.is_exact and v.value < lower_bound(g.q, p, n):
                    viol.append(f"p={p}#{idx}: i_{n}={v} below bound")
            for k, v in prof.flags.items():
                if v is False:
                    viol.append(f"p={p}#{idx}: {k}")
            if idx % 10 == 0:
                N = 4 * g.q + 6
                for m in (1, 2, 3):
                    n_delta += 1
                    if keating_delta(g, 0, m, N) != delta_oracle(g, 0, m, N):
                        viol.append(f"p={p}#{idx}: keating_delta m={m}")
    detail = f"{4 * size} germs, {n_delta} delta comparisons, {len(viol)} violations"
    return CheckResult(5, "ramification laws on random germs", not viol, detail, budget=300,
                       data={"violations": viol[:20]})


def check_6(seed: int = 0, size: int = 300, conjugators: int = 50) -> CheckResult:
    dis = []
    for p in (2, 3, 5, 7):
        for idx, g in enumerate(corpus(seed, p, size)):
            a, b = characterize_mr(g), is_minimally_ramified(g)
            if a.value != b.value:
                dis.append(f"p={p}#{idx}: characterize={a.value} ratio={b.value}")
    rng = random.Random(f"{seed}:conj")
    families = 0
    for p in (2, 3, 5, 7):
        for q in sorted(QCHOICES[p]):
            g = random_germ(rng, p, q, degree=2 * q + 1)
            base = normalize(g)
            if base.resit is None:
                continue
            families += 1
            N = 2 * q + 2
            for _ in range(conjugators):
                h = random_conjugator(rng, g.spec, N)
                r = normalize(conjugate(g, h)).resit
                if r != base.resit:
                    dis.append(f"p={p} q={q}: resit {base.resit} -> {r}")
    detail = f"{4 * size} germs, {families} conjugacy families x {conjugators}, {len(dis)} disagreements"
    return CheckResult(6, "two characterizations agree", not dis, detail, budget=300, data={"disagreements": dis[:20]})


def _map(text: str, spec: FieldSpec, lam: str) -> OKPoly:
    return OKPoly.from_ratfuncs(parse_map(text, spec, parse_scalar(lam, spec)), spec)


def check_7() -> CheckResult:
    F = ff_make(3)
    rep = cycle_report(_map("l*z*(1+z)", F, "1+t"), 2)
    ok, out = True, []
    for lv in rep.levels[1:]:
        good = (lv.verdict == "Optimal" and lv.new_mass == {Fraction(2, 3): lv.period}
                and lv.positive_mass == lv.i_n.value + 1 and lv.positive_mass in (5, 14))
        ok &= good
        out.append(f"n={lv.n} {lv.verdict} mass={lv.positive_mass}")
    return CheckResult(7, "optimal cycles, p=3", ok, ", ".join(out), budget=120)


def check_8() -> CheckResult:
    F = ff_make(2)
    conc = cycle_report(_map("l*z*(1+z^2)", F, "1+t"), 2)
    gen = cycle_report(_map("l*z*(1+t*z+z^2)", F, "1+t"), 2)
    lv0 = set(conc.levels[0].masses)
    ok = all(lv.verdict == "Concentration" and set(lv.new_mass) <= lv0 for lv in conc.levels[1:])
    ok &= all(lv.verdict == "Optimal" for lv in gen.levels[1:])
    detail = f"Q=lz(1+z^2): {conc.verdicts()[1:]}; Q=lz(1+tz+z^2): {gen.verdicts()[1:]}"
    return CheckResult(8, "concentration vs genericity, p=2", ok, detail, budget=300)


def check_9() -> CheckResult:
    ok, out = True, []
    for p in (2, 3):
        F = ff_make(p)
        S = OKPoly.from_ratfuncs(parse_map("1+z", F), F)
        from .cycles import power_map

        rows, _ = appendix_check(power_map(parse_scalar("1+t", F), S, p), 3)
        vals = [r.i_n.value if r.i_n.is_exact else None for r in rows]
        good = vals == [p ** (n + 1) for n in range(4)] and all(r.passed for r in rows)
        ok &= good
        out.append(f"p={p}: {vals}")
    return CheckResult(9, "multiplicity law", ok, "; ".join(out), budget=60)


def check_10() -> CheckResult:
    F = ff_make(3)
    lam = RationalExact(parse_scalar("1+t", F))
    char_p = [bound_valuation(lam, 1, n) for n in range(1, 5)]
    ok = all(b == Fraction(2, 3) for b in char_p)
    padic_ok = True
    for p in (3, 5, 7):
        lp = PadicTrunc.from_fraction(p, 12, parse_padic("1+p", p))
        padic_ok &= all(bound_valuation(lp, 1, n) == Fraction(1, p ** n) for n in range(5))
    return CheckResult(10, "bound valuations", ok and padic_ok,
                       f"char 3: {[str(b) for b in char_p]}; p-adic 1/p^n for p in 3,5,7: {padic_ok}", budget=1)


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


def run_check(fn, **kw) -> CheckResult:
    t = time.perf_counter()
    try:
        res = fn(**kw)
    except Exception as exc:  # report, don't crash the whole suite
        res = CheckResult(CHECKS.index(fn) + 1, fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t
    if res.budget and res.seconds > res.budget:
        res.passed = False
        res.detail += f"; over budget ({res.seconds:.1f}s > {res.budget:g}s)"
    return res


def run_all(seed: int = 0, only: list | None = None) -> list:
    out = []
    for i, fn in enumerate(CHECKS, 1):
        if only and i not in only:
            continue
        kw = {"seed": seed} if fn in (check_5, check_6) else {}
        out.append(run_check(fn, **kw))
    return out
