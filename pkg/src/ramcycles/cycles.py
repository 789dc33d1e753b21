"""Newton polygons of iterates and the optimal-cycle / concentration verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeCeiling, IndeterminatePolygon, IndeterminateValuation
from .fields import mult_order
from .okpoly import DEFAULT_CEILING, OKPoly, iterate_chain, iterate_okpoly
from .ramification import TruncPolicy, ram_profile
from .ratpoly import zp_derivative, zp_divmod, zp_gcd, zp_trim
from .series import CensoredNat, Exact, make_germ
from .valued import bound_valuation, lambda_power_val

EXACT_ROOT_CEILING = 100  # largest degree handed to exact gcd computations


@dataclass
class NewtonPolygon:
    segments: list  # (slope: Fraction, length: int), slopes increasing
    z_order: int
    degree: int
    windowed: bool = False

    def root_masses(self, positive_only: bool = True) -> dict:
        """{root valuation: multiplicity} read off the segments (z = 0 excluded)."""
        out: dict = {}
        for s, L in self.segments:
            v = -s
            if positive_only and v <= 0:
                continue
            out[v] = out.get(v, 0) + L
        return out

    def positive_mass(self) -> int:
        """Number of roots in m_K with multiplicity, z = 0 included."""
        return self.z_order + sum(self.root_masses().values())

    def to_json(self) -> dict:
        return {
            "segments": [[f"{s.numerator}/{s.denominator}", L] for s, L in self.segments],
            "z_order": self.z_order,
            "degree": self.degree,
            "windowed": self.windowed,
        }


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it is on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def polygon_from_vals(vals: list, windowed: bool = False, degree: int | None = None) -> NewtonPolygon:
    """Newton polygon from coefficient valuations.

    ``vals[i]`` is an int, None or an infinite CensoredNat for an exact zero,
    or AtLeast(c) for a censored coefficient.  A windowed list certifies
    only the part up to the first unit coefficient.
    """

    def kind(v):
        if v is None or (isinstance(v, CensoredNat) and v.kind == "infinite"):
            return "zero"
        if isinstance(v, CensoredNat):
            return "censored"
        return "exact"

    kinds = [kind(v) for v in vals]
    z_order = next((i for i, k in enumerate(kinds) if k != "zero"), None)
    if z_order is None:
        raise IndeterminatePolygon("no nonzero coefficient")
    if kinds[z_order] == "censored":
        raise IndeterminatePolygon(f"lowest coefficient z^{z_order} is censored")
    if windowed:
        end = next((i for i in range(z_order, len(vals)) if kinds[i] == "exact" and vals[i] == 0), None)
        if end is None:
            raise IndeterminatePolygon("no unit coefficient inside the z-window")
    else:
        end = max(i for i, k in enumerate(kinds) if k != "zero")
        if kinds[end] == "censored":
            raise IndeterminatePolygon("leading coefficient is censored")
    pts = [(i, Fraction(vals[i])) for i in range(z_order, end + 1) if kinds[i] == "exact"]
    hull = _lower_hull(pts)
    # censored points only constrain: the hull must not lie above their cutoff
    for i in range(z_order, end + 1):
        if kinds[i] != "censored":
            continue
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= i <= x2:
                h = y1 + (y2 - y1) * Fraction(i - x1, x2 - x1)
                if h > vals[i].value:
                    raise IndeterminatePolygon(f"censored z^{i} (val >= {vals[i].value}) could undercut the hull")
                break
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(segs, z_order, end if degree is None else degree, windowed)


def newton_polygon(F) -> NewtonPolygon:
    """Newton polygon of an OKPoly, or of a list of RatFunc coefficients."""
    if isinstance(F, OKPoly):
        return polygon_from_vals(F.coeff_vals(), windowed=F.zprec is not None,
                                 degree=None if F.zprec is not None else F.degree())
    return polygon_from_vals([c.val() for c in F])


def multiple_root_valuations(F: OKPoly) -> dict:
    """Valuations (with multiplicity in gcd(F, F')) of multiple roots of F in m_K minus 0."""
    zp = F.to_zpoly()
    d = zp_gcd(zp, zp_derivative(zp, F.spec), F.spec)
    if len(d) <= 1:
        return {}
    return newton_polygon(d).root_masses()


# -- reports -------------------------------------------------------------------


@dataclass
class LevelRecord:
    n: int
    period: int
    i_n: CensoredNat
    increment: CensoredNat | None
    bound: Fraction | None
    masses: dict
    new_mass: dict
    positive_mass: int | None
    simplicity: str
    checks: dict
    verdict: str
    notes: list = field(default_factory=list)
    polygon: NewtonPolygon | None = None

    def to_json(self) -> dict:
        def fr(x):
            return None if x is None else f"{x.numerator}/{x.denominator}"

        return {
            "n": self.n,
            "period": self.period,
            "i_n": self.i_n.to_json(),
            "increment": None if self.increment is None else self.increment.to_json(),
            "bound_valuation": fr(self.bound),
            "masses": {fr(k): v for k, v in sorted(self.masses.items())},
            "new_mass": {fr(k): v for k, v in sorted(self.new_mass.items())},
            "positive_mass": self.positive_mass,
            "simplicity": self.simplicity,
            "checks": self.checks,
            "verdict": self.verdict,
            "notes": self.notes,
            "polygon": None if self.polygon is None else self.polygon.to_json(),
        }


@dataclass
class OptimalityReport:
    params: dict
    levels: list
    warnings: list
    iterates: dict = field(default_factory=dict)

    def verdicts(self) -> list:
        return [lv.verdict for lv in self.levels]

    def to_json(self) -> dict:
        return {"params": self.params, "levels": [lv.to_json() for lv in self.levels], "warnings": self.warnings}


def _verdict(n, period, inc, bound, new_mass, prev_vals, simplicity, notes):
    new_vals = {v for v, m in new_mass.items() if m}
    if simplicity == "multiple" and new_vals <= prev_vals:
        return "Concentration"
    at_bound = new_vals == {bound} and new_mass.get(bound) == period
    if inc.is_exact and inc.value == period and at_bound:
        if simplicity == "simple":
            return "Optimal"
        if simplicity == "unchecked":
            if bound in prev_vals:
                notes.append("new mass shares a valuation with the previous level; "
                             "simplicity is needed to separate new roots and was not checked")
                return "Indeterminate"
            return "Optimal"
    return "NotOptimal"


def cycle_report(P: OKPoly, nmax: int, ceiling: int = DEFAULT_CEILING,
                 policy: TruncPolicy | None = None, warnings: list | None = None,
                 keep_iterates: bool = False) -> OptimalityReport:
    """Per-level optimal-cycle verdicts for a map P in O_K[z] with P(0) = 0."""
    warnings = list(warnings or [])
    red = P.reduce()
    germ = make_germ(red)
    q, p = germ.q, germ.p
    lam = P.linear_coeff()
    params = {"p": p, "k": P.spec.k, "q": q, "gamma": germ.gamma.to_json(), "backend": P.backend,
              "degree": P.degree(), "T": P.T, "M": P.M, "nmax": nmax}
    if red.degree() <= 1:
        warnings.append("reduction of the map is linear; the ramification sequence is infinite")
        levels = [LevelRecord(n, q * p ** n, CensoredNat("infinite"), None, None, {}, {}, None,
                              "unchecked", {}, "Indeterminate", ["degenerate reduction"]) for n in range(nmax + 1)]
        return OptimalityReport(params, levels, warnings)
    if P.backend == "padic":
        warnings.append("characteristic 0: the verdicts hold for this lambda; genericity is not certified")
    prof = ram_profile(germ, nmax, policy or TruncPolicy(adaptive=True))
    ins = prof.entries
    params["ram_trunc"] = prof.trunc
    counts = [q * p ** n for n in range(nmax + 1)]
    known = [e for e in ins if e.is_exact]
    W = (max(e.value for e in known) + 2) if known else 2
    Pw = P
    if P.backend == "rational":
        # The windowed hull never rises above val(lambda^m - 1), so coefficients
        # modulo t^(that + 1) already determine it; the exact map is kept for gcds.
        tops = [lambda_power_val(lam, m) for m in counts]
        if all(isinstance(v, int) for v in tops):
            Pw = OKPoly.from_ratfuncs(dict(enumerate(P.to_zpoly())), P.spec, "laurent", T=max(tops) + 1)
            params["polygon_T"] = max(tops) + 1
    windowed = iterate_chain(Pw, counts, zprec=W)
    full_cache: dict = {}

    def full_iterate(m):
        if m not in full_cache:
            full_cache[m] = iterate_okpoly(P, m, ceiling=min(ceiling, EXACT_ROOT_CEILING)).minus_z()
        return full_cache[m]

    levels = []
    orbit_ok = True
    prev_masses: dict = {}
    prev_i = None
    for n in range(nmax + 1):
        period = counts[n]
        notes: list = []
        checks: dict = {}
        i_n = ins[n]
        try:
            bound = bound_valuation(lam, q, n)
        except IndeterminateValuation as exc:
            bound = None
            notes.append(str(exc))
        if n == 0:
            inc = i_n
        elif i_n.is_exact and prev_i is not None and prev_i.is_exact:
            inc = Exact(i_n.value - prev_i.value)
        else:
            inc = CensoredNat("atleast", 0) if not i_n.is_exact else i_n
        F = windowed[period].minus_z()
        poly = None
        masses: dict = {}
        try:
            if not i_n.is_exact:
                raise IndeterminatePolygon(f"i_{n} is censored ({i_n}); z-window unknown")
            poly = newton_polygon(F)
            masses = poly.root_masses()
        except IndeterminatePolygon as exc:
            notes.append(str(exc))
        if poly is None or bound is None:
            levels.append(LevelRecord(n, period, i_n, inc, bound, masses, {}, None, "unchecked",
                                      checks, "Indeterminate", notes, poly))
            orbit_ok = False
            prev_masses, prev_i = masses, i_n
            continue
        pos = poly.positive_mass()
        checks["bridge"] = pos == i_n.value + 1
        new_mass = {v: masses.get(v, 0) - prev_masses.get(v, 0) for v in set(masses) | set(prev_masses)}
        new_mass = {v: m for v, m in new_mass.items() if m}
        checks["multiplicity_monotone"] = all(m > 0 for m in new_mass.values())
        checks["within_bound"] = all(v <= bound for v in new_mass)
        top = lambda_power_val(lam, period)
        low = lambda_power_val(lam, period // p) if n else 0
        if isinstance(top, CensoredNat) or isinstance(low, CensoredNat):
            checks["valuation_sum"] = None
        else:
            checks["valuation_sum"] = sum(v * m for v, m in new_mass.items()) == top - low
        if n == 0:
            simplicity = "simple"  # the only earlier point is z = 0, simple since lambda^q != 1
        else:
            simplicity = "unchecked"
            if P.backend == "rational":
                try:
                    mult = multiple_root_valuations(full_iterate(counts[n - 1]))
                    simplicity = "multiple" if mult else "simple"
                    if mult:
                        notes.append("multiple roots of level %d at valuations %s" % (
                            n - 1, sorted(f"{v.numerator}/{v.denominator}" for v in mult)))
                except DegreeCeiling:
                    pass
            if simplicity == "unchecked" and P.backend != "padic" and orbit_ok:
                # every earlier level added exactly one orbit, so its roots are simple,
                # and in characteristic p older simple roots stay simple
                simplicity = "simple"
                notes.append("simplicity certified by orbit counting")
            elif simplicity == "unchecked":
                notes.append("simplicity unchecked")
        orbit_ok = orbit_ok and inc.is_exact and inc.value == period
        verdict = _verdict(n, period, inc, bound, new_mass, set(prev_masses), simplicity, notes)
        levels.append(LevelRecord(n, period, i_n, inc, bound, masses, new_mass, pos, simplicity,
                                  checks, verdict, notes, poly))
        prev_masses, prev_i = masses, i_n
    rep = OptimalityReport(params, levels, warnings)
    if keep_iterates:
        rep.iterates = {m: windowed[m] for m in counts}
    return rep


# -- appendix ------------------------------------------------------------------


@dataclass
class AppendixRow:
    n: int
    i_n: CensoredNat
    expected: int | None
    passed: bool | None
    roots_in_level0: bool | None

    def to_json(self) -> dict:
        return {"n": self.n, "i_n": self.i_n.to_json(), "expected": self.expected,
                "pass": self.passed, "roots_in_level0": self.roots_in_level0}


def roots_lie_in(Fn: OKPoly, F0: OKPoly) -> bool:
    """True when every root of Fn in m_K is a root of F0 (exact backend)."""
    spec = Fn.spec
    R = Fn.to_zpoly()
    base = F0.to_zpoly()
    while True:
        d = zp_gcd(R, base, spec)
        if len(d) <= 1:
            break
        R, r = zp_divmod(R, d, spec)
        if r:
            raise ArithmeticError("gcd does not divide")
    R = zp_trim(R)
    poly = newton_polygon(R)
    return poly.positive_mass() == 0


def appendix_check(Q: OKPoly, nmax: int, ceiling: int = EXACT_ROOT_CEILING) -> tuple[list, dict]:
    """Check i_n(Q~^q) = p^n i_0(Q~^q) and, where the degree allows, that every
    m_K-root of Q^{qp^n}(z) - z is already a root of Q^q(z) - z."""
    germ = make_germ(Q.reduce())
    q, p = germ.q, germ.p
    prof = ram_profile(germ, nmax, TruncPolicy(adaptive=True))
    i0 = prof.entries[0]
    rows = []
    F0 = None
    d = Q.degree()
    for n, e in enumerate(prof.entries):
        expected = p ** n * i0.value if i0.is_exact else None
        passed = None if expected is None or not e.is_exact else e.value == expected
        inside = None
        m = q * p ** n
        if Q.backend == "rational" and n and d ** m <= ceiling:
            if F0 is None:
                F0 = iterate_okpoly(Q, q, ceiling=ceiling).minus_z()
            inside = roots_lie_in(iterate_okpoly(Q, m, ceiling=ceiling).minus_z(), F0)
        rows.append(AppendixRow(n, e, expected, passed, inside))
    info = {"p": p, "q": q, "gamma": germ.gamma.to_json(), "degree": d, "ram_trunc": prof.trunc}
    return rows, info


def power_map(lam_coeff, S: OKPoly, p: int) -> OKPoly:
    """Q(z) = lam * z * S(z)^p, built by exact multiplication."""
    from .okpoly import _bimul

    spec = S.spec
    if S.backend != "rational":
        raise ValueError("power_map needs the rational backend")
    acc = S.num
    for _ in range(p - 1):
        acc = _bimul(acc, S.num, spec, None, None)
    from .ratpoly import tp_mul, tp_pow
    import numpy as np

    lam_num, lam_den = lam_coeff.num, lam_coeff.den
    out = np.zeros((acc.shape[0] + 1, acc.shape[1] + lam_num.shape[0] - 1, spec.k), dtype=np.int64)
    for i in range(acc.shape[0]):
        row = tp_mul(acc[i], lam_num, spec)
        out[i + 1, : row.shape[0]] = row
    den = tp_mul(tp_pow(S.den, p, spec), lam_den, spec)
    return OKPoly("rational", spec, out, den, zlow=1)


def gamma_order(P: OKPoly) -> int:
    return mult_order(P.reduce()[1])
