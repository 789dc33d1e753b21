import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ramcycles.cycles import (
    appendix_check,
    cycle_report,
    gamma_order,
    multiple_root_valuations,
    newton_polygon,
    polygon_from_vals,
    power_map,
)
from ramcycles.errors import IndeterminatePolygon
from ramcycles.fields import ff_make
from ramcycles.okpoly import OKPoly, compose_outer, iterate_okpoly
from ramcycles.parsing import parse_map, parse_padic, parse_padic_map, parse_scalar
from ramcycles.series import AtLeast, INFINITE, compose, iterate

F2, F3 = ff_make(2), ff_make(3)


def okp(text, spec, lam="1+t", backend="rational", T=None, mu=None):
    coeffs = parse_map(text, spec, parse_scalar(lam, spec), None if mu is None else parse_scalar(mu, spec))
    return OKPoly.from_ratfuncs(coeffs, spec, backend, T=T)


# -- Newton polygons -----------------------------------------------------------

def test_polygon_hull():
    # points (1,2) (2,0): one segment of slope -2 -> one root of valuation 2
    poly = polygon_from_vals([INFINITE, 2, 0])
    assert poly.z_order == 1 and poly.root_masses() == {Fraction(2): 1}
    # (0,3) (1,1) (2,1) (3,0): slopes -2, 0, -1 -> hull (0,3) (1,1) (3,0)
    poly = polygon_from_vals([3, 1, 1, 0])
    assert poly.segments == [(Fraction(-2), 1), (Fraction(-1, 2), 2)]
    assert poly.positive_mass() == 3


def test_polygon_censoring():
    # censored point above the hull is harmless
    assert polygon_from_vals([2, AtLeast(5), 0]).root_masses() == {1: 2}
    # censored point that might dip below the hull
    with pytest.raises(IndeterminatePolygon):
        polygon_from_vals([4, AtLeast(1), 0])
    # on the hull exactly is fine
    assert polygon_from_vals([2, AtLeast(1), 0]).root_masses() == {1: 2}
    with pytest.raises(IndeterminatePolygon):
        polygon_from_vals([AtLeast(3), 1, 0])


def test_windowed_polygon_stops_at_first_unit():
    poly = polygon_from_vals([INFINITE, 2, 1, 0, AtLeast(0)], windowed=True)
    assert poly.positive_mass() == 3
    with pytest.raises(IndeterminatePolygon):
        polygon_from_vals([INFINITE, 2, 1], windowed=True)


@given(st.integers(0, 10 ** 6))
def test_polygon_root_count_brute_force(seed):
    # product of (z - t^v_i) over F_3(t): masses must equal the multiset of v_i
    rng = random.Random(seed)
    vs = [rng.randint(0, 3) for _ in range(rng.randint(1, 4))]
    poly_coeffs = [parse_scalar("1", F3)]
    for v in vs:
        root = parse_scalar(f"t^{v}", F3)
        new = [parse_scalar("0", F3)] * (len(poly_coeffs) + 1)
        for i, c in enumerate(poly_coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * root
        poly_coeffs = new
    want = {}
    for v in vs:
        if v > 0:
            want[Fraction(v)] = want.get(Fraction(v), 0) + 1
    assert newton_polygon(poly_coeffs).root_masses() == want


# -- OKPoly arithmetic ---------------------------------------------------------

@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_reduction_commutes_with_composition(p, seed):
    spec = ff_make(p)
    rng = random.Random(seed)
    terms = "+".join(f"{rng.randrange(p)}*t^{rng.randrange(3)}*z^{i}" for i in range(2, 4))
    P = okp(f"l*z+{terms}", spec)
    Q = okp(f"l*z*(1+z)", spec)
    lhs = compose_outer(P, Q).reduce()
    rhs = compose(P.reduce().with_trunc(12), Q.reduce().with_trunc(12))
    assert lhs.with_trunc(12) == rhs


def test_iterate_reduces_to_series_iterate():
    P = okp("l*z*(1+z)", F3)
    red = P.reduce().with_trunc(20)
    assert iterate_okpoly(P, 3).reduce().with_trunc(20) == iterate(red, 3)


def test_laurent_matches_rational_iterate():
    P, L = okp("l*z*(1+t*z+z^2)", F2), okp("l*z*(1+t*z+z^2)", F2, backend="laurent", T=25)
    R4, L4 = iterate_okpoly(P, 4), iterate_okpoly(L, 4)
    for i in range(R4.ncoeffs()):
        r, l = R4.coeff_val(i), L4.coeff_val(i)
        if isinstance(l, int):
            assert r == l
        else:
            assert not isinstance(r, int) or r >= l.value


def test_padic_composition_matches_fractions():
    p, M = 5, 6
    lam = parse_padic("1+p", p)
    P = OKPoly.from_padic(parse_padic_map("l*z*(1+z)", p, lam), p, M)
    P2 = iterate_okpoly(P, 2)
    # exact: lam z (1+z) composed with itself
    a = [Fraction(0), lam, lam]
    sq = [Fraction(0)] * 5
    for i in range(3):
        for j in range(3):
            sq[i + j] += a[i] * a[j]
    want = [lam * a[i] + lam * sq[i] if i < 3 else lam * sq[i] for i in range(5)]
    assert P2.num[: len(want)] == [int(w) % p ** M for w in want]


def test_gamma_order():
    assert gamma_order(okp("l*z*(1+z)", ff_make(7), lam="3*(1+t)")) == 6


# -- reports ---------------------------------------------------------------------

def test_optimal_cycles_p3():
    rep = cycle_report(okp("l*z*(1+z)", F3), 2)
    assert rep.verdicts() == ["Optimal"] * 3
    assert [lv.new_mass for lv in rep.levels] == [{1: 1}, {Fraction(2, 3): 3}, {Fraction(2, 3): 9}]
    assert [lv.positive_mass for lv in rep.levels] == [2, 5, 14]
    assert all(all(v is not False for v in lv.checks.values()) for lv in rep.levels)


def test_concentration_vs_generic_p2():
    conc = cycle_report(okp("l*z*(1+z^2)", F2), 2)
    assert conc.verdicts() == ["NotOptimal", "Concentration", "Concentration"]
    gen = cycle_report(okp("l*z*(1+t*z+z^2)", F2), 2)
    assert gen.verdicts()[1:] == ["Optimal", "Optimal"]
    assert all(lv.simplicity == "simple" for lv in gen.levels)


def test_multiple_roots_detected():
    # lam z (1+z^2) - z = lam z (z - r)^2 in characteristic 2, and F' = lam (z - r)^2
    F1 = iterate_okpoly(okp("l*z*(1+z^2)", F2), 1).minus_z()
    assert multiple_root_valuations(F1) == {Fraction(1, 2): 2}


@pytest.mark.parametrize("p,q,lam", [(5, 2, "4*(1+t)"), (7, 3, "2*(1+t)")])
def test_optimal_cycles_higher_q(p, q, lam):
    spec = ff_make(p)
    rep = cycle_report(okp(f"l*z*(1+z^{q})", spec, lam=lam), 2)
    assert rep.params["q"] == q
    assert rep.verdicts() == ["Optimal"] * 3
    assert rep.levels[1].new_mass == {Fraction(p - 1, q * p): q * p}


def test_laurent_concentration_is_indeterminate():
    rep = cycle_report(okp("l*z*(1+z^2)", F2, backend="laurent", T=30), 2)
    assert rep.verdicts()[1:] == ["Indeterminate", "Indeterminate"]


def test_padic_report_carries_warning():
    P = OKPoly.from_padic(parse_padic_map("l*z*(1+z)", 3, parse_padic("4", 3)), 3, 20)
    rep = cycle_report(P, 2)
    assert rep.verdicts() == ["Optimal"] * 3
    assert [lv.bound for lv in rep.levels] == [1, Fraction(1, 3), Fraction(1, 9)]
    assert any("characteristic 0" in w for w in rep.warnings)


def test_linear_reduction_is_degenerate():
    rep = cycle_report(okp("l*z+t*z^2", F3), 1)
    assert rep.verdicts() == ["Indeterminate", "Indeterminate"]


@pytest.mark.parametrize("p,nmax", [(2, 3), (3, 3)])
def test_appendix_multiplicity(p, nmax):
    spec = ff_make(p)
    S = OKPoly.from_ratfuncs(parse_map("1+z", spec), spec)
    Q = power_map(parse_scalar("1+t", spec), S, p)
    rows, info = appendix_check(Q, nmax)
    assert [r.i_n.value for r in rows] == [p ** (n + 1) for n in range(nmax + 1)]
    assert all(r.passed for r in rows)
    assert all(r.roots_in_level0 in (True, None) for r in rows)
    assert rows[1].roots_in_level0 is True


def test_power_map_equals_parsed_text():
    spec = F2
    S = OKPoly.from_ratfuncs(parse_map("1+z", spec), spec)
    Q = power_map(parse_scalar("1+t", spec), S, 2)
    assert Q.to_zpoly() == okp("l*z*(1+z)^2", spec).to_zpoly()
