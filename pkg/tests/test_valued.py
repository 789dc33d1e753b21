import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramcycles.errors import IndeterminateValuation
from ramcycles.fields import ff_make
from ramcycles.parsing import parse_scalar
from ramcycles.ratpoly import RatFunc
from ramcycles.series import AtLeast, CensoredNat
from ramcycles.valued import (
    LaurentTrunc,
    PadicTrunc,
    RationalExact,
    bound_valuation,
    lambda_power_val,
    laurent_from_poly,
    rational_from_polys,
)


def rand_ratfunc(rng, spec, deg=4):
    num = np.array([[rng.randrange(spec.p) for _ in range(spec.k)] for _ in range(deg + 1)])
    den = np.array([[rng.randrange(spec.p) for _ in range(spec.k)] for _ in range(deg)])
    den[0] = 0
    den[0, 0] = 1  # unit denominator keeps the element in O_K when num is
    return RatFunc(spec, num, den)


@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2)]), st.integers(0, 10 ** 6))
def test_laurent_agrees_with_exact(pk, seed):
    spec = ff_make(*pk)
    rng = random.Random(seed)
    a, b = rand_ratfunc(rng, spec), rand_ratfunc(rng, spec)
    T = 30
    ea, eb = RationalExact(a), RationalExact(b)
    la, lb = ea.to_laurent(T), eb.to_laurent(T)
    for ex, lt in ((ea + eb, la + lb), (ea * eb, la * lb), (ea - eb, la - lb)):
        v, w = ex.val(), lt.val()
        if isinstance(w, CensoredNat):
            assert isinstance(v, CensoredNat) or v >= w.value
        else:
            assert v == w


@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_ultrametric(p, seed):
    spec = ff_make(p)
    rng = random.Random(seed)
    a, b = RationalExact(rand_ratfunc(rng, spec)), RationalExact(rand_ratfunc(rng, spec))
    va, vb, vs = a.val(), b.val(), (a + b).val()
    if isinstance(va, int) and isinstance(vb, int):
        assert isinstance(vs, CensoredNat) or vs >= min(va, vb)
        if va != vb:
            assert vs == min(va, vb)
    assert (a * b).val() == va + vb if isinstance(va, int) and isinstance(vb, int) else True


@given(st.sampled_from([3, 5, 7]), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_padic_ring_ops(p, x, y):
    M = 8
    a, b = PadicTrunc.from_fraction(p, M, x), PadicTrunc.from_fraction(p, M, y)
    assert (a * b).v == x * y % p ** M
    assert (a + b).v == (x + y) % p ** M
    v = 0
    n = x
    while n % p == 0:
        n //= p
        v += 1
    assert a.val() == (v if v < M else AtLeast(M))


def test_padic_zero_is_censored():
    assert PadicTrunc(3, 5, 0).val() == AtLeast(5)
    with pytest.raises(ValueError):
        PadicTrunc.from_fraction(3, 5, Fraction(1, 3))


def test_laurent_scalar_parse():
    F = ff_make(3)
    x = LaurentTrunc.from_ratfunc(parse_scalar("t^-1*(1+t+2*t^3)", F), 10)
    assert x.val() == -1
    assert x.c[:4, 0].tolist() == [1, 1, 0, 2]


def test_laurent_censoring_and_residue():
    F = ff_make(5)
    x = laurent_from_poly(F, [1, 2, 3], 3)
    assert (x - x).val() == AtLeast(3)
    assert int(x.residue()) == 1
    assert int(rational_from_polys(F, [2, 1], [3, 1]).residue()) == 4


def test_bound_constant_in_char_p():
    lam = RationalExact(parse_scalar("1+t", ff_make(3)))
    assert [bound_valuation(lam, 1, n) for n in range(5)] == [1] + [Fraction(2, 3)] * 4


@pytest.mark.parametrize("p", [3, 5, 7])
def test_bound_decays_padically(p):
    lam = PadicTrunc.from_fraction(p, 12, 1 + p)
    assert [bound_valuation(lam, 1, n) for n in range(5)] == [Fraction(1, p ** n) for n in range(5)]


def test_bound_with_nontrivial_residue():
    F4 = ff_make(2, 2)
    lam = RationalExact(parse_scalar("x*(1+t)", F4))
    assert [bound_valuation(lam, 3, n) for n in range(3)] == [Fraction(1, 3), Fraction(1, 6), Fraction(1, 6)]


def test_bound_censoring():
    lam = LaurentTrunc.from_ratfunc(parse_scalar("1+t", ff_make(3)), 20)
    assert bound_valuation(lam, 1, 2) == Fraction(2, 3)
    with pytest.raises(IndeterminateValuation):
        bound_valuation(lam, 1, 3)  # val(lambda^27 - 1) = 27 is beyond t^20
    assert isinstance(lambda_power_val(lam, 27), CensoredNat)
