import random

import pytest
from hypothesis import given, strategies as st

from conftest import FIELDS, field_from_index
from ramcycles.errors import NoDefaultModulus, NotPrime, ReducibleModulus
from ramcycles.fields import (
    DEFAULT_MODULI,
    FFElem,
    divisors,
    element_with_order,
    factorize,
    ff_make,
    is_irreducible,
    is_prime,
    mult_order,
)


def test_small_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_construction_errors():
    with pytest.raises(NotPrime):
        ff_make(9)
    with pytest.raises(ReducibleModulus):
        ff_make(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    with pytest.raises(NoDefaultModulus):
        ff_make(101, 7)


@pytest.mark.parametrize("pk", sorted(DEFAULT_MODULI))
def test_default_moduli_irreducible(pk):
    p, k = pk
    assert is_irreducible(DEFAULT_MODULI[pk], p)


def test_f16_default_generator_has_order_five():
    # the built-in degree-4 modulus over F_2 is 1+x+x^2+x^3+x^4
    F = ff_make(2, 4)
    assert F.modulus == (1, 1, 1, 1, 1)
    assert mult_order(F.gen) == 5


def test_brute_force_irreducibility_f3_quadratics():
    # monic quadratics over F_3 without roots
    want = []
    for a in range(3):
        for b in range(3):
            if all((x * x + a * x + b) % 3 for x in range(3)):
                want.append((b, a, 1))
    got = [(b, a, 1) for a in range(3) for b in range(3) if is_irreducible((b, a, 1), 3)]
    assert sorted(got) == sorted(want)


@given(st.integers(0, len(FIELDS) - 1), st.integers(0, 10 ** 6))
def test_field_axioms(fi, seed):
    F = field_from_index(fi)
    rng = random.Random(seed)
    a, b, c = (F.random(rng) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + F.zero == a and a * F.one == a
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
        assert (b / a) * a == b


@given(st.integers(0, len(FIELDS) - 1), st.integers(0, 10 ** 6))
def test_mult_order_is_least(fi, seed):
    F = field_from_index(fi)
    x = F.random(random.Random(seed), nonzero=True)
    q = mult_order(x)
    assert (F.order - 1) % q == 0
    assert x ** q == F.one
    assert all(x ** d != F.one for d in range(1, q))


def test_frobenius_is_additive():
    F = ff_make(3, 2)
    for a in F.elements():
        for b in list(F.elements())[:4]:
            assert (a + b) ** 3 == a ** 3 + b ** 3


@pytest.mark.parametrize("p,k", [(2, 4), (7, 1), (5, 2)])
def test_element_with_order(p, k):
    F = ff_make(p, k)
    for q in divisors(F.order - 1):
        assert mult_order(element_with_order(F, q)) == q


def test_element_text_and_json():
    F = ff_make(2, 4)
    e = FFElem(F, (1, 0, 1, 0))
    assert e.to_json() == "poly:1+1*x^2"
    assert ff_make(7).from_int(-1).to_json() == 6
