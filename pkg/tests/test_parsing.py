from fractions import Fraction

import pytest

from ramcycles.errors import OrderMismatch, ParseError
from ramcycles.fields import ff_make
from ramcycles.parsing import (
    parse_field_element,
    parse_germ,
    parse_map,
    parse_modulus,
    parse_padic,
    parse_padic_map,
    parse_scalar,
    parse_series,
)
from ramcycles.series import to_text


def test_germs():
    F = ff_make(11)
    assert to_text(parse_germ("-1*z+z^2", F).series) == "10*z + z^2"
    assert to_text(parse_germ("-z + z**2", F).series) == "10*z + z^2"
    g = parse_germ("x*z*(1+z^5)", ff_make(2, 4))
    assert g.q == 5 and g.series.degree() == 6


def test_extension_elements():
    F = ff_make(2, 2)
    x = parse_field_element("x", F)
    assert parse_field_element("poly:1+x", F) == F.one + x
    assert parse_field_element("x^2", F) == x + F.one  # x^2 + x + 1 = 0
    assert parse_field_element("1/x", F) == x.inverse()


def test_scalars_and_maps():
    F = ff_make(3)
    s = parse_scalar("t^-1*(1 + t + 2*t^3)", F)
    assert s.val() == -1
    lam = parse_scalar("1+t", F)
    m = parse_map("lambda*z*(1+mu*z+z^2)", F, lam, parse_scalar("t", F))
    assert sorted(m) == [1, 2, 3]
    assert m[2] == lam * parse_scalar("t", F)
    assert parse_map("l*z", F, lam) == {1: lam}


def test_padic():
    assert parse_padic("padic:1+p", 5) == 6
    assert parse_padic("1/(1+p)", 3) == Fraction(1, 4)
    m = parse_padic_map("l*z*(1+z)", 3, Fraction(4))
    assert m == {1: 4, 2: 4}


def test_modulus():
    assert parse_modulus("x^4+x+1", 2) == [1, 1, 0, 0, 1]
    assert parse_modulus("1,1,0,0,1", 2) == [1, 1, 0, 0, 1]


def test_symbols_binding():
    F = ff_make(7)
    g = parse_germ("g*z+z^2", F, symbols={"g": F.from_int(4)})
    assert g.q == 3


@pytest.mark.parametrize("text,pos,msg", [
    ("z+*2", 2, "syntax"),
    ("z+y", 2, "unknown"),
    ("z^z", 2, "integer literals"),
    ("x*z", 0, "extension"),
    ("z+$", 2, "unexpected character"),
    ("1+z", 0, "zero constant"),
    ("z^2", 0, "nonzero linear"),
    ("z/z", 2, "division"),
    ("", 0, "empty"),
])
def test_errors_point_at_the_problem(text, pos, msg):
    with pytest.raises(ParseError) as info:
        parse_germ(text, ff_make(11))
    assert info.value.pos == pos
    assert msg in str(info.value)
    if text:
        caret_line = str(info.value).splitlines()[-1]
        assert caret_line.index("^") - 2 == pos


def test_negative_power_of_z_rejected():
    with pytest.raises(ParseError):
        parse_series("z^-1", ff_make(3))


def test_unbound_lambda():
    with pytest.raises(ParseError, match="lambda"):
        parse_map("lambda*z", ff_make(3))


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        parse_germ("2*z+z^2", ff_make(7), q=2)
