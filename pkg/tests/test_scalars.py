from fractions import Fraction

import pytest

from gw3ca.errors import DivisionByZero, ParseError, PoleHit
from gw3ca.scalars import I, SQRT10, GaussianRational, ScalarFn, const, parse_scalar, symbol


def test_canonical_form_cancels_common_factors():
    x, y = symbol("p"), symbol("q")
    a = (x * x - y * y) / (x - y)
    assert a == x + y
    assert a.is_polynomial()


def test_text_round_trip():
    x = (symbol("cL") * 3 - 2) / (symbol("cM") * 5)
    assert parse_scalar(x.to_text()) == x
    assert x.to_text().startswith("(")


def test_algebraic_generators_reduce():
    assert I() * I() == -1
    assert SQRT10() * SQRT10() == 10
    assert (1 / SQRT10()) == SQRT10() / 10
    assert (1 / (1 + I())) == (1 - I()) / 2


def test_real_rational_predicate():
    assert (symbol("p") / 3).is_real_rational()
    assert not (symbol("p") * I()).is_real_rational()
    assert not SQRT10().is_real_rational()


def test_evaluate_and_subs():
    x = symbol("p") ** 2 + I()
    assert x.evaluate({"p": 2}) == GaussianRational(4, 1)
    with pytest.raises(ValueError):
        SQRT10().evaluate()
    with pytest.raises(PoleHit):
        (1 / (symbol("p") - 1)).subs({"p": 1})


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        const(1) / const(0)


def test_mixed_arithmetic_with_fractions():
    assert const(Fraction(1, 3)) * 3 == 1
    assert Fraction(1, 2) + const(Fraction(1, 2)) == 1


def test_parse_error():
    with pytest.raises(ParseError):
        parse_scalar("1 + * 2")


def test_hash_consistent_with_equality():
    a = (symbol("p") + 1) / 2
    b = symbol("p") / 2 + Fraction(1, 2)
    assert a == b and hash(a) == hash(b)
    assert isinstance(a, ScalarFn)
