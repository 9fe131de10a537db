from fractions import Fraction

import pytest

from gw3ca.modes import FIELDS, HWVector, Mode, VermaModule, act, adjoint, commutator, hw_params, state_field_check
from gw3ca.presets import preset
from gw3ca.scalars import const, symbol
from gw3ca.verma import pbw_monomials

PAIRS = [(a, b) for i, a in enumerate(FIELDS) for b in FIELDS[i:]]
GENERIC = {"cL": Fraction(7, 3), "cM": Fraction(-5, 2), "hL": Fraction(1, 7), "hW": Fraction(2, 9), "hM": Fraction(-3, 11), "hV": Fraction(5, 13)}


def test_mode_validation():
    with pytest.raises(ValueError):
        Mode("X", 1)
    assert str(Mode("L", -2)) == "L(-2)"


def test_adjoint_signs():
    assert adjoint(Mode("L", 3)) == (1, Mode("L", -3))
    assert adjoint(Mode("W", 1)) == (-1, Mode("W", -1))
    assert adjoint(Mode("V", -2)) == (-1, Mode("V", 2))


def test_virasoro_commutator_central_term():
    terms = commutator(Mode("L", 2), Mode("L", -2))
    d = dict((str(m) if m else None, c) for m, c in terms)
    assert d["L(0)"] == 4
    assert d[None] == symbol("cL") / 2


def test_commutators_vanish_in_commutative_part():
    for a in ("M", "V"):
        for b in ("M", "V"):
            assert commutator(Mode(a, 1), Mode(b, -1)) == []


def test_highest_weight_action():
    mod = VermaModule()
    v = mod.hw()
    assert act(Mode("L", 0), v) == v * symbol("hL")
    assert act(Mode("W", 1), v).is_zero()
    w = act(Mode("L", -1), v)
    assert w.levels() == {1}


def test_pbw_order_is_canonical():
    mod = VermaModule()
    a = mod.monomial([Mode("L", -1), Mode("M", -1)])
    b = mod.monomial([Mode("M", -1), Mode("L", -1)])
    # [L(-1), M(-1)] = 0, so both orders give the same canonical monomial
    assert a == b
    assert list(a.terms) == [(("M", 1), ("L", 1))]


def test_vector_arithmetic():
    mod = VermaModule()
    x = mod.monomial([Mode("L", -1)])
    y = mod.monomial([Mode("M", -1)])
    z = x * 2 - y + y
    assert z == x * 2 and (x - x).is_zero() and not (x - x)


@pytest.mark.parametrize("a,b", PAIRS)
def test_state_field_correspondence(a, b):
    mod = VermaModule(GENERIC)
    assert state_field_check(preset("gw3"), a, b, 1, mod, modes=2)


def test_slack_does_not_change_results():
    m0, m2 = VermaModule(GENERIC), VermaModule(GENERIC, slack=2)
    for mono in pbw_monomials(2):
        for k in range(-1, 3):
            for name in ("Lam", "Theta"):
                assert m0._act_mono(Mode(name, k), mono) == m2._act_mono(Mode(name, k), mono)


def test_cm0_variant_relations():
    terms = commutator(Mode("M", 1), Mode("W", -1), variant="gw3_cm0")
    assert terms == []
    with pytest.raises(ValueError):
        VermaModule(variant="other")


def test_hw_params():
    P = hw_params(hL=1)
    assert P["hL"] == 1 and P["cM"] == symbol("cM")
    with pytest.raises(ValueError):
        hw_params(bogus=1)


@pytest.mark.parametrize("a,b", PAIRS)
def test_state_field_correspondence_level_two(a, b):
    mod = VermaModule(GENERIC)
    assert state_field_check(preset("gw3"), a, b, 2, mod, modes=2)


def test_state_field_correspondence_symbolic():
    assert state_field_check(preset("gw3"), "W", "W", 1, VermaModule(), modes=1)
