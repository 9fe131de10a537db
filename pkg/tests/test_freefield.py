from fractions import Fraction

import pytest

from gw3ca import freefield as ff
from gw3ca.errors import LBarZero, ParameterPole
from gw3ca.modes import FIELDS, Mode
from gw3ca.scalars import I, SQRT10, const, symbol

NUMERIC = ff.RealisationParams(Fraction(1, 3), Fraction(2, 5))


def test_lattice():
    assert ff.LATTICE4.is_two_sl3_cartans()
    assert ff.LATTICE4.pair("a", "b") == -1
    assert ff.LATTICE4.pair("a", "c") == 0
    assert ff.LATTICE4.pair("d", "d") == 2


def test_realisation_params():
    with pytest.raises(LBarZero):
        ff.RealisationParams(1, 0)
    rp = ff.RealisationParams.from_lam_mu(Fraction(1, 2), 3)
    assert rp.mu == 3
    assert rp.lbar == Fraction(1, 2) + 3 * I()
    cc = ff.central_charges(ff.RealisationParams(0, 1))
    assert cc["cM"] == -24
    assert cc["cL"] == 4 - 24 * (-I()) ** 2  # mu = -i at lam = 0, lbar = 1


def test_field_weights():
    F = ff.gw3_fields(NUMERIC)
    assert set(F) == {"L", "W", "M", "V"}
    for X, wt in (("L", 2), ("M", 2), ("W", 3), ("V", 3)):
        assert F[X].weight() == wt


def test_momentum_coordinates():
    lam, lb = symbol("lam"), symbol("lbar")
    k = ff.momentum(1, 1, 1, 1)
    assert k.coords["a"] == 2 * lam
    assert k.coords["b"] == 2 * lam
    k = ff.momentum(0, 0, 0, 0)
    assert k.coords["a"] == lam + 1 / lb
    assert k.pairing("a") == 2 * k.coords["a"] - k.coords["b"]


def test_fock_action_basics():
    F = ff.fock_module(1, 1, 1, 1, NUMERIC)
    e = F.hw().terms
    for X in FIELDS:
        for n in (1, 2, 3):
            assert not F.act_dict(Mode(X, n), e), (X, n)
    # h = 0 at (1,1,1,1): all zero modes kill e^k
    for X in FIELDS:
        assert not F.act_dict(Mode(X, 0), e), X
    v = F.act(Mode("L", -1), F.hw())
    assert v.levels() == {1}
    assert v == F.apply([(1, Mode("L", -1))])


def test_fock_monomial_order_and_heisenberg():
    k = ff.momentum(0, 0, 0, 0, NUMERIC)
    out = ff._heis_act("a", -1, (("b", 1),), k)
    assert out == {(("a", 1), ("b", 1)): const(1)}
    # a(1) a(-1) e = <a|a> e
    assert ff._heis_act("a", 1, (("a", 1),), k) == {(): const(2)}
    assert ff._heis_act("a", 1, (("b", 1),), k) == {(): const(-1)}
    assert ff._heis_act("a", 1, (("c", 1),), k) == {}


def test_gca_weights():
    p, r = symbol("p"), symbol("r")
    assert ff.gca_weights(p, r)["match"]
    assert ff.gca_weights(2, 3, Fraction(1, 2), 5)["match"]


def test_weights_numeric_and_vanishing_hV():
    w = ff.zero_mode_weights(2, 3, Fraction(1, 2), -1, NUMERIC)
    assert w.all_match, w.to_json()
    q = symbol("q")
    w = ff.zero_mode_weights(q, q, symbol("r"), symbol("s"))
    assert w.computed["hV"].is_zero()


def test_s3_orbit():
    rep = ff.s3_orbit()
    assert rep.ok
    assert len(rep.orbit) == 6
    rep = ff.s3_orbit(1, 2, 3, 4, NUMERIC)
    assert rep.ok


def test_wt1_report():
    rep = ff.wt1_images()
    assert rep["all_pass"]
    assert rep["a"]["s1_singular"]
    assert rep["ab"]["tau_image_zero"]
    assert not rep["ab"]["tau_image_zero_constant_form"]
    assert rep["b"]["root"] is not None


def test_wt1_pole():
    with pytest.raises(ParameterPole):
        ff.wt1_images(q=1)


def test_fock_consistency_level1():
    mod = ff.fock_module(Fraction(1, 2), 2, Fraction(-1, 3), 1, NUMERIC)
    assert ff.fock_consistency(mod, max_level=1, modes=2, rp=NUMERIC) == []


def test_realisation_report_json():
    rep = ff.verify_gca()
    js = rep.to_json()
    assert rep.all_match and isinstance(js, dict)
