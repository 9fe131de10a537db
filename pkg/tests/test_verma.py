from fractions import Fraction

import pytest

from gw3ca.errors import CMZero, IndexOutOfRange
from gw3ca.modes import FIELDS, Mode, VermaModule
from gw3ca.scalars import const, symbol
from gw3ca.verma import (
    Submodule,
    alpha,
    basis,
    character,
    cm0_determinant,
    det_Dn,
    example_lvl1,
    gram,
    krit_red_condition,
    krit_red_point,
    p1_locus,
    pairing,
    reducible,
    relacija,
    abd,
    singular_vectors,
    vacuum_module,
)

GENERIC = {"cL": Fraction(7, 3), "cM": Fraction(-5, 2), "hL": Fraction(1, 7), "hW": Fraction(2, 9), "hM": Fraction(-3, 11), "hV": Fraction(5, 13)}


def _partitions(n):
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for t in range(k, n + 1):
            p[t] += p[t - k]
    return p


def _P2(m):
    p = _partitions(m)
    return sum(p[i] * p[m - i] for i in range(m + 1))


def test_basis_counts_and_strata():
    assert [len(basis(n)) for n in range(5)] == [1, 4, 14, 40, 105]
    for n in range(5):
        B = basis(n)
        assert all(x.level == n for x in B)
        keys = [x.sort_key() for x in B]
        assert keys == sorted(keys)
        for k in range(n + 1):
            assert len(B.stratum(k)) == _P2(k) * _P2(n - k)


def test_basis_word_order():
    x = next(x for x in basis(2) if x.v[0] == 1 and x.l[0] == 1)
    assert [str(m) for m in x.word()] == ["V(-1)", "L(-1)"]
    assert x.commutative_part() == (Mode("V", -1),)
    assert x.noncommutative_part() == (Mode("L", -1),)


def test_pairing_is_not_symmetric():
    hW = symbol("hW")
    assert pairing([Mode("L", -1)], [Mode("W", -1)]) == 3 * hW
    assert pairing([Mode("W", -1)], [Mode("L", -1)]) == -3 * hW
    assert pairing([Mode("L", -1)], [Mode("L", -2)]) == 0


def test_commutative_monomials_killed_by_high_modes():
    mod = VermaModule(GENERIC)
    for x in basis(3):
        if x.deg_c != 3:
            continue
        top = max(-m.n for m in x.word())
        v = mod.monomial(x.word())
        for X in ("L", "W"):
            for k in range(top + 1, 5):
                assert not mod.act_dict(Mode(X, k), v.terms), (X, k, str(x))


def test_gram_block_structure_and_det():
    mod = VermaModule(GENERIC)
    for n in (1, 2, 3):
        G = gram(n, mod)  # raises if the entries with deg_c x + deg_c y > n are nonzero
        assert G.det == G.full_det()
        assert not G.det.is_zero()


def test_gram_blocks_factorise():
    mod = VermaModule(GENERIC)
    n = 3
    B = list(basis(n))
    for x in B:
        for y in B:
            if x.deg_c + y.deg_c != n:
                continue
            lhs = pairing(x, y, mod)
            rhs = pairing(x.noncommutative_part(), y.commutative_part(), mod) * pairing(x.commutative_part(), y.noncommutative_part(), mod)
            assert lhs == rhs, (str(x), str(y))


def test_blocks_only_agrees():
    mod = VermaModule(GENERIC)
    assert gram(3, mod, blocks_only=True).det == gram(3, mod).det
    with pytest.raises(ValueError):
        gram(2, mod, blocks_only=True).full_det()


def test_det_Dn_symbolic():
    for n in (1, 2, 3):
        r = det_Dn(n)
        assert r.matches
        assert r.pairing_sign == -1


def test_alpha_entries_and_errors():
    a, b, d = abd(2)
    assert alpha(2, 1, 3, 2) == relacija(2, 1, 3, a, b, d)
    with pytest.raises(IndexOutOfRange):
        alpha(2, 0, 1, 1)
    with pytest.raises(IndexOutOfRange):
        alpha(1, 1, 3, 1)
    with pytest.raises(IndexOutOfRange):
        alpha(1, 1, 1, 0)


def test_reducible_at_zero_weights():
    params = {"cM": 3, "hM": 0, "hV": 0}
    assert reducible(params, 5) == [1, 2]
    with pytest.raises(CMZero):
        krit_red_condition(1, {"cM": 0})
    conds = reducible({"cM": 3}, 2)
    assert isinstance(conds, dict) and set(conds) == {1, 2}


def test_krit_red_point_on_locus():
    for p in (1, 2, 3):
        pt = krit_red_point(p, Fraction(7, 2), Fraction(-1, 3))
        assert krit_red_condition(p, dict(pt, cM=Fraction(7, 2))).is_zero()


def test_singular_vectors_generic_and_on_locus():
    assert singular_vectors(1, VermaModule(GENERIC)) == []
    params = dict(GENERIC, **p1_locus(Fraction(2, 3), GENERIC["cM"]))
    mod = VermaModule(params)
    sv = singular_vectors(1, mod)
    assert len(sv) == 1
    v = sv[0]
    for X in FIELDS:
        assert not mod.act_dict(Mode(X, 1), v.terms)


def test_submodule_dims():
    mod = VermaModule({"hM": 0, "hV": 0})
    N = Submodule(mod, [mod.monomial([Mode("M", -1)])], 2)
    dims = N.dims()
    assert dims[0] == 0 and dims[1] == 2  # W(0) M(-1) v brings in V(-1) v
    assert N.contains(mod.monomial([Mode("V", -1)]))
    assert N.contains(mod.monomial([Mode("L", -1), Mode("M", -1)]))
    assert not N.contains(mod.monomial([Mode("L", -1)]))
    with pytest.raises(ValueError):
        Submodule(mod, [{(("L", 1),): const(1), (): const(1)}], 1)


def test_vacuum_module_pairings():
    rep = vacuum_module({}, 3)
    assert rep.dims == [1, 0, 2, 4]
    assert rep.lm_pairing == symbol("cM") / 2
    assert rep.mm_pairing == 0
    assert rep.all_nonzero
    with pytest.raises(CMZero):
        vacuum_module({"cM": 0}, 2)
    with pytest.raises(ValueError):
        vacuum_module({"hL": 1}, 2)


def test_characters():
    rep = character(6)
    assert rep.verma_matches
    assert rep.vacuum_counts == [1, 0, 2, 4, 7, 12, 26]
    assert rep.vacuum_matches
    assert rep.printed_vacuum_series[:6] == [1, 0, -2, 4, 5, -4]
    with pytest.raises(ValueError):
        character(-1)


def test_cm0_structure():
    hM = symbol("hM")
    for p in (1, 2):
        r = cm0_determinant(2, p)
        assert r.lower_triangular
        assert r.d_computed == 2 * p * hM
        assert r.a_computed == Fraction(32, 5) * p * hM * hM
        assert r.diagonal_matches_computed
        assert r.reducible_iff_hM_zero


def test_example_lvl1_details():
    rep = example_lvl1()
    assert rep["level1_det"]["branches"] == {"1": "negated", "-1": "different"}
    assert rep["b"] == {"1": True, "-1": False}
    assert rep["a"]["solver_dim"] == 2
    assert rep["ab"]["two_forms_agree"]
    assert rep["all_pass"]
