import itertools

import pytest

from gw3ca.conformal import bracket, composite_fields, jacobi_residual, normal_order
from gw3ca.errors import ParseError, UnknownPreset
from gw3ca.presets import dump_preset, load_preset, preset
from gw3ca.scalars import symbol


@pytest.mark.parametrize("name", ["virasoro", "gca", "w3", "heisenberg4", "heisenberg2", "gw3_cm0"])
def test_jacobi_holds(name):
    P = preset(name)
    gens = [g.name for g in P.generators]
    for t in itertools.combinations_with_replacement(gens, 3):
        assert jacobi_residual(P, *t).is_zero(), (name, t)


def test_nogo_variant_fails_on_wwm():
    assert not jacobi_residual(preset("gw3_nogo"), "W", "W", "M").is_zero()


def test_basic_gw3_brackets():
    P = preset("gw3")
    assert bracket(P, P.field("L"), P.field("W")).to_text() == "(D + 3*l)W"
    assert bracket(P, P.field("M"), P.field("M")).is_zero()
    lm = bracket(P, P.field("L"), P.field("M"))
    assert lm[3] == P.scalar(symbol("cM") / 12)
    assert bracket(P, P.field("M"), P.field("V")).is_zero()


def test_skew_symmetry_of_words():
    """[b_λ a] = -[a_{-λ-D} b]; compare the λ^0 and λ^1 coefficients."""
    from math import comb

    P = preset("gw3")
    A, B = P.parse_word("LM"), P.field("W")
    ab, ba = bracket(P, A, B), bracket(P, B, A)
    for k in (0, 1):
        # coefficient of λ^k in -Σ_j (-λ-D)^j ab[j] is -Σ_j C(j,k) (-1)^j D^{j-k} ab[j]
        rhs = P.scalar(0)
        for j in range(k, ab.degree() + 1):
            rhs = rhs + ab[j].D(j - k) * (-comb(j, k) * (-1) ** j)
        assert ba[k] == rhs


def test_sesquilinearity():
    P = preset("gw3")
    W, L = P.field("W"), P.field("L")
    base = bracket(P, L, W)
    right = bracket(P, L, W.D())
    # [a_λ Db] = (D + λ)[a_λ b]
    for j in range(right.degree() + 1):
        expected = base[j].D() + (base[j - 1] if j >= 1 else P.scalar(0))
        assert right[j] == expected


def test_normal_order_is_commutative_up_to_integral_for_commuting_fields():
    P = preset("gw3")
    M, V = P.field("M"), P.field("V")
    assert normal_order(M, V) == normal_order(V, M)


def test_quasi_commutativity_for_heisenberg():
    H = preset("heisenberg4")
    a, b = H.field("a"), H.field("b")
    # :ab: - :ba: = ∫_{-D}^0 [a_λ b] dλ = -<a|b> D^2/2 applied to the vacuum = 0
    assert normal_order(a, b) == normal_order(b, a)


def test_composite_fields():
    P = preset("gw3")
    comp = composite_fields(P)
    assert comp["Theta_field"] == P.parse_word("MM")
    assert comp["Lambda_field"].weight() == 4


def test_parse_word_errors():
    P = preset("gw3")
    with pytest.raises(ParseError):
        P.parse_word("Q")


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        preset("nope")


def test_preset_file_round_trip(tmp_path):
    P = preset("gw3")
    path = tmp_path / "gw3.json"
    dump_preset(P, path)
    Q = load_preset(path)
    for a in "LWMV":
        for b in "LWMV":
            assert bracket(Q, Q.field(a), Q.field(b)).to_text() == bracket(P, P.field(a), P.field(b)).to_text()


def test_load_preset_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_preset(path)
