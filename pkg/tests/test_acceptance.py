"""Acceptance criteria: one test per criterion, exact comparisons throughout."""

import itertools
import random
from fractions import Fraction

from gw3ca import freefield as ff
from gw3ca.conformal import bracket, jacobi_residual
from gw3ca.modes import VermaModule
from gw3ca.presets import preset
from gw3ca.scalars import ScalarFn, symbol
from gw3ca.verma import (
    Dn_h0_printed,
    abd,
    alpha_det_closed_form,
    alpha_matrix,
    character,
    cm0_determinant,
    det_Dn,
    example_lvl1,
    gram,
    krit_red_condition,
    krit_red_point,
    random_rational,
    relacija,
    vacuum_module,
)
from gw3ca.linalg import det as matrix_det

SEED = 20240601


def _expr(P, terms):
    """Σ coef · word, words given as text (``D`` in front of a parenthesised word differentiates it)."""
    out = P.scalar(0)
    for coef, word in terms:
        if word.startswith("D(") and word.endswith(")"):
            e = P.parse_word(word[2:-1]).D()
        else:
            e = P.parse_word(word)
        out = out + e * ScalarFn.coerce(coef)
    return out


def test_ac01_jacobi_suite():
    P = preset("gw3")
    gens = [g.name for g in P.generators]
    triples = list(itertools.combinations_with_replacement(gens, 3))
    assert len(triples) == 20
    nonzero = [t for t in triples if not jacobi_residual(P, *t).is_zero()]
    assert nonzero == [], f"nonzero Jacobi residuals: {nonzero}"
    assert not jacobi_residual(preset("gw3_nogo"), "W", "W", "M").is_zero()


def test_ac02_appendix_fixtures():
    P = preset("gw3")
    W, V = P.field("W"), P.field("V")
    LM, MM = P.parse_word("LM"), P.parse_word("MM")
    expected = {
        "W,LM": (W, LM, {0: [(2, "(DW)M"), (2, "L(DV)")], 1: [(3, "WM"), (3, "LV")], 2: [(4, "DV")], 3: [(Fraction(5, 2), "V")]}),
        "LM,W": (
            LM,
            W,
            {
                0: [(1, "D(LV)"), (1, "D(WM)"), (2, "(DL)V"), (2, "W(DM)"), (Fraction(-3, 2), "D^3V")],
                1: [(3, "LV"), (3, "WM"), (Fraction(-1, 2), "D^2V")],
                2: [(Fraction(7, 2), "DV")],
                3: [(Fraction(5, 2), "V")],
            },
        ),
        "W,MM": (W, MM, {0: [(4, "M(DV)")], 1: [(6, "MV")]}),
        "MM,W": (MM, W, {0: [(2, "D(MV)"), (4, "(DM)V")], 1: [(6, "MV")]}),
        "LM,V": (LM, V, {0: [(3, "D(MV)"), (-2, "M(DV)")], 1: [(3, "MV")]}),
    }
    bad = []
    for name, (A, B, coeffs) in expected.items():
        br = bracket(P, A, B)
        top = max(br.degree(), max(coeffs))
        for j in range(top + 1):
            if br[j] != _expr(P, coeffs.get(j, [])):
                bad.append((name, j))
    assert bad == [], f"fixture mismatches (bracket, λ-power): {bad}"


def test_ac03_determinant_closed_forms():
    for n in range(1, 5):
        res = det_Dn(n)
        assert res.matches, f"D_{n}: {res.det} != {res.closed_form}"
    mismatched = []
    for n in range(1, 7):
        mod = VermaModule({"hL": 0, "hW": 0, "hM": 0, "hV": 0})
        got = det_Dn(n, mod).det
        if got != Dn_h0_printed(n):
            mismatched.append((n, got.to_text(), Dn_h0_printed(n).to_text()))
    assert mismatched == [], f"h = 0 values differ from n(n²-1)²(n²-4)c_M²/4320: {mismatched}"


def test_ac04_alpha_matrix():
    for n in range(1, 5):
        for p in range(1, 4):
            A = alpha_matrix(n, p)
            a, b, d = abd(p)
            for i in range(1, n + 2):
                for j in range(1, n + 2):
                    assert A[i - 1][j - 1] == relacija(n, i, j, a, b, d), (n, p, i, j)
            assert matrix_det(A) == alpha_det_closed_form(n, a, b, d), (n, p)


def test_ac05_reducibility_iff_Dp_zero():
    rng = random.Random(SEED)
    for k in range(20):
        p = 1 + k % 3
        cM, w = random_rational(rng), random_rational(rng)
        pt = dict(krit_red_point(p, cM, w), cM=cM, cL=random_rational(rng), hL=random_rational(rng), hW=random_rational(rng))
        assert krit_red_condition(p, pt).is_zero()
        mod = VermaModule(pt)
        assert gram(p, mod).vanishes(), ("reducible point", p, pt)
        assert gram(4, mod, blocks_only=True).vanishes(), ("level-4 certificate", p, pt)
    for k in range(20):
        pt = {x: random_rational(rng) for x in ("cL", "cM", "hL", "hW", "hM", "hV")}
        mod = VermaModule(pt)
        for p in (1, 2, 3):
            assert not gram(p, mod).vanishes(), ("generic point", p, pt)
        assert not gram(4, mod, blocks_only=True).vanishes(), ("generic level 4", pt)


def test_ac06_example_lvl1():
    rep = example_lvl1()
    assert rep["s"]["matches"], rep["s"]
    assert "negated" in rep["level1_det"]["branches"].values() or "equal" in rep["level1_det"]["branches"].values()
    assert rep["all_pass"], rep


def test_ac07_simplicity_probe():
    rng = random.Random(SEED + 7)
    for _ in range(10):
        pt = {"cL": random_rational(rng), "cM": random_rational(rng)}
        rep = vacuum_module(pt, 5)
        assert rep.all_nonzero, (pt, [d.to_text() for d in rep.dets])
    rep = vacuum_module({}, 2)
    assert rep.lm_pairing == symbol("cM") / 2


def test_ac08_characters():
    rep = character(6)
    assert rep.verma_counts[:5] == [1, 4, 14, 40, 105]
    assert rep.verma_matches
    assert rep.vacuum_matches, (rep.vacuum_counts, rep.vacuum_series)
    assert rep.printed_exponent_discrepancy


def test_ac09_free_field_closure():
    rep = ff.verify_realization()
    assert len(rep.checks) == 10
    assert rep.all_match, [c.pair for c in rep.checks if not c.match]
    assert ff.verify_gca().all_match


def test_ac10_weights_and_s3():
    p, q, r, s = (symbol(x) for x in "pqrs")
    w = ff.zero_mode_weights(p, q, r, s)
    assert w.all_match, w.matches
    orbit = ff.s3_orbit()
    assert all(orbit.tezine_hold)
    assert orbit.sigma_cubed_identity and orbit.tau_squared_identity
    assert orbit.weights_invariant


def test_ac11_example_wt1():
    rep = ff.wt1_images()
    assert rep["s"]["positive_modes_annihilate"] and rep["s"]["tau_image_zero"] and rep["s"]["nonzero"]
    assert rep["all_pass"], rep


def test_ac12_cm0_algebra():
    failures = []
    for n in range(1, 4):
        for p in range(1, 4):
            r = cm0_determinant(n, p)
            if not r.lower_triangular:
                failures.append((n, p, "not triangular"))
            if not r.reducible_iff_hM_zero:
                failures.append((n, p, "reducibility"))
            if r.d_computed != r.d_stated:
                failures.append((n, p, "d"))
            if not r.diagonal_matches_stated:
                failures.append((n, p, f"a = {r.a_computed.to_text()} vs stated {r.a_stated.to_text()}"))
    assert failures == [], failures
