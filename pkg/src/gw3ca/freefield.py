"""Free-field realisation of the Galilean W3 algebra and of its highest-weight modules.

The rank-4 lattice ``Za + Zb + Zc + Zd`` has Gram matrix two orthogonal
copies of the sl3 Cartan matrix.  Over the associated Heisenberg vertex
algebra (preset ``heisenberg4``) four composite fields ω, W, M, V close on
the GW3 λ-brackets with ``c_L = 4 - 24(λ² + μ²)`` and ``c_M = -24 λ̄²``
where ``λ̄ = λ + iμ``.  The barred fields ``ā = a + ic`` and ``b̄ = b + id``
are expansion macros; all computation happens over the real basis.

Internally λ̄ is the independent symbol ``lbar`` and ``μ = -i(λ̄ - λ)``, so
that every denominator is a power of ``lbar``.

Fock modules ``M(1) ⊗ e^k`` carry the mode action of composite fields via
the Wick expansion: a mode of a normally ordered product is the sum over
``:A Y:(n) = Σ_{m <= -Δ_A} A(m) Y(n-m) + Σ_{m > -Δ_A} Y(n-m) A(m)``, with
Heisenberg modes ``x(m)`` acting by creation (m < 0), the momentum pairing
(m = 0) or contraction (m > 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .conformal import NLCA, VAExpr, bracket, composite_fields, normal_order
from .errors import LBarZero, ParameterPole
from .modes import FIELDS, HWVector, Mode, _acc, commutator, level
from .presets import preset
from .scalars import I, SQRT10, ScalarFn, const, symbol
from .verma import Submodule, quotient_and_subsingular, uvj_expression

__all__ = [
    "Lattice4",
    "LATTICE4",
    "RealisationParams",
    "Momentum",
    "FockModule",
    "FockVector",
    "gw3_fields",
    "verify_realization",
    "gca_fields",
    "verify_gca",
    "gca_weights",
    "momentum",
    "zero_mode_weights",
    "printed_weights",
    "sigma",
    "tau",
    "s3_orbit",
    "tezine_identities",
    "fock_act",
    "fock_module",
    "wt1_images",
    "central_charges",
    "fock_consistency",
]

LABELS = ("a", "b", "c", "d")


# ---------------------------------------------------------------------------
# lattice and parameters


@dataclass(frozen=True)
class Lattice4:
    """The rank-4 lattice: ``<x|x> = 2``, ``<a|b> = <c|d> = -1``, other pairings 0."""

    labels: tuple = LABELS
    gram: tuple = ((2, -1, 0, 0), (-1, 2, 0, 0), (0, 0, 2, -1), (0, 0, -1, 2))

    def pair(self, x: str, y: str) -> int:
        return self.gram[self.labels.index(x)][self.labels.index(y)]

    def is_two_sl3_cartans(self) -> bool:
        cartan = ((2, -1), (-1, 2))
        g = self.gram
        blocks = [[row[0:2] for row in g[0:2]], [row[2:4] for row in g[2:4]]]
        off = all(g[i][j] == 0 for i in range(2) for j in range(2, 4)) and all(g[j][i] == 0 for i in range(2) for j in range(2, 4))
        return off and all(tuple(map(tuple, b)) == cartan for b in blocks)


LATTICE4 = Lattice4()


@dataclass(frozen=True)
class RealisationParams:
    """λ and λ̄ = λ + iμ (symbolic by default); ``mu`` is derived."""

    lam: ScalarFn = field(default_factory=lambda: symbol("lam"))
    lbar: ScalarFn = field(default_factory=lambda: symbol("lbar"))

    def __post_init__(self):
        object.__setattr__(self, "lam", ScalarFn.coerce(self.lam))
        object.__setattr__(self, "lbar", ScalarFn.coerce(self.lbar))
        if self.lbar.is_zero():
            raise LBarZero("the realisation needs lam + i*mu != 0")

    @classmethod
    def from_lam_mu(cls, lam, mu) -> "RealisationParams":
        lam = ScalarFn.coerce(lam)
        return cls(lam, lam + I() * ScalarFn.coerce(mu))

    @property
    def mu(self) -> ScalarFn:
        return -I() * (self.lbar - self.lam)

    def key(self) -> tuple:
        return (self.lam.to_text(), self.lbar.to_text())


def central_charges(rp: RealisationParams | None = None) -> dict:
    rp = rp or RealisationParams()
    return {
        "cL": 4 - 24 * (rp.lam * rp.lam + rp.mu * rp.mu),
        "cM": -24 * rp.lbar * rp.lbar,
    }


# ---------------------------------------------------------------------------
# the composite fields


def _prod(*xs: VAExpr) -> VAExpr:
    """Right-nested normally ordered product."""
    out = xs[-1]
    for x in reversed(xs[:-1]):
        out = normal_order(x, out)
    return out


@lru_cache(maxsize=None)
def _gw3_fields_cached(key: tuple) -> dict:
    rp = RealisationParams(*(_parse(t) for t in key))
    return _build_gw3_fields(rp)


def _parse(text: str) -> ScalarFn:
    from .scalars import parse_scalar

    return parse_scalar(text)


def _build_gw3_fields(rp: RealisationParams) -> dict[str, VAExpr]:
    H = preset("heisenberg4")
    i = I()
    lam, lb, mu = rp.lam, rp.lbar, rp.mu
    a, b, c, d = (H.field(x) for x in LABELS)
    ab = a + c * i
    bb = b + d * i

    omega = (_prod(a, a) + _prod(a, b) + _prod(b, b) + _prod(c, c) + _prod(c, d) + _prod(d, d)) * Fraction(1, 3)
    omega = omega + (a.D() + b.D()) * lam + (c.D() + d.D()) * mu

    M = (_prod(ab, ab) + _prod(ab, bb) + _prod(bb, bb)) * Fraction(1, 3) + (ab.D() + bb.D()) * lb

    pref = i / (27 * lb * SQRT10())
    V = (
        _prod(ab - bb, ab + 2 * bb, 2 * ab + bb) * 2
        + (_prod(ab.D(), 2 * ab + bb) - _prod(bb.D(), ab + 2 * bb)) * (9 * lb)
        + (ab.D(2) - bb.D(2)) * (9 * lb * lb)
    ) * pref

    W = (
        (
            _prod(a - b, ab + 2 * bb, 2 * ab + bb)
            + _prod(ab - bb, a + 2 * b, 2 * ab + bb)
            + _prod(ab - bb, ab + 2 * bb, 2 * a + b)
        )
        * 2
        + (_prod(ab.D(), 2 * ab + bb) - _prod(bb.D(), ab + 2 * bb)) * (9 * lam)
        + (
            _prod(a.D(), 2 * ab + bb)
            - _prod(b.D(), ab + 2 * bb)
            + _prod(ab.D(), 2 * a + b)
            - _prod(bb.D(), a + 2 * b)
        )
        * (9 * lb)
        + (ab.D(2) - bb.D(2)) * (18 * lam * lb)
        + (a.D(2) - b.D(2)) * (9 * lb * lb)
    ) * pref
    W = W + V * (4 / (15 * lb * lb) - lam / lb - 1)
    return {"L": omega, "W": W, "M": M, "V": V}


def gw3_fields(rp: RealisationParams | None = None) -> dict[str, VAExpr]:
    """ω (under the key ``L``), W, M, V as elements of the rank-4 Heisenberg vertex algebra."""
    rp = rp or RealisationParams()
    return dict(_gw3_fields_cached(rp.key()))


def _image(target: dict[str, VAExpr], alg: NLCA, expr: VAExpr, bindings: Mapping) -> VAExpr:
    """Map a GW3 expression into the realisation (generators to fields, central charges substituted)."""
    H = next(iter(target.values())).alg
    out = VAExpr(H)
    for word, c in expr.terms.items():
        facs = [target[alg.factor_name(f)].D(f[1]) if f[1] else target[alg.factor_name(f)] for f in word]
        term = _prod(*facs) if facs else H.vacuum()
        out = out + term * c.subs(bindings)
    return out


@dataclass
class BracketCheck:
    pair: tuple
    expected: str
    computed: str
    match: bool

    def to_json(self) -> dict:
        return {"pair": list(self.pair), "expected": self.expected, "computed": self.computed, "match": self.match}


@dataclass
class RealisationReport:
    checks: list
    central_charges: dict

    @property
    def all_match(self) -> bool:
        return all(c.match for c in self.checks)

    def __bool__(self):
        return self.all_match

    def to_json(self) -> dict:
        return {
            "central_charges": {k: v.to_text() for k, v in self.central_charges.items()},
            "brackets": [c.to_json() for c in self.checks],
            "matched": sum(c.match for c in self.checks),
            "total": len(self.checks),
        }


def _compare(target: dict, ref: NLCA, names: Sequence[str], bindings: Mapping) -> list:
    out = []
    for k, x in enumerate(names):
        for y in names[k:]:
            computed = bracket(target[x].alg, target[x], target[y])
            expected_ref = bracket(ref, ref.field(x), ref.field(y))
            deg = max(computed.degree(), expected_ref.degree())
            ok = True
            for j in range(deg + 1):
                img = _image(target, ref, expected_ref[j], bindings)
                if img != computed[j]:
                    ok = False
            out.append(BracketCheck((x, y), expected_ref.to_text(), computed.to_text() if not ok else "= expected", ok))
    return out


def verify_realization(rp: RealisationParams | None = None) -> RealisationReport:
    """All 10 λ-brackets of ω, W, M, V against the GW3 table with the realised central charges."""
    rp = rp or RealisationParams()
    F = gw3_fields(rp)
    cc = central_charges(rp)
    return RealisationReport(_compare(F, preset("gw3"), ("L", "W", "M", "V"), cc), cc)


# ---------------------------------------------------------------------------
# the GCA warm-up


def gca_fields(cL=None, cM=None) -> dict[str, VAExpr]:
    """ω = cd/2 + ((c_L-2)/24) ∂c - ∂d/2 and M = -(c_M/24)(c² - 2∂c) over ``heisenberg2``."""
    cL = symbol("cL") if cL is None else ScalarFn.coerce(cL)
    cM = symbol("cM") if cM is None else ScalarFn.coerce(cM)
    if cM.is_zero():
        from .errors import CMZero

        raise CMZero("the GCA realisation needs c_M != 0")
    H = preset("heisenberg2")
    c, d = H.field("c"), H.field("d")
    omega = _prod(c, d) * Fraction(1, 2) + c.D() * ((cL - 2) / 24) - d.D() * Fraction(1, 2)
    M = (_prod(c, c) - c.D() * 2) * (-cM / 24)
    return {"L": omega, "M": M}


def verify_gca(cL=None, cM=None) -> RealisationReport:
    F = gca_fields(cL, cM)
    cc = {"cL": symbol("cL") if cL is None else ScalarFn.coerce(cL), "cM": symbol("cM") if cM is None else ScalarFn.coerce(cM)}
    return RealisationReport(_compare(F, preset("gca"), ("L", "M"), cc), cc)


def gca_weights(p, r, cL=None, cM=None) -> dict:
    """Zero-mode eigenvalues on e^{v_{p,r}} next to the closed forms h_L[p,r], h_M[p]."""
    cL = symbol("cL") if cL is None else ScalarFn.coerce(cL)
    cM = symbol("cM") if cM is None else ScalarFn.coerce(cM)
    p, r = ScalarFn.coerce(p), ScalarFn.coerce(r)
    F = gca_fields(cL, cM)
    k = Momentum(
        {"c": (p + 1) * (cL - 2) / 24 - (2 * p - r - 1) / 2, "d": -(p + 1) / 2},
        gram={("c", "d"): 2, ("d", "c"): 2},
        labels=("c", "d"),
    )
    mod = FockModule(k, F)
    e = mod.hw().terms
    hL = mod.hw_coefficient(fock_act(F["L"], 0, e, k))
    hM = mod.hw_coefficient(fock_act(F["M"], 0, e, k))
    hL_printed = (1 - p * p) * (cL - 2) / 24 + p * (2 * p - r - 1) / 2
    hM_printed = (1 - p * p) / 24 * cM
    return {"hL": hL, "hM": hM, "hL_printed": hL_printed, "hM_printed": hM_printed, "match": hL == hL_printed and hM == hM_printed}


# ---------------------------------------------------------------------------
# momenta and Fock modules


class Momentum:
    """A vector ``Σ k_x x`` of the complexified lattice; pairings via the Gram matrix."""

    def __init__(self, coords: Mapping[str, object], gram: Mapping | None = None, labels: Sequence[str] = LABELS):
        self.labels = tuple(labels)
        self.coords = {x: ScalarFn.coerce(coords.get(x, 0)) for x in self.labels}
        if gram is None:
            self._gram = {(x, y): LATTICE4.pair(x, y) for x in LABELS for y in LABELS}
        else:
            self._gram = dict(gram)
        self._pairings: dict = {}

    def pair_basis(self, x: str, y: str) -> int:
        return self._gram.get((x, y), 0)

    def pairing(self, x: str) -> ScalarFn:
        """<k|x> for a basis label ``x``."""
        hit = self._pairings.get(x)
        if hit is not None:
            return hit
        out = const(0)
        for y, ky in self.coords.items():
            g = self.pair_basis(y, x)
            if g:
                out = out + ky * g
        self._pairings[x] = out
        return out

    def to_json(self) -> dict:
        return {x: c.to_text() for x, c in self.coords.items()}

    def __repr__(self):
        return f"Momentum({self.to_json()})"


def momentum(p, q, r, s, rp: RealisationParams | None = None) -> Momentum:
    """The momentum k of e[p,q,r,s]."""
    rp = rp or RealisationParams()
    p, q, r, s = (ScalarFn.coerce(x) for x in (p, q, r, s))
    lam, mu, lb, i = rp.lam, rp.mu, rp.lbar, I()
    A = 1 + (p + q) / 2
    B = 1 + q
    return Momentum(
        {
            "a": A * lam + (2 - r - s) / (2 * lb),
            "b": B * lam - (s - 1) / lb,
            "c": A * mu + i * (2 - r - s) / (2 * lb),
            "d": B * mu - i * (s - 1) / lb,
        }
    )


def _fock_key(f):
    return (f[1], f[0])


def fock_order(mono: tuple):
    return (level(mono), [(-k, x) for x, k in mono])


def _heis_act(x: str, m: int, mono: tuple, k: Momentum) -> dict:
    """Heisenberg mode x(m) on a Fock monomial (sorted tuple of (label, n) meaning label(-n))."""
    if m < 0:
        new = tuple(sorted(mono + ((x, -m),), key=lambda f: (-f[1], f[0])))
        return {new: const(1)}
    if m == 0:
        v = k.pairing(x)
        return {mono: v} if v else {}
    out: dict = {}
    seen = set()
    for idx, (y, n) in enumerate(mono):
        if n != m or (y, n) in seen:
            continue
        seen.add((y, n))
        g = k.pair_basis(x, y)
        if not g:
            continue
        mult = sum(1 for f in mono if f == (y, n))
        rest = mono[:idx] + mono[idx + 1 :]
        _acc(out, rest, const(m * g * mult))
    return out


class FockModule:
    """The Fock module ``M(1) ⊗ e^k`` with the mode action of a set of composite fields.

    ``fields`` maps names (L, W, M, V) to VAExprs over a Heisenberg preset;
    ``act_dict(Mode(X, n), vec)`` applies the n-th mode of field X.
    """

    def __init__(self, k: Momentum, fields: Mapping[str, VAExpr] | None = None):
        self.k = k
        self.fields = dict(fields) if fields is not None else gw3_fields()
        self._cache: dict = {}
        self._field_cache: dict = {}

    vec_order = staticmethod(fock_order)

    def hw(self) -> "FockVector":
        return FockVector(self, {(): const(1)})

    def vector(self, terms: Mapping) -> "FockVector":
        return FockVector(self, terms)

    def act_dict(self, m: Mode, vec: Mapping) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            key = (m.field, m.n, mono)
            img = self._field_cache.get(key)
            if img is None:
                img = fock_act(self.fields[m.field], m.n, {mono: const(1)}, self.k, self._cache)
                self._field_cache[key] = img
            for r, rc in img.items():
                _acc(out, r, rc * c)
        return out

    def act(self, m: Mode, v: "FockVector") -> "FockVector":
        return FockVector(self, self.act_dict(m, v.terms))

    def apply(self, combo: Iterable[tuple[object, Mode]], v: "FockVector | None" = None) -> "FockVector":
        """Σ coef · mode applied to ``v`` (the highest-weight vector by default)."""
        base = (v or self.hw()).terms
        out: dict = {}
        for c, m in combo:
            c = ScalarFn.coerce(c)
            for r, rc in self.act_dict(m, base).items():
                _acc(out, r, rc * c)
        return FockVector(self, out)

    def hw_coefficient(self, vec: Mapping) -> ScalarFn:
        return vec.get((), const(0))


class FockVector(HWVector):
    """A vector of a Fock module: ``{creation monomial: ScalarFn}`` based at e^k."""

    __slots__ = ()

    def _wrap(self, v: HWVector) -> "FockVector":
        return FockVector(self.module, v.terms)

    def __add__(self, other):
        return self._wrap(HWVector.__add__(self, other))

    def __neg__(self):
        return self._wrap(HWVector.__neg__(self))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return self._wrap(HWVector.__mul__(self, s))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        def text(mono):
            return " ".join(f"{x}({-n})" for x, n in mono) + " e^k" if mono else "e^k"

        return {text(m): c.to_text() for m, c in sorted(self.terms.items(), key=lambda t: fock_order(t[0]))}

    def __repr__(self):
        return "FockVector({" + ", ".join(f"{k}: {v}" for k, v in self.to_json().items()) + "})"


def fock_act(field_expr: VAExpr, n: int, vec: Mapping, k: Momentum | None = None, cache: dict | None = None) -> dict:
    """The n-th mode (conformal-weight convention) of a Heisenberg composite field on a Fock vector.

    ``vec`` is a ``{monomial: ScalarFn}`` map (or a FockVector, whose module
    supplies the momentum).
    """
    if isinstance(vec, FockVector):
        k = k or vec.module.k
        vec = vec.terms
    if k is None:
        raise ValueError("a momentum is needed")
    cache = {} if cache is None else cache
    alg = field_expr.alg
    out: dict = {}
    for word, c in field_expr.terms.items():
        facs = tuple((alg.factor_name(f), f[1]) for f in word)
        for mono, vc in vec.items():
            for r, rc in _word_mono(facs, n, mono, k, cache).items():
                _acc(out, r, rc * c * vc)
    return out


def _word_mono(facs: tuple, n: int, mono: tuple, k: Momentum, cache: dict) -> dict:
    key = (facs, n, mono)
    hit = cache.get(key)
    if hit is not None:
        return hit
    d = level(mono)
    out: dict = {}
    if not facs:
        if n == 0:
            out = {mono: const(1)}
    elif n <= d:
        (g, j), rest = facs[0], facs[1:]
        if not rest:
            out = _deriv_mono(g, j, n, mono, k)
        else:
            wa = 1 + j
            # creation part: a(m) Y(n - m) for m <= -wa
            for m in range(n - d, -wa + 1):
                for r, rc in _word_mono(rest, n - m, mono, k, cache).items():
                    for r2, c2 in _deriv_mono(g, j, m, r, k).items():
                        _acc(out, r2, c2 * rc)
            # annihilation part: Y(n - m) a(m) for m > -wa
            for m in range(-wa + 1, d + 1):
                for r, rc in _deriv_mono(g, j, m, mono, k).items():
                    for r2, c2 in _word_mono(rest, n - m, r, k, cache).items():
                        _acc(out, r2, c2 * rc)
    cache[key] = out
    return out


def _deriv_mono(g: str, j: int, m: int, mono: tuple, k: Momentum) -> dict:
    """Mode m of D^j g for a weight-one generator g."""
    f = 1
    for t in range(j):
        f *= -m - 1 - t
    if not f:
        return {}
    res = _heis_act(g, m, mono, k)
    if f != 1:
        cf = const(f)
        res = {r: c * cf for r, c in res.items()}
    return res


def _composite_images(fields: Mapping[str, VAExpr], bindings: Mapping) -> dict:
    """Images of the composite fields Λ and Θ of the mode relations."""
    G = preset("gw3")
    comp = composite_fields(G)
    return {
        "Lam": _image(fields, G, comp["Lambda_field"], bindings),
        "Theta": _image(fields, G, comp["Theta_field"], bindings),
    }


def fock_consistency(mod: FockModule, max_level: int = 2, modes: int = 2, rp: RealisationParams | None = None) -> list:
    """Check [X(n), Y(m)] v against the GW3 mode commutators on Fock monomials.

    Runs over X, Y in {L, W, M, V}, |n|, |m| <= ``modes`` and every creation
    monomial of level <= ``max_level``; returns the failing cases.
    """
    cc = central_charges(rp)
    extra = _composite_images(mod.fields, cc)
    ext = FockModule(mod.k, dict(mod.fields, **extra))
    ext._cache, ext._field_cache = mod._cache, mod._field_cache
    failures = []
    for mono in _fock_monomials(max_level, mod.k.labels):
        v = {mono: const(1)}
        for ai, X in enumerate(FIELDS):
            for Y in FIELDS[ai:]:
                for n in range(-modes, modes + 1):
                    for m in range(-modes, modes + 1):
                        lhs: dict = {}
                        for r, c in ext.act_dict(Mode(X, n), ext.act_dict(Mode(Y, m), v)).items():
                            _acc(lhs, r, c)
                        for r, c in ext.act_dict(Mode(Y, m), ext.act_dict(Mode(X, n), v)).items():
                            _acc(lhs, r, -c)
                        rhs: dict = {}
                        for z, c in commutator(Mode(X, n), Mode(Y, m), cc):
                            img = v if z is None else ext.act_dict(z, v)
                            for r, rc in img.items():
                                _acc(rhs, r, rc * c)
                        if lhs != rhs:
                            failures.append((X, n, Y, m, mono))
    return failures


def _fock_monomials(max_level: int, labels: Sequence[str]) -> list:
    """All creation monomials of level <= max_level."""
    parts = [(x, n) for n in range(1, max_level + 1) for x in labels]
    parts.sort(key=lambda f: (-f[1], f[0]))
    out = []

    def rec(start: int, budget: int, acc: tuple):
        out.append(acc)
        for j in range(start, len(parts)):
            x, n = parts[j]
            if n <= budget:
                rec(j, budget - n, acc + ((x, n),))

    rec(0, max_level, ())
    return out


def fock_module(p, q, r, s, rp: RealisationParams | None = None) -> FockModule:
    """The Fock module F_{p,q,r,s} generated by e[p,q,r,s]."""
    rp = rp or RealisationParams()
    return FockModule(momentum(p, q, r, s, rp), gw3_fields(rp))


# ---------------------------------------------------------------------------
# weights and the S3 action


def printed_weights(p, q, r, s, rp: RealisationParams | None = None) -> dict:
    """The closed forms for h_L, h_W, h_M, h_V at (p,q,r,s) with the realised central charges."""
    cc = central_charges(rp)
    cL, cM = cc["cL"], cc["cM"]
    p, q, r, s = (ScalarFn.coerce(x) for x in (p, q, r, s))
    i, s10 = I(), SQRT10()
    hL = (p * (1 - r) + 3 * q * (1 - s)) / 2 + (cL - 4) / 96 * (4 - p * p - 3 * q * q)
    hW = i / (2 * s10) * (2 * p * q * (1 - r) + (1 - s) * (p * p - 3 * q * q) + q * (p * p - q * q) * (52 - 5 * cL) / 120)
    hM = (4 - p * p - 3 * q * q) * cM / 96
    hV = i * cM / (48 * s10) * q * (q * q - p * p)
    return {"hL": hL, "hW": hW, "hM": hM, "hV": hV}


@dataclass
class WeightsReport:
    params: tuple
    computed: dict
    printed: dict

    @property
    def matches(self) -> dict:
        return {k: self.computed[k] == self.printed[k] for k in self.computed}

    @property
    def all_match(self) -> bool:
        return all(self.matches.values())

    def __bool__(self):
        return self.all_match

    def to_json(self) -> dict:
        return {
            "p,q,r,s": [x.to_text() for x in self.params],
            "computed": {k: v.to_text() for k, v in self.computed.items()},
            "printed": {k: v.to_text() for k, v in self.printed.items()},
            "match": self.matches,
        }


def zero_mode_weights(p, q, r, s, rp: RealisationParams | None = None) -> WeightsReport:
    """L(0), W(0), M(0), V(0) eigenvalues on e[p,q,r,s] next to the printed formulas."""
    rp = rp or RealisationParams()
    mod = fock_module(p, q, r, s, rp)
    e = mod.hw().terms
    computed = {}
    for X, h in (("L", "hL"), ("W", "hW"), ("M", "hM"), ("V", "hV")):
        img = mod.act_dict(Mode(X, 0), e)
        if set(img) - {()}:
            raise AssertionError(f"{X}(0) does not preserve e^k")
        computed[h] = mod.hw_coefficient(img)
    params = tuple(ScalarFn.coerce(x) for x in (p, q, r, s))
    return WeightsReport(params, computed, printed_weights(p, q, r, s, rp))


def sigma(t: Sequence) -> tuple:
    p, q, r, s = (ScalarFn.coerce(x) for x in t)
    return ((-p + 3 * q) / 2, -(p + q) / 2, (-r + 3 * s) / 2, -(r + s - 4) / 2)


def tau(t: Sequence) -> tuple:
    p, q, r, s = (ScalarFn.coerce(x) for x in t)
    return (-p, q, -r + 2, s)


def tezine_identities(t: Sequence) -> list[tuple]:
    """The five parameter tuples listed as having the same weights as (p,q,r,s)."""
    p, q, r, s = (ScalarFn.coerce(x) for x in t)
    return [
        (-p, q, -r + 2, s),
        ((-p + 3 * q) / 2, -(p + q) / 2, (-r + 3 * s) / 2, -(r + s - 4) / 2),
        ((p + 3 * q) / 2, (p - q) / 2, (r + 3 * s - 2) / 2, (r - s + 2) / 2),
        (-(p + 3 * q) / 2, (p - q) / 2, -(r + 3 * s - 6) / 2, (r - s + 2) / 2),
        ((p - 3 * q) / 2, -(p + q) / 2, (r - 3 * s + 4) / 2, -(r + s - 4) / 2),
    ]


@dataclass
class OrbitReport:
    orbit: list
    sigma_cubed_identity: bool
    tau_squared_identity: bool
    weights_invariant: bool
    tezine_hold: list
    tezine_in_orbit: bool

    @property
    def ok(self) -> bool:
        return self.sigma_cubed_identity and self.tau_squared_identity and self.weights_invariant and all(self.tezine_hold) and self.tezine_in_orbit

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "orbit": [[x.to_text() for x in t] for t in self.orbit],
            "sigma^3 = id": self.sigma_cubed_identity,
            "tau^2 = id": self.tau_squared_identity,
            "weights_invariant": self.weights_invariant,
            "tezine_hold": self.tezine_hold,
            "tezine_in_orbit": self.tezine_in_orbit,
        }


def s3_orbit(p=None, q=None, r=None, s=None, rp: RealisationParams | None = None) -> OrbitReport:
    """The orbit of (p,q,r,s) under <σ, τ>, with the group relations and weight invariance checked."""
    t = tuple(symbol(n) if v is None else ScalarFn.coerce(v) for n, v in zip("pqrs", (p, q, r, s)))
    orbit = [t, sigma(t), sigma(sigma(t)), tau(t), tau(sigma(t)), tau(sigma(sigma(t)))]
    w0 = printed_weights(*t, rp=rp)
    inv = all(printed_weights(*u, rp=rp) == w0 for u in orbit)
    tez = [printed_weights(*u, rp=rp) == w0 for u in tezine_identities(t)]
    in_orbit = all(u in orbit for u in tezine_identities(t))
    return OrbitReport(orbit, sigma(sigma(sigma(t))) == t, tau(tau(t)) == t, inv, tez, in_orbit)


# ---------------------------------------------------------------------------
# images of the level-one vectors


def _combo(mod: FockModule, coeffs: Mapping[str, object]) -> FockVector:
    return mod.apply([(c, Mode(X, -1)) for X, c in coeffs.items()])


def _weights(p, q, r, s, rp) -> dict:
    return printed_weights(p, q, r, s, rp)


def _div(a: ScalarFn, b: ScalarFn, what: str) -> ScalarFn:
    if b.is_zero():
        raise ParameterPole(f"{what}: denominator vanishes")
    return a / b


def _annihilated(mod: FockModule, v: FockVector) -> bool:
    top = max(v.levels(), default=0)
    return all(not mod.act_dict(Mode(X, k), v.terms) for X in FIELDS for k in range(1, top + 1))


def wt1_images(q=None, r=None, s=None, rp: RealisationParams | None = None) -> dict:
    """Images of the level-one (sub)singular vectors in Fock modules; a JSON-able report.

    ``q, r, s`` default to symbols; sub-cases fix them to their loci.
    """
    rp = rp or RealisationParams()
    q = symbol("q") if q is None else ScalarFn.coerce(q)
    r = symbol("r") if r is None else ScalarFn.coerce(r)
    s = symbol("s") if s is None else ScalarFn.coerce(s)
    cc = central_charges(rp)
    iq = I() / SQRT10()
    out: dict = {}

    def s_coeffs(h):
        return {"V": 1, "M": -3 * _div(h["hV"], 2 * h["hM"], "s = V(-1) - 3h_V/(2h_M) M(-1)")}

    # s at p = 1
    h = _weights(1, q, r, s, rp)
    F = fock_module(1, q, r, s, rp)
    v = _combo(F, s_coeffs(h))
    Ft = fock_module(-1, q, 2 - r, s, rp)
    vt = _combo(Ft, s_coeffs(_weights(-1, q, 2 - r, s, rp)))
    out["s"] = {"nonzero": bool(v), "positive_modes_annihilate": _annihilated(F, v), "tau_image_zero": not vt}

    # (a) q = 1: h_M = h_V = 0, s1 = M(-1)
    h = _weights(1, 1, r, s, rp)
    F = fock_module(1, 1, r, s, rp)
    s1 = _combo(F, {"M": 1})
    plus = _combo(F, {"V": 1, "M": iq})
    minus = _combo(F, {"V": 1, "M": -iq})
    N = Submodule(F, [s1], 1)
    rep = quotient_and_subsingular([x for x in (plus,) if x], s1, F)
    out["a"] = {
        "hM_zero": h["hM"].is_zero(),
        "hM_zero_iff_q_pm1": _hm_roots(rp),
        "s1_nonzero": bool(s1),
        "s1_subsingular": rep.is_subsingular,
        "s1_singular": _annihilated(F, s1),
        "s1_pm_in_submodule": N.contains(plus) and N.contains(minus),
        "s1_pm_singular": _annihilated(F, plus) and _annihilated(F, minus),
        "tau_image_zero": not _combo(fock_module(-1, -1, r, s, rp), {"M": 1}),
    }

    # (b) r = 1 on the branch where the level-one condition holds
    h = _weights(1, q, 1, s, rp)
    P = dict(cc, **h)
    root = I() * q * SQRT10() / 2
    branch = None
    for sign in (1, -1):
        if uvj_expression(P, sign * root).is_zero():
            branch = sign
            break
    F = fock_module(1, q, 1, s, rp)
    b = {"uvj_holds": branch is not None, "root": (branch * root).to_text() if branch else None}
    cM, cL, hL, hM, hV = cc["cM"], cc["cL"], h["hL"], h["hM"], h["hV"]
    cm = -Fraction(16, 5) / cM * (_div(hM, 3 * hV * cM, "s2") * (cM * hL - hM * (cL - 4)) - 3 * _div(hV, hM, "s2"))
    s2_coeffs = {"W": 1, "L": -3 * _div(hV, 2 * hM, "s2"), "M": cm}
    s2 = _combo(F, s2_coeffs)
    sv = _combo(F, s_coeffs(h))
    b["s2_nonzero"] = bool(s2)
    b["s2_subsingular"] = quotient_and_subsingular([sv], s2, F).is_subsingular if s2 else False
    b["tau_image_zero"] = not _combo(fock_module(-1, q, 1, s, rp), s2_coeffs)
    out["b"] = b

    # (ab) q = r = 1: h_M = h_V = 0, h_L = 3 i sqrt(5/2) h_W
    h = _weights(1, 1, 1, s, rp)
    F = fock_module(1, 1, 1, s, rp)
    s3c = {"W": 1, "L": iq}
    s3 = _combo(F, s3c)
    out["ab"] = {
        "hL_relation": h["hL"] == 3 * I() * SQRT10() / 2 * h["hW"],
        "s3_nonzero": bool(s3),
        "s3_subsingular": quotient_and_subsingular([_combo(F, {"M": 1})], s3, F).is_subsingular if s3 else False,
        # the weight-dependent form W(-1) - 3h_W/(2h_L) L(-1), taken at the target's weights
        "tau_image_zero": not _combo(fock_module(-1, -1, 1, s, rp), _s3_weight_form(_weights(-1, -1, 1, s, rp))),
        "tau_image_zero_constant_form": not _combo(fock_module(-1, -1, 1, s, rp), s3c),
        "weight_form_equals_constant_form": _s3_weight_form(h) == {"W": 1, "L": iq},
    }

    # (abc) q = r = s = 1: h = 0
    h = _weights(1, 1, 1, 1, rp)
    F = fock_module(1, 1, 1, 1, rp)
    s4 = _combo(F, {"L": 1})
    out["abc"] = {
        "h_zero": all(x.is_zero() for x in h.values()),
        "s4_nonzero": bool(s4),
        "s4_subsingular": quotient_and_subsingular([_combo(F, {"M": 1}), _combo(F, s3c)], s4, F).is_subsingular if s4 else False,
        "tau_image_zero": not _combo(fock_module(-1, -1, 1, 1, rp), {"L": 1}),
    }
    informational = {"s1_singular", "tau_image_zero_constant_form", "weight_form_equals_constant_form", "root"}
    out["all_pass"] = all(
        v for part in out.values() for k, v in part.items() if k not in informational
    ) and out["ab"]["weight_form_equals_constant_form"]
    return out


def _s3_weight_form(h: Mapping) -> dict:
    return {"W": 1, "L": -3 * _div(h["hW"], 2 * h["hL"], "s3 = W(-1) - 3h_W/(2h_L) L(-1)")}


def _hm_roots(rp) -> bool:
    """h_M[1,q,r,s] vanishes at q = ±1 and (as a polynomial in q) only there."""
    q = symbol("q")
    hM = printed_weights(1, q, symbol("r"), symbol("s"), rp)["hM"]
    at = [hM.subs({"q": v}).is_zero() for v in (1, -1)]
    cM = central_charges(rp)["cM"]
    return all(at) and hM == cM * (1 - q * q) / 32
