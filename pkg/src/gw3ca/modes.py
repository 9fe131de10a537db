"""Mode operators of the Galilean W3 algebra acting on Verma modules.

A Verma module vector is a ``{monomial: ScalarFn}`` map.  A monomial is a
tuple of creation modes ``(field, k)`` meaning ``X(-k)`` with ``k >= 1``,
kept in the canonical PBW order: the V-block, then M, W, L, each with the
most negative mode leftmost.  Acting with a mode pushes it to the right
through the monomial, emitting commutator terms, until it reaches the
highest-weight vector.

Composite modes ``Lam(k)`` and ``Theta(k)`` (the modes of
``:LM: - (3/10) D^2 M`` and ``:MM:``) are infinite normally ordered sums;
on a vector of level ``d`` only the summands inside a finite window can act,
and only those are evaluated.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .scalars import ScalarFn, const, symbol

__all__ = [
    "FIELDS",
    "Mode",
    "HWVector",
    "VermaModule",
    "act",
    "adjoint",
    "commutator",
    "state_field_check",
    "hw_params",
]

#: elementary fields in canonical PBW order (leftmost first) with weights
FIELDS = ("V", "M", "W", "L")
WEIGHT = {"L": 2, "M": 2, "W": 3, "V": 3, "Lam": 4, "Theta": 4}
_POS = {f: k for k, f in enumerate(FIELDS)}
_ADJ_SIGN = {"L": 1, "M": 1, "W": -1, "V": -1, "Lam": 1, "Theta": 1}
PARAM_NAMES = ("cL", "cM", "hL", "hW", "hM", "hV")
_H = {"L": "hL", "W": "hW", "M": "hM", "V": "hV"}


@dataclass(frozen=True, order=True)
class Mode:
    """The mode ``field(n)``; ``field`` is one of L, W, M, V, Lam, Theta."""

    field: str
    n: int

    def __post_init__(self):
        if self.field not in WEIGHT:
            raise ValueError(f"unknown field {self.field!r}")

    def __str__(self):
        return f"{self.field}({self.n})"


def _c(x) -> ScalarFn:
    return const(x) if isinstance(x, (int, Fraction)) else ScalarFn.coerce(x)


def hw_params(**bindings) -> dict[str, ScalarFn]:
    """Central charges and highest weights; unspecified entries stay symbolic."""
    out = {}
    for name in PARAM_NAMES:
        v = bindings.pop(name, None)
        out[name] = symbol(name) if v is None else ScalarFn.coerce(v)
    if bindings:
        raise ValueError(f"unknown parameters: {', '.join(bindings)}")
    return out


def adjoint(m: Mode) -> tuple[int, Mode]:
    """``X(n)* = sign * X(-n)`` for the contragredient form."""
    return _ADJ_SIGN[m.field], Mode(m.field, -m.n)


# ---------------------------------------------------------------------------
# commutation relations


def commutator(x: Mode, y: Mode, params: Mapping | None = None, variant: str = "gw3") -> list:
    """Right-hand side of ``[x, y]`` as ``[(Mode or None, coef)]``; ``None`` is the identity.

    ``variant='gw3_cm0'`` gives the relations of the algebra with ``W`` replaced
    by the rescaled ``c_M W`` and ``c_M = 0``.
    """
    if x.field in ("Lam", "Theta") or y.field in ("Lam", "Theta"):
        raise ValueError("commutator is defined for elementary modes only")
    P = params if params is not None else hw_params()
    key = (x.field, y.field)
    if key in _RULES:
        return _RULES[key](x.n, y.n, P, variant)
    if (y.field, x.field) in _RULES:
        return [(m, -c) for m, c in _RULES[(y.field, x.field)](y.n, x.n, P, variant)]
    return []


def _central(n: int, m: int, poly: int, c: ScalarFn) -> list:
    if n + m != 0 or not poly:
        return []
    return [(None, c * poly)]


def _ll(n, m, P, v):
    return _nz([(Mode("L", n + m), _c(n - m))] + _central(n, m, Fraction(n * (n * n - 1), 12), P["cL"]))


def _lw(n, m, P, v):
    return _nz([(Mode("W", n + m), _c(2 * n - m))])


def _lm(n, m, P, v):
    out = [(Mode("M", n + m), _c(n - m))]
    if v != "gw3_cm0":
        out += _central(n, m, Fraction(n * (n * n - 1), 12), P["cM"])
    return _nz(out)


def _lv(n, m, P, v):
    return _nz([(Mode("V", n + m), _c(2 * n - m))])


def _mw(n, m, P, v):
    if v == "gw3_cm0":
        return []
    return _nz([(Mode("V", n + m), _c(2 * n - m))])


def _ww(n, m, P, v):
    s = Fraction(n - m, 30)
    cL, cM = P["cL"], P["cM"]
    theta = (cL + Fraction(44, 5)) * (-96)
    if v == "gw3_cm0":
        return _nz([(Mode("Theta", n + m), theta * s)])
    out = [
        (Mode("L", n + m), _c(s * (2 * n * n + 2 * m * m - n * m - 8))),
        (Mode("Lam", n + m), _c(s * 192) / cM),
        (Mode("Theta", n + m), theta * s / (cM * cM)),
    ]
    out += _central(n, m, Fraction(n * (n * n - 1) * (n * n - 4), 360), cL)
    return _nz(out)


def _wv(n, m, P, v):
    s = Fraction(n - m, 30)
    if v == "gw3_cm0":
        return _nz([(Mode("Theta", n + m), _c(s * 96))])
    cM = P["cM"]
    out = [
        (Mode("M", n + m), _c(s * (2 * n * n + 2 * m * m - n * m - 8))),
        (Mode("Theta", n + m), _c(s * 96) / cM),
    ]
    out += _central(n, m, Fraction(n * (n * n - 1) * (n * n - 4), 360), cM)
    return _nz(out)


def _nz(terms):
    return [(m, c) for m, c in terms if c]


_RULES = {
    ("L", "L"): _ll,
    ("L", "W"): _lw,
    ("L", "M"): _lm,
    ("L", "V"): _lv,
    ("M", "W"): _mw,
    ("W", "W"): _ww,
    ("W", "V"): _wv,
}


# ---------------------------------------------------------------------------
# the module


def _key(f: tuple) -> tuple:
    return (_POS[f[0]], -f[1])


def level(mono: tuple) -> int:
    return sum(k for _, k in mono)


class VermaModule:
    """``V(c, h)`` with memoised mode action.

    ``params`` maps cL, cM, hL, hW, hM, hV to ScalarFn values (symbolic by
    default).  ``variant`` selects the commutation relations (``gw3`` or
    ``gw3_cm0``).  ``slack`` widens the composite-mode windows; results do
    not depend on it.
    """

    def __init__(self, params: Mapping | None = None, variant: str = "gw3", slack: int = 0):
        if variant not in ("gw3", "gw3_cm0"):
            raise ValueError(f"unknown variant {variant!r}")
        P = hw_params()
        for k, v in (params or {}).items():
            if k not in P:
                raise ValueError(f"unknown parameter {k!r}")
            P[k] = ScalarFn.coerce(v)
        self.params = P
        self.variant = variant
        self.slack = slack
        self._cache: dict = {}
        self._comm: dict = {}
        self._lock = threading.Lock()
        self._one = const(1)

    # -- vectors ------------------------------------------------------------
    def hw(self) -> "HWVector":
        return HWVector(self, {(): self._one})

    def vector(self, terms: Mapping) -> "HWVector":
        return HWVector(self, terms)

    def monomial(self, modes: Iterable) -> "HWVector":
        """``X1(n1) X2(n2) ... v_h`` for modes given left to right."""
        v = {(): self._one}
        for m in reversed(list(modes)):
            if not isinstance(m, Mode):
                m = Mode(*m)
            v = self.act_dict(m, v)
        return HWVector(self, v)

    # -- action -------------------------------------------------------------
    def _comm_terms(self, x: Mode, y: Mode) -> list:
        key = (x, y)
        hit = self._comm.get(key)
        if hit is None:
            hit = commutator(x, y, self.params, self.variant)
            self._comm[key] = hit
        return hit

    def act_dict(self, m: Mode, vec: Mapping) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            for r, rc in self._act_mono(m, mono).items():
                _acc(out, r, rc * c)
        return out

    def _act_mono(self, m: Mode, mono: tuple) -> dict:
        if m.field == "Lam":
            return self._act_lam(m.n, mono)
        if m.field == "Theta":
            return self._act_theta(m.n, mono)
        X, n = m.field, m.n
        if n > level(mono):
            return {}
        if not mono:
            if n == 0:
                h = self.params[_H[X]]
                return {(): h} if h else {}
            return {((X, -n),): self._one}
        if n < 0 and _key((X, -n)) <= _key(mono[0]):
            return {((X, -n),) + mono: self._one}
        key = (m, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        head, rest = mono[0], mono[1:]
        hm = Mode(head[0], -head[1])
        out: dict = {}
        # X(n) head rest = head (X(n) rest) + [X(n), head] rest
        for r, c in self._act_mono(m, rest).items():
            for r2, c2 in self._act_mono(hm, r).items():
                _acc(out, r2, c2 * c)
        for y, c in self._comm_terms(m, hm):
            if y is None:
                _acc(out, rest, c)
            else:
                for r, rc in self._act_mono(y, rest).items():
                    _acc(out, r, rc * c)
        self._cache[key] = out
        return out

    def _pair_sum(self, pairs: Iterable[tuple[Mode, Mode]], mono: tuple) -> dict:
        """Σ first(second(mono)) over the given (first, second) mode pairs."""
        out: dict = {}
        for a, b in pairs:
            for r, c in self._act_mono(b, mono).items():
                for r2, c2 in self._act_mono(a, r).items():
                    _acc(out, r2, c2 * c)
        return out

    def lam_window(self, k: int, d: int) -> range:
        # L(m) M(k-m) with m <= -2 needs k - m <= d; M(k-m) L(m) with m >= -1 needs m <= d
        return range(min(k - d, -1) - self.slack, d + 1 + self.slack)

    def _act_lam(self, k: int, mono: tuple) -> dict:
        d = level(mono)
        if k > d:
            return {}
        key = (Mode("Lam", k), mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        # :L(m) M(k-m): = L(m) M(k-m) for m <= -2, M(k-m) L(m) otherwise
        pairs = []
        for m in self.lam_window(k, d):
            if m <= -2:
                pairs.append((Mode("L", m), Mode("M", k - m)))
            else:
                pairs.append((Mode("M", k - m), Mode("L", m)))
        out = self._pair_sum(pairs, mono)
        corr = const(Fraction(-3 * (k + 2) * (k + 3), 10))
        if corr:
            for r, c in self._act_mono(Mode("M", k), mono).items():
                _acc(out, r, c * corr)
        self._cache[key] = out
        return out

    def _act_theta(self, k: int, mono: tuple) -> dict:
        d = level(mono)
        if k > d:
            return {}
        key = (Mode("Theta", k), mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        pairs = [(Mode("M", i), Mode("M", k - i)) for i in range(k - d - self.slack, d + 1 + self.slack)]
        out = self._pair_sum(pairs, mono)
        self._cache[key] = out
        return out

    def theta_relabelled(self, k: int, vec: Mapping) -> dict:
        """Θ(k) summed as Σ_i M(k-i) M(i) (the relabelled form)."""
        out: dict = {}
        for mono, c in vec.items():
            d = level(mono)
            if k > d:
                continue
            pairs = [(Mode("M", k - i), Mode("M", i)) for i in range(k - d - self.slack, d + 1 + self.slack)]
            for r, rc in self._pair_sum(pairs, mono).items():
                _acc(out, r, rc * c)
        return out

    # -- fields of the enveloping algebra ----------------------------------
    def act_field(self, expr, n: int, vec: Mapping) -> dict:
        """The ``n``-th mode (conformal-weight convention) of a VAExpr over gw3."""
        alg = expr.alg
        out: dict = {}
        for word, c in expr.terms.items():
            facs = [(alg.factor_name(f), f[1]) for f in word]
            for r, rc in self._act_word(tuple(facs), n, vec).items():
                _acc(out, r, rc * c)
        return out

    def _act_word(self, facs: tuple, n: int, vec: Mapping) -> dict:
        if not facs:
            return dict(vec) if n == 0 else {}
        (g, k), rest = facs[0], facs[1:]
        if not rest:
            return self._act_deriv(g, k, n, vec)
        wa = WEIGHT[g] + k
        out: dict = {}
        for mono, c in vec.items():
            d = level(mono)
            single = {mono: c}
            # creation part: a(m) Y(n - m) for m <= -wa
            for m in range(n - d, -wa + 1):
                y = self._act_word(rest, n - m, single)
                if y:
                    for r, rc in self._act_deriv(g, k, m, y).items():
                        _acc(out, r, rc)
            # annihilation part: Y(n - m) a(m) for m > -wa
            for m in range(-wa + 1, d + 1):
                a = self._act_deriv(g, k, m, single)
                if a:
                    for r, rc in self._act_word(rest, n - m, a).items():
                        _acc(out, r, rc)
        return out

    def _act_deriv(self, g: str, k: int, m: int, vec: Mapping) -> dict:
        """Mode ``m`` of ``D^k g``: g(m) times Π_{j<k} (-m - Δg - j)."""
        f = 1
        for j in range(k):
            f *= -m - WEIGHT[g] - j
        if not f:
            return {}
        res = self.act_dict(Mode(g, m), vec)
        if f != 1:
            cf = const(f)
            res = {r: c * cf for r, c in res.items()}
        return res

    def hw_coefficient(self, vec: Mapping) -> ScalarFn:
        return vec.get((), const(0))


def _acc(target: dict, key, coef: ScalarFn) -> None:
    if not coef:
        return
    old = target.get(key)
    if old is None:
        target[key] = coef
    else:
        new = old + coef
        if new:
            target[key] = new
        else:
            del target[key]


class HWVector:
    """A vector of a Verma module: ``{PBW monomial: ScalarFn}``."""

    __slots__ = ("module", "terms")

    def __init__(self, module: VermaModule, terms: Mapping | None = None):
        self.module = module
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: "HWVector"):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return HWVector(self.module, out)

    def __neg__(self):
        m1 = const(-1)
        return HWVector(self.module, {k: v * m1 for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        s = ScalarFn.coerce(s)
        return HWVector(self.module, {k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HWVector):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self) -> set[int]:
        return {level(m) for m in self.terms}

    def coeff(self, mono: tuple) -> ScalarFn:
        return self.terms.get(tuple(mono), const(0))

    def to_json(self) -> dict:
        return {monomial_text(m): c.to_text() for m, c in sorted(self.terms.items(), key=lambda t: _mono_sort(t[0]))}

    def __repr__(self):
        return "HWVector({" + ", ".join(f"{k}: {v}" for k, v in self.to_json().items()) + "})"


def _mono_sort(mono):
    return (level(mono), [_key(f) for f in mono])


def monomial_text(mono: tuple) -> str:
    if not mono:
        return "v"
    return " ".join(f"{f}({-k})" for f, k in mono) + " v"


def act(m: Mode, v: HWVector) -> HWVector:
    """Apply a mode (elementary or composite) to a Verma-module vector."""
    return HWVector(v.module, v.module.act_dict(m, v.terms))


# ---------------------------------------------------------------------------
# state-field cross-check


def state_field_check(P, A, B, N: int, module: VermaModule | None = None, modes: int | None = None) -> bool:
    """Compare direct commutators of field modes with the λ-bracket formula.

    For every basis monomial of level <= ``N`` and all mode indices
    ``|m|, |n| <= modes`` (default ``N``), checks
    ``[A(m), B(n)] v = Σ_j C(m + Δ_A - 1, j) (A_(j) B)(m + n) v``.
    """
    from math import factorial

    from .conformal import bracket

    if isinstance(A, str):
        A = P.field(A)
    if isinstance(B, str):
        B = P.field(B)
    mod = module or VermaModule(hw_params(hL=0, hW=0, hM=0, hV=0))
    wa = A.weight()
    br = bracket(P, A, B)
    central = {k: mod.params[k] for k in ("cL", "cM")}
    prods = {j: e.subs(central) * factorial(j) for j, e in ((j, br[j]) for j in range(br.degree() + 1)) if not e.is_zero()}
    K = N if modes is None else modes
    from .verma import pbw_monomials

    for lev in range(N + 1):
        for mono in pbw_monomials(lev):
            v = {mono: const(1)}
            for m in range(-K, K + 1):
                for n in range(-K, K + 1):
                    lhs = {}
                    for r, c in mod.act_field(A, m, mod.act_field(B, n, v)).items():
                        _acc(lhs, r, c)
                    for r, c in mod.act_field(B, n, mod.act_field(A, m, v)).items():
                        _acc(lhs, r, -c)
                    rhs: dict = {}
                    for j, e in prods.items():
                        b = _binom(m + wa - 1, j)
                        if b:
                            for r, c in mod.act_field(e, m + n, v).items():
                                _acc(rhs, r, c * b)
                    if lhs != rhs:
                        return False
    return True


def _binom(x: int, j: int) -> int:
    """Generalised binomial coefficient C(x, j) for integer x (possibly negative)."""
    if j < 0:
        return 0
    num = 1
    for t in range(j):
        num *= x - t
    from math import factorial

    return num // factorial(j)
