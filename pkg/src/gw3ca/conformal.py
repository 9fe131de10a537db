"""Lambda-bracket calculus in the universal enveloping vertex algebra of an NLCA.

Elements of V(R) are stored in normal form: linear combinations of
right-nested normally ordered words ``:a1 :a2 ... an::`` whose factors are
derivatives ``D^k g`` of generators.  Factors are sorted by the algebra's
generator order (smallest first) and, within one generator, by decreasing
derivative order.  The empty word is the vacuum.  Reduction to normal form
is the quotient map T(R) -> V(R); it uses three rules:

* reordering   ``:a:bY:: = :b:aY:: + :(int_{-D}^0 [a_l b] dl) Y:``
* quasi-associativity for products whose left factor is itself a word
* Leibniz rule for ``D``

Brackets of words are computed with the non-commutative Wick formula on the
right argument and skew-symmetry for a word against a single factor.  All
intermediate results are memoised per algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping

from .scalars import ScalarFn, const, fsum

DGen = tuple  # (generator rank, D-order); rank = n - 1 - position in the order
Word = tuple  # tuple of DGen, normal form

__all__ = [
    "Generator",
    "NLCA",
    "VAExpr",
    "LambdaPoly",
    "Lambda2Poly",
    "normal_order",
    "apply_D",
    "bracket",
    "jacobi_residual",
    "composite_fields",
]


@dataclass(frozen=True)
class Generator:
    name: str
    weight: int
    index: int  # position in the normal-ordering total order (smallest first)


# ---------------------------------------------------------------------------
# dict helpers (internal representation)


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


def _acc_dict(target: dict, src: Mapping, scale: ScalarFn | None = None) -> None:
    for k, v in src.items():
        _acc(target, k, v if scale is None else v * scale)


def _lp_acc(target: dict, n: int, expr: Mapping, scale: ScalarFn | None = None) -> None:
    if not expr:
        return
    slot = target.setdefault(n, {})
    _acc_dict(slot, expr, scale)
    if not slot:
        del target[n]


_ONE = None


def _one() -> ScalarFn:
    global _ONE
    if _ONE is None:
        _ONE = const(1)
    return _ONE


_FRAC_CACHE: dict = {}


def _q(a: int, b: int = 1) -> ScalarFn:
    key = (a, b)
    v = _FRAC_CACHE.get(key)
    if v is None:
        from fractions import Fraction

        v = const(Fraction(a, b))
        _FRAC_CACHE[key] = v
    return v


class NLCA:
    """A non-linear Lie conformal algebra together with its enveloping-algebra engine.

    ``table`` maps ordered pairs of generator names to raw λ-polynomials:
    ``{power: [(coef, (factor, ...)), ...]}`` where each factor is
    ``(name, dorder)`` and a tuple of factors is read as a right-nested
    normally ordered product.  Missing pairs are filled by skew-symmetry;
    pairs missing in both orders bracket to zero.
    """

    def __init__(
        self,
        name: str,
        generators: Iterable[tuple[str, int]],
        table: Mapping[tuple[str, str], Mapping[int, list]],
        central: Iterable[str] = (),
        order: Iterable[str] | None = None,
    ):
        self.name = name
        gens = list(generators)
        self.display = [g for g, _ in gens]
        ranks = list(order) if order is not None else self.display
        if sorted(ranks) != sorted(self.display):
            raise ValueError("order must list every generator once")
        self.generators = [
            Generator(g, w, ranks.index(g)) for g, w in gens
        ]
        self.by_name = {g.name: g for g in self.generators}
        # Internally a factor is (rank, dorder) with rank decreasing along the
        # order, so a word is in normal form iff its factor tuples are
        # non-increasing.
        top = len(self.generators) - 1
        self._rank = {g.name: top - g.index for g in self.generators}
        self._gen_of_rank = {top - g.index: g for g in self.generators}
        self.central = tuple(central)
        self._raw = {}
        for (a, b), entry in table.items():
            self._raw[(self._rank[a], self._rank[b])] = entry
        self._table: dict = {}
        self._nf_seq_cache: dict = {}
        self._ins_cache: dict = {}
        self._prod_cache: dict = {}
        self._br_cache: dict = {}
        self._D_cache: dict = {}

    # -- naming -------------------------------------------------------------
    def gen(self, name: str) -> Generator:
        return self.by_name[name]

    def weight_of(self, f: DGen) -> int:
        return self._gen_of_rank[f[0]].weight + f[1]

    def word_weight(self, w: Word) -> int:
        return sum(self.weight_of(f) for f in w)

    def factor_name(self, f: DGen) -> str:
        return self._gen_of_rank[f[0]].name

    def dgen(self, name: str, dorder: int = 0) -> DGen:
        return (self._rank[name], dorder)

    # -- element constructors ----------------------------------------------
    def vacuum(self) -> "VAExpr":
        return VAExpr(self, {(): _one()})

    def scalar(self, c) -> "VAExpr":
        c = ScalarFn.coerce(c)
        return VAExpr(self, {(): c} if c else {})

    def field(self, name: str, dorder: int = 0) -> "VAExpr":
        return VAExpr(self, {((self._rank[name], dorder),): _one()})

    def product(self, factors: Iterable) -> "VAExpr":
        """Normal form of the right-nested product of ``(name, dorder)`` factors."""
        seq = tuple(self.dgen(*f) if isinstance(f, tuple) else self.dgen(f) for f in factors)
        return VAExpr(self, self._nf_seq(seq))

    def parse_word(self, text: str) -> "VAExpr":
        """Parse juxtaposed factors such as ``LM``, ``(DW)M`` or ``D^2M L``."""
        return self.product(_parse_factors(self, text))

    # -- base table ---------------------------------------------------------
    def _entry(self, r1: int, r2: int) -> dict:
        key = (r1, r2)
        if key in self._table:
            return self._table[key]
        if key in self._raw:
            lp: dict = {}
            for n, terms in self._raw[key].items():
                for coef, seq in terms:
                    if isinstance(seq, str):
                        seq = _parse_factors(self, seq)
                    s = tuple((self._rank[g], k) for g, k in seq)
                    _lp_acc(lp, n, self._nf_seq(s), ScalarFn.coerce(coef))
        elif (r2, r1) in self._raw:
            lp = _neg(_skew(self, self._entry(r2, r1)))
        else:
            lp = {}
        self._table[key] = lp
        return lp

    def table(self, a: str, b: str) -> "LambdaPoly":
        return LambdaPoly(self, self._entry(self._rank[a], self._rank[b]))

    # -- normal form --------------------------------------------------------
    def _nf_seq(self, seq: tuple) -> dict:
        """Normal form of the right-nested product of the factors in ``seq``."""
        if len(seq) <= 1:
            return {seq: _one()}
        hit = self._nf_seq_cache.get(seq)
        if hit is not None:
            return hit
        if all(seq[k] >= seq[k + 1] for k in range(len(seq) - 1)):
            out = {seq: _one()}
        else:
            rest = self._nf_seq(seq[1:])
            out = {}
            for w, c in rest.items():
                _acc_dict(out, self._insert(seq[0], w), c)
        self._nf_seq_cache[seq] = out
        return out

    def _insert(self, g: DGen, w: Word) -> dict:
        """:g w: for a single factor ``g`` and a normal-form word ``w``."""
        if not w or g >= w[0]:
            return {(g,) + w: _one()}
        key = (g, w)
        hit = self._ins_cache.get(key)
        if hit is not None:
            return hit
        head, tail = w[0], w[1:]
        out: dict = {}
        # :g :head tail:: = :head :g tail:: + :(int_{-D}^0 [g_l head]) tail:
        for u, c in self._insert(g, tail).items():
            _acc_dict(out, self._insert(head, u), c)
        comm = _integral_minus_D(self, self._br_gg(g, head))
        for u, c in comm.items():
            _acc_dict(out, self._prod_word(u, tail), c)
        self._ins_cache[key] = out
        return out

    def _prod_word(self, a: Word, b: Word) -> dict:
        """:a b: for normal-form words, by quasi-associativity on ``a``."""
        if not a:
            return {b: _one()}
        if len(a) == 1:
            return self._insert(a[0], b)
        if not b:
            return {a: _one()}
        key = (a, b)
        hit = self._prod_cache.get(key)
        if hit is not None:
            return hit
        head, rest = a[0], a[1:]
        out: dict = {}
        # ::head rest: b: = :head :rest b:: + :(int_0^D head)[rest_l b]: + :(int_0^D rest)[head_l b]:
        for u, c in self._prod_word(rest, b).items():
            _acc_dict(out, self._insert(head, u), c)
        for n, expr in self._br_ww(rest, b).items():
            dh = (head[0], head[1] + n + 1)
            s = _q(1, n + 1)
            for u, c in expr.items():
                _acc_dict(out, self._insert(dh, u), c * s)
        for n, expr in self._br_ww((head,), b).items():
            drest = self._D_word_pow(rest, n + 1)
            s = _q(1, n + 1)
            for v, cv in drest.items():
                for u, c in expr.items():
                    _acc_dict(out, self._prod_word(v, u), c * cv * s)
        self._prod_cache[key] = out
        return out

    def prod(self, A: Mapping, B: Mapping) -> dict:
        out: dict = {}
        for a, ca in A.items():
            for b, cb in B.items():
                _acc_dict(out, self._prod_word(a, b), ca * cb)
        return out

    # -- derivation ---------------------------------------------------------
    def _D_word(self, w: Word) -> dict:
        if not w:
            return {}
        hit = self._D_cache.get(w)
        if hit is not None:
            return hit
        out: dict = {}
        for k, f in enumerate(w):
            seq = w[:k] + ((f[0], f[1] + 1),) + w[k + 1:]
            _acc_dict(out, self._nf_seq(seq))
        self._D_cache[w] = out
        return out

    def _D_word_pow(self, w: Word, n: int) -> dict:
        cur = {w: _one()}
        for _ in range(n):
            cur = self.D(cur)
        return cur

    def D(self, A: Mapping) -> dict:
        out: dict = {}
        for w, c in A.items():
            _acc_dict(out, self._D_word(w), c)
        return out

    def D_pow(self, A: Mapping, n: int) -> dict:
        for _ in range(n):
            A = self.D(A)
        return dict(A)

    # -- brackets -----------------------------------------------------------
    def _br_gg(self, f: DGen, g: DGen) -> dict:
        """[D^j a _l D^k b] = (-l)^j (l + D)^k [a_l b]."""
        base = self._entry(f[0], g[0])
        if not base:
            return {}
        j, k = f[1], g[1]
        if not j and not k:
            return base
        key = ("gg", f, g)
        hit = self._br_cache.get(key)
        if hit is not None:
            return hit
        out = base
        if k:
            out = _shift_l_plus_D(self, out, k)
        if j:
            sign = _q(-1) if j % 2 else None
            out = {n + j: (_scale(e, sign) if sign else e) for n, e in out.items()}
        self._br_cache[key] = out
        return out

    def _br_ww(self, a: Word, b: Word) -> dict:
        """[a_l b] for normal-form words; returns {power: {word: coef}}."""
        if not a or not b:
            return {}
        if len(a) == 1 and len(b) == 1:
            return self._br_gg(a[0], b[0])
        key = (a, b)
        hit = self._br_cache.get(key)
        if hit is not None:
            return hit
        if len(b) == 1:
            # skew-symmetry: [a_l g] = -[g_{-l-D} a]
            out = _neg(_skew(self, self._br_ww(b, a)))
        else:
            out = self._lwick(a, b[0], b[1:])
        self._br_cache[key] = out
        return out

    def _lwick(self, a: Word, head: DGen, tail: Word) -> dict:
        """[a_l :head tail:] = :[a_l head] tail: + :head [a_l tail]: + int_0^l [[a_l head]_m tail] dm."""
        out: dict = {}
        ab = self._br_ww(a, (head,))
        for n, expr in ab.items():
            for u, c in expr.items():
                _lp_acc(out, n, self._prod_word(u, tail), c)
        for n, expr in self._br_ww(a, tail).items():
            for u, c in expr.items():
                _lp_acc(out, n, self._insert(head, u), c)
        for n, expr in ab.items():
            for u, c in expr.items():
                for m, inner in self._br_ww(u, tail).items():
                    _lp_acc(out, n + m + 1, inner, c * _q(1, m + 1))
        return out

    def bracket(self, A: Mapping, B: Mapping) -> dict:
        out: dict = {}
        for a, ca in A.items():
            for b, cb in B.items():
                br = self._br_ww(a, b)
                if not br:
                    continue
                s = ca * cb
                for n, expr in br.items():
                    _lp_acc(out, n, expr, s)
        return out

    def bracket_into(self, A: Mapping, lp: Mapping) -> dict:
        """``[A_λ x]`` for a polynomial ``lp = {n: x_n}`` in a second variable.

        Returns ``{(m, n): expr}``: ``m`` is the new λ-power, ``n`` the power
        carried over from ``lp``.
        """
        out: dict = {}
        for n, expr in lp.items():
            for m, e in self.bracket(A, expr).items():
                _lp_acc(out, (m, n), e)
        return out

    def clear_caches(self) -> None:
        for c in (self._nf_seq_cache, self._ins_cache, self._prod_cache, self._br_cache, self._D_cache):
            c.clear()

    def __repr__(self):
        return f"NLCA({self.name!r}, generators={self.display})"


# ---------------------------------------------------------------------------
# λ-polynomial manipulations


def _scale(expr: Mapping, s: ScalarFn) -> dict:
    return {k: v * s for k, v in expr.items()}


def _neg(lp: Mapping) -> dict:
    m1 = _q(-1)
    return {n: _scale(e, m1) for n, e in lp.items()}


def _shift_l_plus_D(alg: NLCA, lp: Mapping, k: int) -> dict:
    """Multiply by (l + D)^k, D acting on coefficients."""
    out: dict = {}
    for n, expr in lp.items():
        cur = dict(expr)
        for j in range(k + 1):
            # term C(k, j) l^(n + k - j) D^j expr
            if cur:
                _lp_acc(out, n + k - j, cur, _q(comb(k, j)))
            if j < k:
                cur = alg.D(cur)
    return out


def _skew(alg: NLCA, lp: Mapping) -> dict:
    """Substitute l -> -l - D (D acting on coefficients)."""
    out: dict = {}
    for n, expr in lp.items():
        cur = dict(expr)
        for k in range(n + 1):
            # (-l - D)^n = sum_k C(n, k) (-1)^n l^(n-k) D^k
            if cur:
                c = comb(n, k) * (-1) ** n
                _lp_acc(out, n - k, cur, _q(c))
            if k < n:
                cur = alg.D(cur)
    return out


def _integral_minus_D(alg: NLCA, lp: Mapping) -> dict:
    """int_{-D}^0 of a λ-polynomial: l^n -> (-1)^n D^(n+1)/(n+1)."""
    out: dict = {}
    for n, expr in lp.items():
        d = alg.D_pow(expr, n + 1)
        _acc_dict(out, d, _q((-1) ** n, n + 1))
    return out


# ---------------------------------------------------------------------------
# public value types


class VAExpr:
    """An element of V(R) in normal form: ``{word: ScalarFn}``."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: NLCA, terms: Mapping | None = None):
        self.alg = alg
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def _coerce(self, other) -> "VAExpr":
        if isinstance(other, VAExpr):
            if other.alg is not self.alg:
                raise ValueError("elements of different algebras")
            return other
        return self.alg.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        _acc_dict(out, other.terms)
        return VAExpr(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return VAExpr(self.alg, _scale(self.terms, _q(-1)))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, s):
        if isinstance(s, VAExpr):
            return normal_order(self, s)
        s = ScalarFn.coerce(s)
        if not s:
            return VAExpr(self.alg)
        return VAExpr(self.alg, _scale(self.terms, s))

    def __rmul__(self, s):
        if isinstance(s, VAExpr):
            return normal_order(s, self)
        return self * s

    def __truediv__(self, s):
        return self * (1 / ScalarFn.coerce(s))

    def D(self, n: int = 1) -> "VAExpr":
        return VAExpr(self.alg, self.alg.D_pow(self.terms, n))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, VAExpr):
            return self.alg is other.alg and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def weights(self) -> set[int]:
        return {self.alg.word_weight(w) for w in self.terms}

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError(f"expression is not homogeneous: weights {sorted(ws)}")
        return ws.pop()

    def coeff(self, word) -> ScalarFn:
        if isinstance(word, VAExpr):
            (word,) = word.terms
        return self.terms.get(word, const(0))

    def subs(self, bindings: Mapping) -> "VAExpr":
        return VAExpr(self.alg, {w: c.subs(bindings) for w, c in self.terms.items()})

    def map_coeffs(self, fn) -> "VAExpr":
        return VAExpr(self.alg, {w: fn(c) for w, c in self.terms.items()})

    def words(self) -> list[str]:
        return [word_text(self.alg, w) for w in self.terms]

    def to_text(self) -> str:
        return LambdaPoly(self.alg, {0: self.terms}).to_text()

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"VAExpr({self.to_text()!r})"


class LambdaPoly:
    """A polynomial in λ with VAExpr coefficients: ``{power: {word: coef}}``."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: NLCA, coeffs: Mapping | None = None):
        self.alg = alg
        self.coeffs = {n: dict(e) for n, e in (coeffs or {}).items() if e}

    def __getitem__(self, n: int) -> VAExpr:
        return VAExpr(self.alg, self.coeffs.get(n, {}))

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LambdaPoly):
            return self.alg is other.alg and self.coeffs == other.coeffs
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return NotImplemented

    def __add__(self, other: "LambdaPoly"):
        out = {n: dict(e) for n, e in self.coeffs.items()}
        for n, e in other.coeffs.items():
            _lp_acc(out, n, e)
        return LambdaPoly(self.alg, out)

    def __neg__(self):
        return LambdaPoly(self.alg, _neg(self.coeffs))

    def __sub__(self, other: "LambdaPoly"):
        return self + (-other)

    def __mul__(self, s):
        s = ScalarFn.coerce(s)
        return LambdaPoly(self.alg, {n: _scale(e, s) for n, e in self.coeffs.items()})

    __rmul__ = __mul__

    def subs(self, bindings: Mapping) -> "LambdaPoly":
        return LambdaPoly(
            self.alg,
            {n: {w: c.subs(bindings) for w, c in e.items()} for n, e in self.coeffs.items()},
        )

    def map_coeffs(self, fn) -> "LambdaPoly":
        return LambdaPoly(
            self.alg, {n: {w: fn(c) for w, c in e.items()} for n, e in self.coeffs.items()}
        )

    def products(self) -> dict[int, VAExpr]:
        """The n-th products a_(n)b = n! * (coefficient of λ^n)."""
        from math import factorial

        return {n: VAExpr(self.alg, _scale(e, _q(factorial(n)))) for n, e in self.coeffs.items()}

    def to_text(self) -> str:
        return _lp_text(self.alg, {(n,): e for n, e in self.coeffs.items()}, ("l",))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LambdaPoly({self.to_text()!r})"


class Lambda2Poly:
    """A polynomial in (λ, μ) with VAExpr coefficients: ``{(i, j): {word: coef}}``."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: NLCA, coeffs: Mapping | None = None):
        self.alg = alg
        self.coeffs = {n: dict(e) for n, e in (coeffs or {}).items() if e}

    def __getitem__(self, ij: tuple[int, int]) -> VAExpr:
        return VAExpr(self.alg, self.coeffs.get(ij, {}))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def words(self) -> set[str]:
        return {word_text(self.alg, w) for e in self.coeffs.values() for w in e}

    def to_text(self) -> str:
        return _lp_text(self.alg, self.coeffs, ("l", "m"))

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Lambda2Poly({self.to_text()!r})"


# ---------------------------------------------------------------------------
# public operations


def normal_order(A: VAExpr, B: VAExpr) -> VAExpr:
    """:AB: reduced to normal form."""
    if A.alg is not B.alg:
        raise ValueError("elements of different algebras")
    return VAExpr(A.alg, A.alg.prod(A.terms, B.terms))


def apply_D(A: VAExpr) -> VAExpr:
    return A.D()


def bracket(P: NLCA, A: VAExpr, B: VAExpr) -> LambdaPoly:
    """The λ-bracket [A_λ B] with every coefficient in normal form."""
    if A.alg is not P or B.alg is not P:
        raise ValueError("arguments must be elements of the given algebra")
    return LambdaPoly(P, P.bracket(A.terms, B.terms))


def jacobi_residual(P: NLCA, a, b, c) -> Lambda2Poly:
    """[a_λ[b_μ c]] - [b_μ[a_λ c]] - [[a_λ b]_{λ+μ} c], keyed by (λ-power, μ-power)."""
    A, B, C = (P.field(x) if isinstance(x, str) else x for x in (a, b, c))
    out: dict = {}
    # [a_l [b_m c]]
    for (m_l, n_mu), e in P.bracket_into(A.terms, P.bracket(B.terms, C.terms)).items():
        _lp_acc(out, (m_l, n_mu), e)
    # - [b_m [a_l c]]
    for (m_mu, n_l), e in P.bracket_into(B.terms, P.bracket(A.terms, C.terms)).items():
        _lp_acc(out, (n_l, m_mu), e, _q(-1))
    # - [[a_l b]_{l+m} c]
    ab = P.bracket(A.terms, B.terms)
    for n, x in ab.items():
        for m, e in P.bracket(x, C.terms).items():
            for j in range(m + 1):
                _lp_acc(out, (n + j, m - j), e, _q(-comb(m, j)))
    return Lambda2Poly(P, out)


def composite_fields(P: NLCA) -> dict[str, VAExpr]:
    """Λ = :LM: - (3/10) D²M and Θ = :MM:."""
    L, M = P.field("L"), P.field("M")
    lam = normal_order(L, M) - M.D(2) * _q(3, 10)
    theta = normal_order(M, M)
    return {"Lambda_field": lam, "Theta_field": theta}


# ---------------------------------------------------------------------------
# text


def factor_text(alg: NLCA, f: DGen) -> str:
    name = alg.factor_name(f)
    if f[1] == 0:
        return name
    if f[1] == 1:
        return f"(D{name})"
    return f"(D^{f[1]}{name})"


def word_text(alg: NLCA, w: Word) -> str:
    if not w:
        return "1"
    if len(w) == 1 and w[0][1]:
        return factor_text(alg, w[0])[1:-1]
    return "".join(factor_text(alg, f) for f in w)


def _needs_paren(t: str) -> bool:
    depth = 0
    for k, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and k > 0:
            return True
    return False


def _mono_text(coef: ScalarFn, powers: tuple, names: tuple, dpow: int = 0) -> tuple[str, str]:
    """(sign, body) for coef * l^a * m^b * D^d."""
    t = coef.to_text()
    sign = "+"
    if t.startswith("-") and not _needs_paren(t[1:]):
        sign, t = "-", t[1:]
    parts = []
    if t != "1":
        parts.append(f"({t})" if _needs_paren(t) else t)
    for name, e in zip(names, powers):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    if dpow == 1:
        parts.append("D")
    elif dpow:
        parts.append(f"D^{dpow}")
    return sign, "*".join(parts) if parts else "1"


def _join(pieces: list[tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _lp_text(alg: NLCA, coeffs: Mapping, names: tuple) -> str:
    """Stable pretty-printer: multi-factor words, then per-generator D/λ groups, then central."""
    multi: dict = {}
    single: dict = {}
    central: dict = {}
    for powers, expr in coeffs.items():
        for w, c in expr.items():
            if not w:
                central[powers] = c
            elif len(w) == 1:
                single.setdefault(w[0][0], {})[(powers, w[0][1])] = c
            else:
                multi.setdefault(w, {})[powers] = c
    pieces: list[tuple[str, str]] = []

    def lkey(p):
        return (sum(p), p)

    for w in sorted(multi, key=lambda w: (-alg.word_weight(w), [(-f[0], -f[1]) for f in w])):
        terms = multi[w]
        wt = word_text(alg, w)
        if len(terms) == 1:
            ((powers, c),) = terms.items()
            sign, body = _mono_text(c, powers, names)
            pieces.append((sign, (body + "*" if body != "1" else "") + wt))
        else:
            inner = _join([_mono_text(c, p, names) for p, c in sorted(terms.items(), key=lambda t: lkey(t[0]))])
            pieces.append(("+", f"({inner}){wt}"))
    order = {alg._rank[g.name]: pos for pos, g in enumerate(alg.generators)}
    for r in sorted(single, key=lambda r: order[r]):
        terms = single[r]
        gname = alg.factor_name((r, 0))
        # total degree ascending, D-degree descending
        items = sorted(terms.items(), key=lambda t: (sum(t[0][0]) + t[0][1], -t[0][1], t[0][0]))
        if len(items) == 1:
            ((powers, d), c) = items[0]
            sign, body = _mono_text(c, powers, names)
            ft = factor_text(alg, (r, d))
            pieces.append((sign, (body + "*" if body != "1" else "") + ft))
        else:
            inner = _join([_mono_text(c, p, names, d) for (p, d), c in items])
            pieces.append(("+", f"({inner}){gname}"))
    for powers in sorted(central, key=lkey):
        pieces.append(_mono_text(central[powers], powers, names))
    return _join(pieces)


def _parse_factors(alg: NLCA, text: str) -> list[tuple[str, int]]:
    from .errors import ParseError

    names = sorted(alg.by_name, key=len, reverse=True)
    out: list[tuple[str, int]] = []
    k = 0
    text = text.strip()
    if text in ("1", ""):
        return out

    def read_factor(k: int) -> tuple[tuple[str, int], int]:
        d = 0
        while k < len(text) and text[k] == "D" and "D" not in alg.by_name:
            k += 1
            if k < len(text) and text[k] == "^":
                j = k + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == k + 1:
                    raise ParseError(f"bad derivative order in {text!r}")
                d += int(text[k + 1 : j])
                k = j
            else:
                d += 1
        for n in names:
            if text.startswith(n, k):
                return (n, d), k + len(n)
        raise ParseError(f"unknown generator at {text[k:]!r} in {text!r}")

    while k < len(text):
        ch = text[k]
        if ch in " :*":
            k += 1
            continue
        if ch == "(":
            close = text.find(")", k)
            if close < 0:
                raise ParseError(f"unbalanced parenthesis in {text!r}")
            inner = text[k + 1 : close].strip()
            f, j = read_factor_inner(alg, inner, names)
            out.append(f)
            k = close + 1
            continue
        f, k = read_factor(k)
        out.append(f)
    return out


def read_factor_inner(alg: NLCA, inner: str, names: list[str]):
    from .errors import ParseError

    d = 0
    k = 0
    while k < len(inner) and inner[k] == "D":
        k += 1
        if k < len(inner) and inner[k] == "^":
            j = k + 1
            while j < len(inner) and inner[j].isdigit():
                j += 1
            d += int(inner[k + 1 : j])
            k = j
        else:
            d += 1
    rest = inner[k:].strip()
    if rest not in alg.by_name:
        raise ParseError(f"expected a single generator inside parentheses, got {inner!r}")
    return (rest, d), None
