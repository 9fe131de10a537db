"""Exact rational functions with coefficients in Q(i, sqrt10).

Every coefficient in the package is a :class:`ScalarFn`, a quotient of two
multivariate polynomials in the registered indeterminates (central charges,
highest weights, realisation parameters).  Polynomial arithmetic and gcds
are delegated to sympy's sparse ``PolyRing`` over QQ.  The imaginary unit
and sqrt(10) are carried as two extra ring generators reduced by
``i^2 -> -1`` and ``s10^2 -> 10``; denominators are always rationalised so
they lie in Q[symbols], which makes the gcd a plain rational one.

Canonical form: ``gcd(num, den) = 1`` over Q(i, sqrt10)[symbols], and the
grlex-leading coefficient of ``den`` is 1.  Two values are equal as
functions iff their representations are equal.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .errors import DivisionByZero, ParseError, PoleHit

__all__ = [
    "GaussianRational",
    "ScalarFn",
    "SYMBOLS",
    "register",
    "symbol",
    "symbols",
    "const",
    "I",
    "SQRT10",
    "ZERO",
    "ONE",
    "parse_scalar",
    "fsum",
]

# names reserved for the algebraic generators
_IMAG = "i"
_ROOT = "s10"

_BASE_SYMBOLS = (
    "cL", "cM", "hL", "hW", "hM", "hV", "lam", "mu", "p", "q", "r", "s",
    # extensions used by presets and parametrised loci
    "c", "lbar", "t", "u", "w",
)


class _Registry:
    """Append-only symbol registry owning the current polynomial ring."""

    def __init__(self, names: Iterable[str]):
        self._lock = threading.Lock()
        self.names: tuple[str, ...] = ()
        self.ring = None
        self._rebuild(tuple(names))

    def _rebuild(self, names: tuple[str, ...]) -> None:
        self.names = names
        self.ring, *_ = ring(list(names) + [_IMAG, _ROOT], QQ, grlex)
        self.index = {n: k for k, n in enumerate(names)}
        self.i_pos = len(names)
        self.s_pos = len(names) + 1

    def register(self, name: str) -> str:
        if name in (_IMAG, _ROOT):
            raise ValueError(f"{name!r} is reserved")
        if not name.isidentifier():
            raise ValueError(f"bad symbol name {name!r}")
        with self._lock:
            if name not in self.index:
                self._rebuild(self.names + (name,))
        return name


_REG = _Registry(_BASE_SYMBOLS)


def register(name: str) -> str:
    """Add ``name`` to the symbol registry (no-op if present)."""
    return _REG.register(name)


def SYMBOLS() -> tuple[str, ...]:
    return _REG.names


def _lift(p: PolyElement) -> PolyElement:
    if p.ring is _REG.ring:
        return p
    return p.set_ring(_REG.ring)


# ---------------------------------------------------------------------------
# polynomial helpers on the backend ring


def _reduce(p: PolyElement) -> PolyElement:
    """Apply i^2 = -1 and s10^2 = 10."""
    ip, sp = _REG.i_pos, _REG.s_pos
    for m in p:
        if m[ip] > 1 or m[sp] > 1:
            break
    else:
        return p
    out: dict = {}
    for m, c in p.items():
        ei, es = m[ip], m[sp]
        if ei > 1 or es > 1:
            if (ei // 2) % 2:
                c = -c
            if es > 1:
                c = c * 10 ** (es // 2)
            m = m[:ip] + (ei % 2, es % 2) + m[sp + 1:]
        v = out.get(m)
        out[m] = c if v is None else v + c
    return p.ring.from_dict({m: c for m, c in out.items() if c})


def _conj(p: PolyElement, pos: int) -> PolyElement:
    """Negate every term odd in the generator at ``pos``."""
    return p.ring.from_dict({m: (-c if m[pos] % 2 else c) for m, c in p.items()})


def _has(p: PolyElement, pos: int) -> bool:
    return any(m[pos] for m in p)


def _components(p: PolyElement) -> list[PolyElement]:
    """Split ``p`` into its Q[symbols] coordinates over the basis 1, i, s10, i*s10."""
    ip, sp = _REG.i_pos, _REG.s_pos
    parts: dict[tuple[int, int], dict] = {}
    for m, c in p.items():
        key = (m[ip], m[sp])
        parts.setdefault(key, {})[m[:ip] + (0, 0) + m[sp + 1:]] = c
    return [p.ring.from_dict(d) for d in parts.values()]


def _content_gcd(den: PolyElement, num: PolyElement) -> PolyElement:
    """gcd in Q[symbols] of ``den`` (i-free) with all coordinates of ``num``."""
    R = den.ring
    if len(den) == 1:
        # monomial denominator: gcd is the monomial of minimal exponents
        (dm,) = den.keys()
        low = list(dm)
        for m in num:
            for k, e in enumerate(low):
                if e and m[k] < e:
                    low[k] = m[k]
            if not any(low):
                return R.one
        return R.from_dict({tuple(low): QQ.one})
    g = den
    for comp in _components(num):
        g = g.gcd(comp)
        if g.is_ground:
            return R.one
    return g


def _div_monomial(p: PolyElement, mono: tuple) -> PolyElement:
    return p.ring.from_dict(
        {tuple(a - b for a, b in zip(m, mono)): c for m, c in p.items()}
    )


Number = Union[int, Fraction]


class GaussianRational:
    """An element re + i*im of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        o = _as_gauss(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_gauss(other))

    def __rsub__(self, other):
        return _as_gauss(other) - self

    def __mul__(self, other):
        o = _as_gauss(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_gauss(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise DivisionByZero("division by zero")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


def _as_gauss(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")


def _qq(x: Number):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


class ScalarFn:
    """Canonical quotient ``num/den`` of polynomials over Q(i, sqrt10).

    Instances are immutable and hashable.  Arithmetic accepts ints,
    Fractions and :class:`GaussianRational` on either side.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: PolyElement, den: PolyElement, _canonical: bool = False):
        if not _canonical:
            num, den = _canonicalise(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "ScalarFn":
        if isinstance(x, ScalarFn):
            if x.num.ring is not _REG.ring:
                return cls(_lift(x.num), _lift(x.den), True)
            return x
        R = _REG.ring
        if isinstance(x, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(x, (int, Fraction)):
            return cls(R(_qq(x)), R.one, True)
        if isinstance(x, GaussianRational):
            num = R(_qq(x.re)) + R(_qq(x.im)) * R.gens[_REG.i_pos]
            return cls(num, R.one, True)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to ScalarFn")

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.den == 1 and self.num == 1

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def is_polynomial(self) -> bool:
        return self.den.is_ground

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_real_rational(self) -> bool:
        """True if no i or sqrt(10) occurs (the value lies in Q(symbols))."""
        a = ScalarFn.coerce(self)
        return not any(_has(q, pos) for q in (a.num, a.den) for pos in (_REG.i_pos, _REG.s_pos))

    def free_symbols(self) -> set[str]:
        names = _REG.names
        out = set()
        for p in (self.num, self.den):
            for m in p:
                for k, e in enumerate(m[: len(names)]):
                    if e:
                        out.add(names[k])
        return out

    # -- arithmetic -------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, ScalarFn):
            other = ScalarFn.coerce(other)
        a = self
        if a.num.ring is not _REG.ring:
            a = ScalarFn.coerce(a)
        if other.num.ring is not _REG.ring:
            other = ScalarFn.coerce(other)
        return a, other

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if not a.num:
            return b
        if not b.num:
            return a
        if a.den == b.den:
            if a.den == 1:
                return ScalarFn(a.num + b.num, a.den, True)
            return ScalarFn(a.num + b.num, a.den)
        return ScalarFn(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarFn(-self.num, self.den, True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if not a.num or not b.num:
            return ZERO()
        if a.den == 1 and b.den == 1:
            return ScalarFn(_reduce(a.num * b.num), a.den, True)
        if b.num.is_ground and b.den.is_ground:
            return ScalarFn(a.num.mul_ground(b.num.LC / b.den.LC), a.den, True)
        if a.num.is_ground and a.den.is_ground:
            return ScalarFn(b.num.mul_ground(a.num.LC / a.den.LC), b.den, True)
        return ScalarFn(_reduce(a.num * b.num), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarFn":
        if not self.num:
            raise DivisionByZero("division by the zero function")
        return ScalarFn(self.den, self.num)

    def __truediv__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ScalarFn):
            try:
                other = ScalarFn.coerce(other)
            except TypeError:
                return NotImplemented
        a, b = self, other
        if a.num.ring is not b.num.ring:
            a, b = ScalarFn.coerce(a), ScalarFn.coerce(b)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        if self._hash is None:
            a = ScalarFn.coerce(self)
            self._hash = hash((frozenset(a.num.items()), frozenset(a.den.items())))
        return self._hash

    # -- substitution -----------------------------------------------------
    def subs(self, bindings: Mapping[str, object]) -> "ScalarFn":
        """Replace symbols by values (numbers or ScalarFn); re-canonicalise.

        Raises :class:`PoleHit` if the denominator vanishes.
        """
        a = ScalarFn.coerce(self)
        vals: dict[int, ScalarFn] = {}
        for name, v in bindings.items():
            if name not in _REG.index:
                raise KeyError(f"unknown symbol {name!r}")
            vals[_REG.index[name]] = ScalarFn.coerce(v)
        if not vals:
            return a
        den = _eval_poly(a.den, vals)
        if den.is_zero():
            raise PoleHit(f"denominator {_poly_text(a.den)} vanishes under {dict(bindings)}")
        num = _eval_poly(a.num, vals)
        return num / den

    def evaluate(self, bindings: Mapping[str, object] | None = None):
        """Substitute and return a GaussianRational if the result lies in Q(i)."""
        v = self.subs(bindings or {})
        if v.free_symbols():
            raise ValueError(f"not constant after substitution: {v}")
        R = v.num.ring
        re = Fraction(0)
        im = Fraction(0)
        for m, c in v.num.items():
            if m[_REG.s_pos]:
                raise ValueError("value involves sqrt(10)")
            c = Fraction(int(c.numerator), int(c.denominator))
            if m[_REG.i_pos]:
                im += c
            else:
                re += c
        d = v.den.LC
        d = Fraction(int(d.numerator), int(d.denominator))
        return GaussianRational(re / d, im / d)

    def conjugate(self) -> "ScalarFn":
        """Complex conjugation i -> -i (symbols treated as real)."""
        a = ScalarFn.coerce(self)
        return ScalarFn(_conj(a.num, _REG.i_pos), _conj(a.den, _REG.i_pos))

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        return _fraction_text(self.num, self.den)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"ScalarFn({self.to_text()!r})"


def _canonicalise(num: PolyElement, den: PolyElement):
    num, den = _lift(num), _lift(den)
    R = num.ring
    if not den:
        raise DivisionByZero("division by the zero function")
    if not num:
        return R.zero, R.one
    num = _reduce(num)
    den = _reduce(den)
    ip, sp = _REG.i_pos, _REG.s_pos
    for pos in (ip, sp):
        if _has(den, pos):
            cj = _conj(den, pos)
            num = _reduce(num * cj)
            den = _reduce(den * cj)
    if den.is_ground:
        lc = den.LC
        return (num.quo_ground(lc) if lc != 1 else num), R.one
    if len(den) == 1:
        g = _content_gcd(den, num)
        if not g.is_ground:
            (gm,) = g.keys()
            num = _div_monomial(num, gm)
            den = _div_monomial(den, gm)
    else:
        g = _content_gcd(den, num)
        if not g.is_ground:
            num = num.exquo(g)
            den = den.exquo(g)
    lc = den.LC
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


def _eval_poly(p: PolyElement, vals: dict[int, ScalarFn]) -> ScalarFn:
    """Evaluate ``p`` with generators at positions in ``vals`` replaced."""
    R = p.ring
    keep: dict[tuple, dict] = {}
    # group terms by the exponents of the substituted generators
    positions = sorted(vals)
    for m, c in p.items():
        key = tuple(m[k] for k in positions)
        rest = list(m)
        for k in positions:
            rest[k] = 0
        keep.setdefault(key, {})[tuple(rest)] = c
    powers: dict[tuple[int, int], ScalarFn] = {}

    def power(k: int, e: int) -> ScalarFn:
        if (k, e) not in powers:
            powers[(k, e)] = vals[k] ** e
        return powers[(k, e)]

    total = ZERO()
    parts = []
    for key, d in keep.items():
        term = ScalarFn(_reduce(R.from_dict(d)), R.one, True)
        for k, e in zip(positions, key):
            if e:
                term = term * power(k, e)
        parts.append(term)
    total = fsum(parts)
    return total


def fsum(values: Iterable) -> ScalarFn:
    """Sum many ScalarFn values, grouping equal denominators first."""
    groups: dict = {}
    order = []
    for v in values:
        v = ScalarFn.coerce(v)
        if not v.num:
            continue
        key = v.den
        k = tuple(sorted(key.items()))
        if k in groups:
            groups[k][1].append(v.num)
        else:
            groups[k] = (key, [v.num])
            order.append(k)
    if not order:
        return ZERO()
    out = ZERO()
    for k in order:
        den, nums = groups[k]
        acc = nums[0]
        for n in nums[1:]:
            acc = acc + n
        if not acc:
            continue
        out = out + (ScalarFn(acc, den, True) if den == 1 else ScalarFn(acc, den))
    return out


# ---------------------------------------------------------------------------
# text form


def _mono_key(m: tuple) -> tuple:
    # grlex descending; ring order is registry order then i, s10
    return (-sum(m), tuple(-e for e in m))


def _int_poly_text(terms: list[tuple[tuple, int]], names: list[str]) -> str:
    if not terms:
        return "0"
    pieces = []
    for m, c in sorted(terms, key=lambda t: _mono_key(t[0])):
        factors = []
        for k, e in enumerate(m):
            if e == 1:
                factors.append(names[k])
            elif e:
                factors.append(f"{names[k]}^{e}")
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if factors:
            body = "*".join(([str(a)] if a != 1 else []) + factors)
        else:
            body = str(a)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def _poly_text(p: PolyElement) -> str:
    return _fraction_text(p, p.ring.one)


def _fraction_text(num: PolyElement, den: PolyElement) -> str:
    """Integer-coefficient text ``(N)/(D)`` with common content removed."""
    from math import gcd, lcm

    if not num:
        return "0"
    coeffs = list(num.values()) + list(den.values())
    m = 1
    for c in coeffs:
        m = lcm(m, int(c.denominator))
    nt = [(k, int(c * m)) for k, c in num.items()]
    dt = [(k, int(c * m)) for k, c in den.items()]
    g = 0
    for _, c in nt + dt:
        g = gcd(g, c)
    nt = [(k, c // g) for k, c in nt]
    dt = [(k, c // g) for k, c in dt]
    names = [str(x) for x in num.ring.symbols]
    ns = _int_poly_text(nt, names)
    if len(dt) == 1 and not any(dt[0][0]) and dt[0][1] == 1:
        return ns
    ds = _int_poly_text(dt, names)
    nwrap = ns if len(nt) == 1 else f"({ns})"
    dwrap = ds if (len(dt) == 1 and not any(dt[0][0])) else f"({ds})"
    return f"{nwrap}/{dwrap}"


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str) -> list[str]:
    toks = []
    k = 0
    while k < len(text):
        ch = text[k]
        if ch.isspace():
            k += 1
        elif ch.isdigit():
            j = k
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(text[k:j])
            k = j
        elif ch.isalpha() or ch == "_":
            j = k
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(text[k:j])
            k = j
        elif ch in "+-*/^()":
            if ch == "*" and text[k : k + 2] == "**":
                toks.append("^")
                k += 2
            else:
                toks.append(ch)
                k += 1
        else:
            raise ParseError(f"unexpected character {ch!r} in {text!r}")
    return toks


def parse_scalar(text: str) -> ScalarFn:
    """Parse the canonical text form (and ordinary infix expressions).

    Accepts integers, registered symbols, ``i``, ``s10`` (sqrt 10),
    ``+ - * / ^`` and parentheses.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    def expr():
        v = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term():
        v = unary()
        while peek() in ("*", "/"):
            op = take()
            rhs = unary()
            v = v * rhs if op == "*" else v / rhs
        return v

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            t = take()
            if not t.isdigit():
                raise ParseError(f"integer exponent expected in {text!r}")
            return base ** (sign * int(t))
        return base

    def atom():
        t = peek()
        if t is None:
            raise ParseError(f"unexpected end of {text!r}")
        take()
        if t == "(":
            v = expr()
            if peek() != ")":
                raise ParseError(f"missing ')' in {text!r}")
            take()
            return v
        if t.isdigit():
            return const(int(t))
        if t == _IMAG:
            return I()
        if t in (_ROOT, "sqrt10"):
            return SQRT10()
        if t in _REG.index:
            return symbol(t)
        raise ParseError(f"unknown symbol {t!r} in {text!r}")

    if not toks:
        raise ParseError("empty scalar expression")
    v = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return v


# ---------------------------------------------------------------------------
# constructors


def const(x) -> ScalarFn:
    return ScalarFn.coerce(x)


def ZERO() -> ScalarFn:
    R = _REG.ring
    return ScalarFn(R.zero, R.one, True)


def ONE() -> ScalarFn:
    R = _REG.ring
    return ScalarFn(R.one, R.one, True)


def I() -> ScalarFn:
    R = _REG.ring
    return ScalarFn(R.gens[_REG.i_pos], R.one, True)


def SQRT10() -> ScalarFn:
    R = _REG.ring
    return ScalarFn(R.gens[_REG.s_pos], R.one, True)


def symbol(name: str) -> ScalarFn:
    if name not in _REG.index:
        raise KeyError(f"unknown symbol {name!r}; register it first")
    R = _REG.ring
    return ScalarFn(R.gens[_REG.index[name]], R.one, True)


def symbols(names: str) -> tuple[ScalarFn, ...]:
    return tuple(symbol(n) for n in names.replace(",", " ").split())
