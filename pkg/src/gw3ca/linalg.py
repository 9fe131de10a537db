"""Exact linear algebra over ScalarFn (or any exact field such as Fraction).

Determinants use fraction-free Bareiss elimination with row pivoting.  When
every entry of a ScalarFn matrix is a rational constant the work is done
over :class:`fractions.Fraction`, which is much faster than generic
rational-function arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .scalars import ScalarFn, const

__all__ = ["det", "det_factors", "bareiss_det", "block_triangular_det", "permutation_sign", "Span", "nullspace"]


def _as_fractions(M: Sequence[Sequence]) -> list[list[Fraction]] | None:
    out = []
    for row in M:
        r = []
        for x in row:
            if isinstance(x, ScalarFn):
                if not x.is_constant():
                    return None
                try:
                    g = x.evaluate()
                except ValueError:
                    return None
                if g.im:
                    return None
                r.append(g.re)
            else:
                r.append(Fraction(x))
        out.append(r)
    return out


def _bareiss(A: list[list], one, zero_test: Callable, exact: bool = False) -> object:
    n = len(A)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if zero_test(A[k][k]):
            for i in range(k + 1, n):
                if not zero_test(A[i][k]):
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return one - one
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                t = row_i[j] * akk - aik * row_k[j]
                row_i[j] = t.exquo(prev) if exact else t / prev
        prev = akk
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def bareiss_det(M: Sequence[Sequence]):
    """Exact determinant of a square matrix of ScalarFn / Fraction / int entries."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix must be square")
    frac = _as_fractions(M)
    if frac is not None:
        d = _bareiss(frac, Fraction(1), lambda x: x == 0)
        if any(isinstance(x, ScalarFn) for r in M for x in r) or n == 0:
            return const(d)
        return d
    A = [[ScalarFn.coerce(x) for x in r] for r in M]
    if all(x.is_real_rational() for r in A for x in r):
        return _polynomial_bareiss(A)
    return _bareiss(A, const(1), lambda x: x.is_zero())


def _polynomial_bareiss(A: list[list[ScalarFn]]) -> ScalarFn:
    """Clear row denominators and eliminate over the polynomial ring with exact division."""
    rows, scale = [], None
    for r in A:
        L = r[0].den
        for x in r[1:]:
            L = L.lcm(x.den)
        rows.append([x.num * L.exquo(x.den) for x in r])
        scale = L if scale is None else scale * L
    R = scale.ring
    d = _bareiss(rows, R.one, lambda x: not x, exact=True)
    return ScalarFn(d, scale)


def _nonzero(x) -> bool:
    return bool(x)


def det(M: Sequence[Sequence]):
    """Exact determinant exploiting sparsity (the product of :func:`det_factors`)."""
    out = const(1)
    for f in det_factors(M):
        out = out * f
        if out.is_zero():
            break
    return out


def det_factors(M: Sequence[Sequence]) -> list:
    """Determinant as an unexpanded product of ScalarFn factors.

    A structural perfect matching puts nonzero entries on the diagonal; the
    strongly connected components of the resulting dependency graph are the
    diagonal blocks of a block-triangular form, whose determinants are taken
    by Bareiss elimination.  A structurally singular matrix gives 0.
    """
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix must be square")
    if n <= 2:
        return [ScalarFn.coerce(bareiss_det(M))] if n else []
    G = nx.Graph()
    rows = [("r", i) for i in range(n)]
    G.add_nodes_from(rows)
    G.add_nodes_from(("c", j) for j in range(n))
    G.add_edges_from((("r", i), ("c", j)) for i in range(n) for j in range(n) if _nonzero(M[i][j]))
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=rows)
    if any(("r", i) not in matching for i in range(n)):
        return [const(0)]
    col_of = [matching[("r", i)][1] for i in range(n)]
    H = [[M[i][col_of[j]] for j in range(n)] for i in range(n)]
    D = nx.DiGraph()
    D.add_nodes_from(range(n))
    D.add_edges_from((i, j) for i in range(n) for j in range(n) if i != j and _nonzero(H[i][j]))
    out = [const(permutation_sign(col_of))]
    comps = sorted(sorted(c) for c in nx.strongly_connected_components(D))
    for idx in comps:
        f = ScalarFn.coerce(bareiss_det([[H[i][j] for j in idx] for i in idx]))
        if f.is_zero():
            return [f]
        out.append(f)
    return out


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def block_triangular_det(blocks: Iterable[Sequence[Sequence]], sign: int = 1):
    """Product of the determinants of diagonal blocks (times ``sign``)."""
    d = const(sign)
    for f in block_triangular_factors(blocks):
        d = d * f
        if d.is_zero():
            return d
    return d


def block_triangular_factors(blocks: Iterable[Sequence[Sequence]]) -> list:
    out = []
    for B in blocks:
        fs = det_factors(B)
        out.extend(fs)
        if any(f.is_zero() for f in fs):
            return [const(0)]
    return out


class Span:
    """Incrementally maintained reduced echelon basis of a space of sparse vectors.

    Vectors are ``{key: ScalarFn}`` maps; ``order`` gives a sort key for the
    coordinate keys so pivots are chosen deterministically.
    """

    def __init__(self, order: Callable[[Hashable], object] = repr):
        self.order = order
        self.rows: dict = {}  # pivot key -> vector with coefficient 1 at pivot

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        out = dict(vec)
        for p, row in self.rows.items():
            c = out.get(p)
            if c is None:
                continue
            for k, v in row.items():
                nv = out.get(k)
                nv = -(c * v) if nv is None else nv - c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def add(self, vec: Mapping) -> dict | None:
        """Add ``vec``; returns its reduced (new) part or None if already in the span."""
        r = self.reduce(vec)
        if not r:
            return None
        p = min(r, key=self.order)
        inv = 1 / r[p]
        r = {k: v * inv for k, v in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c is None:
                continue
            for k, v in r.items():
                nv = row.get(k)
                nv = -(c * v) if nv is None else nv - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        self.rows[p] = r
        return r

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.order)]


def nullspace(columns: Sequence[Mapping], order: Callable = repr) -> list[list]:
    """Kernel of the linear map sending unknown ``j`` to the sparse vector ``columns[j]``.

    Returns a list of coefficient lists (one per kernel basis vector), each
    normalised so that its first nonzero entry is 1.
    """
    n = len(columns)
    # Augment every column with an identity tag so that dependencies are recorded;
    # a reduced vector with no coordinate part left is a kernel element.
    tagged: list = []
    kernel: list = []
    for j, col in enumerate(columns):
        vec = {("c", k): v for k, v in col.items()}
        vec[("t", j)] = const(1)
        tagged.append(vec)

    def tag_order(key):
        kind, k = key
        return (0, order(k)) if kind == "c" else (1, k)

    span = Span(tag_order)
    for vec in tagged:
        r = span.add(vec)
        if r is not None and all(key[0] == "t" for key in r):
            kernel.append(r)
    out = []
    for r in kernel:
        coeffs = [r.get(("t", j), const(0)) for j in range(n)]
        first = next(c for c in coeffs if c)
        inv = 1 / first
        out.append([c * inv for c in coeffs])
    return out
