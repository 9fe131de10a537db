import random
from fractions import Fraction

from gw3ca.linalg import Span, bareiss_det, det, det_factors, nullspace, permutation_sign
from gw3ca.scalars import const, symbol


def _leibniz(M):
    import itertools

    n = len(M)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        term = Fraction(permutation_sign(perm))
        for i, j in enumerate(perm):
            term *= M[i][j]
        total += term
    return total


def test_bareiss_matches_leibniz_on_random_rationals():
    rng = random.Random(1)
    for n in range(1, 6):
        M = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        assert bareiss_det(M) == _leibniz(M)


def test_sparse_det_uses_block_structure():
    x, y = symbol("p"), symbol("q")
    z = const(0)
    M = [[x, z, z, z], [const(1), y, z, z], [const(2), const(3), x + y, const(5)], [z, z, const(7), x]]
    assert det(M) == x * y * ((x + y) * x - 35)
    assert det_factors([[z, z], [z, const(1)]])[-1].is_zero()


def test_symbolic_det_polynomial_path():
    x = symbol("p")
    M = [[x, const(1), const(0)], [const(1), x, const(1)], [const(0), const(1), x]]
    assert bareiss_det(M) == x**3 - 2 * x


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([1, 2, 0]) == 1


def test_span_and_nullspace():
    s = Span()
    assert s.add({"a": const(1), "b": const(2)}) is not None
    assert s.add({"a": const(2), "b": const(4)}) is None
    assert s.contains({"a": const(3), "b": const(6)})
    ker = nullspace([{"a": const(1)}, {"a": const(2)}, {"b": const(1)}])
    assert len(ker) == 1
    assert ker[0][0] == 1 and ker[0][1] == Fraction(-1, 2) and ker[0][2] == 0
