import random
from fractions import Fraction

from picardkit.exactla import charpoly, det_bareiss, det_frac
from picardkit.upoly import (
    NEG_INF,
    POS_INF,
    count_real_roots,
    derivative,
    divmod_frac,
    evaluate,
    gcd_frac,
    is_totally_real,
    mul,
    mul_many,
    squarefree_part,
)


def poly_from_roots(roots):
    return mul_many([[-r, 1] for r in roots])


def test_divmod_exact():
    a = mul([1, 2, 1], [3, -1])  # (x+1)^2 (3-x)... coefficient order: index=degree
    q, r = divmod_frac(a, [1, 2, 1])
    assert r == []
    assert q == [Fraction(3), Fraction(-1)]


def test_gcd_monic():
    a = mul([1, 1], [2, 1])
    b = mul([1, 1], [5, 1])
    g = gcd_frac(a, b)
    assert g == [Fraction(1), Fraction(1)]


def test_squarefree_part():
    p = mul(mul([1, 1], [1, 1]), [2, 1])
    sf = squarefree_part(p)
    assert sf == gcd_frac(mul([1, 1], [2, 1]), mul([1, 1], [2, 1]))


def test_sturm_known_roots():
    # roots at -2, 0, 3
    p = poly_from_roots([-2, 0, 3])
    assert count_real_roots(p) == 3
    assert count_real_roots(p, lo=Fraction(0)) == 1  # (0, +inf]: just 3
    assert count_real_roots(p, lo=Fraction(-1), hi=Fraction(1)) == 1  # just 0
    assert count_real_roots(p, lo=Fraction(-3), hi=Fraction(0)) == 2  # -2 and 0


def test_sturm_no_real_roots():
    assert count_real_roots([1, 0, 1]) == 0  # x^2 + 1
    assert not is_totally_real([1, 0, 1])
    assert is_totally_real(poly_from_roots([1, 2, 2]))


def test_sturm_multiplicities_ignored():
    p = mul(mul([1, 1], [1, 1]), [1, 1])  # (x+1)^3
    assert count_real_roots(p) == 1


def test_sturm_random_integer_roots():
    rng = random.Random(77)
    for _ in range(30):
        roots = sorted(rng.sample(range(-8, 9), rng.randint(1, 5)))
        p = poly_from_roots(roots)
        assert count_real_roots(p) == len(roots)
        lo = Fraction(rng.randint(-10, 10))
        hi = lo + rng.randint(0, 12)
        expected = sum(1 for r in roots if lo < r <= hi)
        assert count_real_roots(p, lo=lo, hi=hi) == expected
        assert count_real_roots(p, NEG_INF, POS_INF) == len(roots)


def test_charpoly_companion():
    # companion of x^2 - 3x + 2 has eigenvalues 1 and 2
    m = [[Fraction(0), Fraction(-2)], [Fraction(1), Fraction(3)]]
    cp = charpoly(m)
    assert cp == [Fraction(2), Fraction(-3), Fraction(1)]
    assert evaluate(cp, 1) == 0 and evaluate(cp, 2) == 0


def test_charpoly_random_matches_dets():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(1, 4)
        m = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        cp = charpoly(m)
        # det(xI - m) at x = 7 equals the evaluated charpoly
        shifted = [
            [Fraction(7) - m[i][j] if i == j else -m[i][j] for j in range(n)]
            for i in range(n)
        ]
        assert evaluate(cp, 7) == det_frac(shifted)
        # constant term = (-1)^n det(m)
        mi = [[int(x) for x in row] for row in m]
        assert cp[0] == (-1) ** n * det_bareiss(mi)


def test_derivative():
    assert derivative([5, 3, 2]) == [3, 4]
    assert derivative([7]) == []
