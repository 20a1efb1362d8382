"""Hilbert polynomials, dimension/degree, smoothness, intersection numbers.

The Hilbert polynomial is computed from the initial ideal of a Groebner
basis followed by a combinatorial recursion on monomial ideals, rather than
through free resolutions; the two agree and this route is simpler to audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .groebner import HomIdeal, groebner, ideal_sum, leading, order_key
from .multipoly import MultiPoly, PolyError


class ImproperIntersectionError(ValueError):
    """The supports of the two cycles meet in positive dimension.

    Making the representatives transverse would need a moving search; this
    library only reports the obstruction.
    """


@dataclass(frozen=True)
class HilbertPoly:
    """Polynomial in t with rational coefficients, index = degree."""

    coeffs: tuple

    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs


def _minimalize(gens):
    out = []
    for g in sorted(gens, key=sum):
        if not any(all(a <= b for a, b in zip(m, g)) for m in out):
            out.append(g)
    return out


def _hilbert_numerator(gens, nvars, memo):
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of S/(gens).

    gens: minimal monomial generators as exponent tuples.  Returns integer
    coefficient list.
    """
    key = frozenset(gens)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not gens:
        result = [1]
    elif any(sum(g) == 0 for g in gens):
        result = []
    elif len(gens) == 1:
        result = [1] + [0] * (sum(gens[0]) - 1) + [-1]
    else:
        pures = [g for g in gens if sum(1 for e in g if e) == 1]
        if len(pures) == len(gens):
            # complete intersection of pure powers: product of (1 - t^d)
            result = [1]
            for g in gens:
                d = sum(g)
                factor = [1] + [0] * (d - 1) + [-1]
                result = _poly_mul(result, factor)
        else:
            # pivot on the variable most shared among non-pure-power
            # generators; restricting to those guarantees I + (x_j) != I
            counts = [0] * nvars
            for g in gens:
                if sum(1 for e in g if e) == 1:
                    continue
                for i, e in enumerate(g):
                    if e:
                        counts[i] += 1
            j = max(range(nvars), key=lambda i: (counts[i], -i))
            # I + (x_j)
            with_var = [g for g in gens if g[j] == 0]
            pivot = tuple(1 if i == j else 0 for i in range(nvars))
            sum_gens = _minimalize(with_var + [pivot])
            # I : x_j
            quo_gens = _minimalize(
                [tuple(e - 1 if i == j and e else e for i, e in enumerate(g)) for g in gens]
            )
            a = _hilbert_numerator(sum_gens, nvars, memo)
            b = _hilbert_numerator(quo_gens, nvars, memo)
            result = _poly_add(a, [0] + b)
    memo[key] = result
    return result


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and not out[-1]:
        out.pop()
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    while out and not out[-1]:
        out.pop()
    return out


def _divide_by_one_minus_t(n):
    # exact quotient of n by (1 - t); assumes n(1) == 0
    out = []
    acc = 0
    for c in n[:-1] if n else []:
        acc += c
        out.append(acc)
    while out and not out[-1]:
        out.pop()
    return out


def hilbert_series_data(ideal):
    """(reduced numerator, D) with Hilbert series = N(t) / (1-t)^D, N(1) != 0.

    D = 0 with N = [] means the irrelevant/unit case (empty scheme).
    """
    basis = ideal.basis()
    if ideal.nvars is None:
        raise PolyError("zero ideal with unknown ambient ring; use with_ambient")
    key = order_key(ideal.term_order)
    gens = _minimalize([leading(g, key)[0] for g in basis])
    memo = {}
    num = _hilbert_numerator(gens, ideal.nvars, memo)
    d = ideal.nvars
    while num and sum(num) == 0:
        num = _divide_by_one_minus_t(num)
        d -= 1
    if not num:
        return [], 0
    return num, d


def _binomial_poly(shift, k):
    """C(t + shift, k) as a polynomial in t (Fraction coefficients)."""
    out = [Fraction(1)]
    for i in range(1, k + 1):
        out = [c / Fraction(i) for c in _poly_mul_frac(out, [Fraction(shift - k + i), Fraction(1)])]
    return out


def _poly_mul_frac(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hilbert_polynomial(ideal):
    """Hilbert polynomial of Proj(S/I); the zero polynomial for empty schemes."""
    return hilbert_data(ideal)[0]


def hilbert_data(ideal):
    """(Hilbert polynomial, agreement bound): the polynomial matches the
    graded dimension dim (S/I)_d for every d >= the bound."""
    num, d_series = hilbert_series_data(ideal)
    if not num or d_series == 0:
        # finite-length tail: the function is 0 beyond the series support
        return HilbertPoly(()), len(num)
    k = d_series - 1
    coeffs = [Fraction(0)] * (k + 1)
    for j, nj in enumerate(num):
        if nj:
            bp = _binomial_poly(k - j, k)
            for i, c in enumerate(bp):
                coeffs[i] += nj * c
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    bound = max(0, (len(num) - 1) - d_series + 1)
    return HilbertPoly(tuple(coeffs)), bound


def dimension_degree(ideal):
    """(projective dimension, degree); (-1, None) for the empty scheme."""
    num, d_series = hilbert_series_data(ideal)
    if not num or d_series == 0:
        return -1, None
    dim = d_series - 1
    degree = sum(num)
    assert degree > 0
    return dim, degree


def graded_dimension(ideal, d):
    """dim over the base field of (S/I)_d, by exact rank of the span of
    degree-d multiples of the generators.  Independent of Groebner bases;
    used as a cross-check oracle."""
    from ..exactla import rank

    nvars = ideal.nvars
    monos = _monomials_of_degree(nvars, d)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in ideal.generators:
        dg = g.total_degree()
        if dg > d:
            continue
        for m in _monomials_of_degree(nvars, d - dg):
            row = [0] * len(monos)
            for e, c in g.terms.items():
                ee = tuple(a + b for a, b in zip(e, m))
                row[index[ee]] = _to_rational(c, g.domain)
            rows.append(row)
    return len(monos) - (rank(rows) if rows else 0)


def _to_rational(c, domain):
    if domain is None:
        return c
    # prime-field coefficients embed as integers; larger fields would need a
    # vector-space refinement, which the oracle tests do not require
    return c.to_int()


def _monomials_of_degree(nvars, d):
    if nvars == 1:
        return [(d,)]
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], d, nvars)
    return out


def smoothness_check(ideal):
    """Jacobian criterion: the c x c minors of the Jacobian (c = codimension)
    together with I must cut out the empty projective scheme.

    Checks only the Jacobian locus; equidimensionality is the caller's
    responsibility.  Empty schemes pass vacuously.
    """
    dim, _ = dimension_degree(ideal)
    if dim == -1:
        return True
    nvars = ideal.nvars
    c = (nvars - 1) - dim
    if c == 0:
        return True  # the whole ambient projective space
    gens = ideal.generators
    if len(gens) < c:
        return False  # not enough equations for the minor criterion
    jac = [[g.partial(i) for i in range(nvars)] for g in gens]
    minors = []
    for rows in combinations(range(len(gens)), c):
        for cols in combinations(range(nvars), c):
            sub = [[jac[r][col] for col in cols] for r in rows]
            m = _poly_det(sub)
            if m:
                minors.append(m)
    sing = HomIdeal(list(gens) + minors, ideal.term_order, _skip_checks=True)
    sing = sing.with_ambient(nvars, ideal.domain)
    sdim, _ = dimension_degree(sing)
    return sdim == -1


def _poly_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = m[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        first = next((x for row in m for x in row if isinstance(x, MultiPoly)), None)
        return MultiPoly.zero(first.nvars, first.domain) if first else None
    return acc


def proper_intersection_number(ambient, z, y):
    """Degree of the scheme-theoretic intersection of two properly meeting
    cycles on a variety.

    `ambient`, `z`, `y` are homogeneous ideals; `z` and `y` cut complementary-
    dimensional subschemes of the ambient variety.  Raises
    ImproperIntersectionError when the supports overlap in positive dimension
    (a moving search would be needed; out of scope here).  Disjoint supports
    give 0.
    """
    dim_x, _ = dimension_degree(ambient)
    dim_z, _ = dimension_degree(z)
    dim_y, _ = dimension_degree(y)
    if dim_z + dim_y != dim_x:
        raise PolyError(
            f"cycles are not of complementary dimension: {dim_z} + {dim_y} != {dim_x}"
        )
    total = ideal_sum(ambient, z, y, term_order=ambient.term_order)
    dim_t, deg_t = dimension_degree(total)
    if dim_t > 0:
        raise ImproperIntersectionError(
            f"supports meet in dimension {dim_t}; representatives are not transverse"
        )
    if dim_t == -1:
        return 0
    return deg_t
