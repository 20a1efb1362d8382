from fractions import Fraction

import pytest

from picardkit.ffield import make_field
from picardkit.polysys import (
    HomIdeal,
    MultiPoly,
    PolyError,
    groebner,
    normal_form,
    order_key,
    poly_from_str,
    poly_to_str,
    s_polynomial,
)


def q(s, nvars):
    return poly_from_str(s, nvars)


def test_parser_basic():
    p = q("3*x0^2*x1 - x2^3", 3)
    assert p.terms == {(2, 1, 0): Fraction(3), (0, 0, 3): Fraction(-1)}
    assert q("x0 + x0", 1).terms == {(1,): Fraction(2)}
    assert q("1/2*x0 - 3/4", 1).terms == {(1,): Fraction(1, 2), (0,): Fraction(-3, 4)}


def test_parser_field_coefficients():
    f4 = make_field(2, 2)
    p = poly_from_str("g*x0 + x1 + g^2*x1", 2, f4)
    w = f4.gen()
    assert p.terms[(1, 0)] == w
    assert p.terms[(0, 1)] == f4.one() + w * w


def test_parser_rejects_garbage():
    with pytest.raises(PolyError):
        q("x9", 2)
    with pytest.raises(PolyError):
        q("x0 $ x1", 2)
    with pytest.raises(PolyError):
        q("", 2)


@pytest.mark.parametrize(
    "s,n",
    [
        ("3*x0^2*x1 - x2^3", 3),
        ("x0^4 + x1^4 + x2^4 + x3^4", 4),
        ("-x0 + 2*x1 - 1/3*x2", 3),
        ("7", 1),
        ("x0*x3 - x1*x2", 4),
    ],
)
def test_printer_round_trip(s, n):
    p = q(s, n)
    assert q(poly_to_str(p), n) == p


def test_printer_round_trip_field():
    f4 = make_field(2, 2)
    p = poly_from_str("x0^3 + g*x1^3 + g^2*x2^3 + x0*x1*x2", 3, f4)
    assert poly_from_str(poly_to_str(p), 3, f4) == p


def test_partial_derivative_char_p():
    f3 = make_field(3, 1)
    p = poly_from_str("x0^3 + x0^2*x1", 2, f3)
    d = p.partial(0)
    # 3x0^2 vanishes in char 3
    assert d == poly_from_str("2*x0*x1", 2, f3)


def test_groebner_principal():
    basis = groebner(HomIdeal([q("x0", 2)]))
    assert len(basis) == 1
    assert basis[0] == q("x0", 2)


def test_groebner_unit_ideal():
    basis = groebner(HomIdeal([MultiPoly.const(2, 1)]))
    assert len(basis) == 1
    assert basis[0] == MultiPoly.const(2, 1)


def _buchberger_criterion_holds(basis, order):
    key = order_key(order)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = s_polynomial(basis[i], basis[j], key)
            if normal_form(s, basis, key):
                return False
    return True


def test_groebner_buchberger_oracle():
    ideal = HomIdeal([q("x0^2 - x1*x2", 3), q("x0*x1 - x2^2", 3)])
    basis = groebner(ideal)
    assert _buchberger_criterion_holds(basis, "degrevlex")
    # each original generator reduces to zero against the basis
    key = order_key("degrevlex")
    for g in ideal.generators:
        assert not normal_form(g, basis, key)


def test_groebner_idempotent():
    ideal = HomIdeal([q("x0^2 - x1*x2", 3), q("x0*x1 - x2^2", 3)])
    b1 = groebner(ideal)
    b2 = groebner(HomIdeal(b1))
    assert b1 == b2


def test_groebner_over_f2():
    f2 = make_field(2, 1)
    gens = [poly_from_str("x0*x3 + x1*x2", 4, f2), poly_from_str("x0 + x1", 4, f2)]
    basis = groebner(HomIdeal(gens))
    assert _buchberger_criterion_holds(basis, "degrevlex")


def test_groebner_twisted_cubic():
    gens = [q("x0*x2 - x1^2", 4), q("x0*x3 - x1*x2", 4), q("x1*x3 - x2^2", 4)]
    basis = groebner(HomIdeal(gens))
    assert _buchberger_criterion_holds(basis, "degrevlex")
    assert len(basis) == 3


def test_homogeneity_enforced():
    with pytest.raises(PolyError):
        HomIdeal([q("x0^2 + x1", 2)])


def test_zero_generator_dropped():
    ideal = HomIdeal([q("x0", 2), MultiPoly.zero(2)])
    assert len(ideal.generators) == 1
