import random

import pytest

from picardkit.ffield import (
    FieldError,
    enumerate_field,
    extend,
    make_field,
    multiplicative_generator,
)


def test_make_field_prime():
    f = make_field(2, 1)
    assert f.modulus == (0, 1)  # modulus x, field = Z/2Z
    assert f.q == 2


def test_make_field_f4_modulus_forced():
    f = make_field(2, 2)
    assert f.modulus == (1, 1, 1)  # x^2 + x + 1, the unique irreducible quadratic


def test_make_field_f9_first_in_order():
    # oracle: exhaust all 9 monic quadratics over F_3 in the stated order and
    # take the first with no root (degree 2: irreducible iff rootless)
    first = None
    for k in range(9):
        c0, c1 = k % 3, k // 3
        if all((x * x + c1 * x + c0) % 3 != 0 for x in range(3)):
            first = (c0, c1, 1)
            break
    f = make_field(3, 2)
    assert f.modulus == first


def test_make_field_rejects_composite():
    with pytest.raises(FieldError):
        make_field(6, 1)


def test_arithmetic_f4():
    f = make_field(2, 2)
    x = f.gen()
    assert x * x == f.element([1, 1])  # x^2 = x + 1


def test_inverse_f5():
    f = make_field(5, 1)
    assert f.from_int(2).inv() == f.from_int(3)
    with pytest.raises(ZeroDivisionError):
        f.zero().inv()


def test_frobenius_squared_is_identity_on_f9():
    f = make_field(3, 2)
    rng = random.Random(9)
    elems = enumerate_field(f)
    for x in rng.sample(elems, 9) + rng.choices(elems, k=11):
        assert x.frobenius().frobenius() == x


def test_enumerate_small():
    f2 = make_field(2, 1)
    assert [e.coeffs for e in enumerate_field(f2)] == [(0,), (1,)]
    f4 = make_field(2, 2)
    es = enumerate_field(f4)
    assert len(es) == 4
    assert es[0] == f4.zero() and es[1] == f4.one()


def test_enumerate_f8_distinct():
    f = make_field(2, 3)
    es = enumerate_field(f)
    assert len(es) == 8
    assert len({e.coeffs for e in es}) == 8


def test_extend_trivial_cases():
    f2 = make_field(2, 1)
    e1 = extend(f2, 1)
    assert e1.ext == f2
    assert e1(f2.one()) == f2.one()
    e2 = extend(f2, 2)
    assert e2.ext.q == 4
    assert e2(f2.one()) == e2.ext.one()


def test_extend_f4_to_f16_root_check():
    f4 = make_field(2, 2)
    emb = extend(f4, 2)
    f16 = emb.ext
    assert f16.q == 16
    # the image of the generator satisfies the F_4 modulus
    beta = emb.gen_image
    m = f4.modulus
    acc = f16.zero()
    power = f16.one()
    for c in m:
        acc = acc + f16.from_int(c) * power
        power = power * beta
    assert not acc


def _prime_powers_up_to(limit):
    from picardkit.ffield import is_prime

    out = []
    for p in range(2, limit + 1):
        if not is_prime(p):
            continue
        e = 1
        while p**e <= limit:
            out.append((p, e))
            e += 1
    return out


@pytest.mark.parametrize("p,e", _prime_powers_up_to(64))
def test_multiplicative_generator_exists(p, e):
    f = make_field(p, e)
    g = multiplicative_generator(f)
    # exhaustive order computation
    seen = set()
    x = f.one()
    for _ in range(f.q - 1):
        x = x * g
        seen.add(x.coeffs)
    assert len(seen) == f.q - 1


@pytest.mark.parametrize(
    "p,e,n",
    [(2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 2, 2), (3, 1, 2), (3, 2, 2), (5, 1, 2),
     (7, 1, 2), (11, 1, 2), (13, 1, 2), (2, 3, 2), (2, 4, 2)],
)
def test_embedding_is_ring_hom(p, e, n):
    base = make_field(p, e)
    emb = extend(base, n)
    elems = enumerate_field(base)
    assert base.q <= 16
    for a in elems:
        for b in elems:
            assert emb(a + b) == emb(a) + emb(b)
            assert emb(a * b) == emb(a) * emb(b)


@pytest.mark.parametrize("p,e", _prime_powers_up_to(64))
def test_frobenius_fixes_exactly_prime_field(p, e):
    f = make_field(p, e)
    assert f.q <= 64
    fixed = [x for x in f.elements() if x.frobenius() == x]
    assert len(fixed) == p
    for x in fixed:
        x.to_int()  # in the prime subfield


def test_field_axiom_samples():
    f = make_field(3, 2)
    rng = random.Random(42)
    es = enumerate_field(f)
    for _ in range(50):
        a, b, c = rng.choice(es), rng.choice(es), rng.choice(es)
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        if b:
            assert (a / b) * b == a
        assert a ** 5 == a * a * a * a * a


def test_pow_matches_repeated_multiplication():
    f = make_field(2, 4)
    g = f.gen()
    acc = f.one()
    for k in range(20):
        assert g**k == acc
        acc = acc * g
