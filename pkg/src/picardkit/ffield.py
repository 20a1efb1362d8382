"""Exact arithmetic in finite fields F_{p^e} and their extension towers.

A field is described by its characteristic p and a monic irreducible modulus
of degree e over Z/pZ; elements are coefficient vectors in the power basis of
the modulus.  The modulus is always the *first* irreducible polynomial in a
fixed enumeration order, so that a (p, e) pair pins down one canonical field
and every downstream computation is reproducible.

Extension towers are always rebuilt over the prime field: F_{q^n} for
q = p^e is represented as the canonical degree-(e*n) field together with an
explicit embedding of the degree-e field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class FieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# primality


def is_prime(n):
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10**24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# dense univariate arithmetic over Z/pZ (coefficient lists, index = degree)


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i in range(dm + 1):
                a[off + i] = (a[off + i] - c * m[i]) % p
        a.pop()
    return _trim(a)


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(a, k, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while k:
        if k & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        k >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # reduce a mod b after making b monic
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, bm, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _is_irreducible(m, p):
    """Rabin irreducibility test for monic m over Z/pZ."""
    e = len(m) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    x = [0, 1]
    # x^(p^e) == x mod m
    t = x
    for _ in range(e):
        t = _ppowmod(t, p, m, p)
    if _trim([(ti - xi) % p for ti, xi in itertools.zip_longest(t, x, fillvalue=0)]):
        return False
    # gcd(x^(p^(e/l)) - x, m) = 1 for every prime l | e
    for ell in _prime_divisors(e):
        t = x
        for _ in range(e // ell):
            t = _ppowmod(t, p, m, p)
        diff = _trim([(ti - xi) % p for ti, xi in itertools.zip_longest(t, x, fillvalue=0)])
        g = _pgcd(diff, m, p)
        if len(g) - 1 != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# field descriptors and elements


class FieldDesc:
    """A finite field F_{p^e}, fixed by its canonical irreducible modulus.

    Immutable; safe to share.  `modulus` holds the e+1 coefficients of the
    monic modulus, constant term first.
    """

    __slots__ = ("p", "e", "modulus", "q")

    def __init__(self, p, e, modulus):
        self.p = p
        self.e = e
        self.modulus = tuple(modulus)
        self.q = p**e

    def __eq__(self, other):
        return (
            isinstance(other, FieldDesc)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FieldDesc(p={self.p}, e={self.e})"

    # -- element constructors ------------------------------------------------

    def element(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            raise FieldError("coefficient vector longer than extension degree")
        coeffs += [0] * (self.e - len(coeffs))
        return FieldElement(self, tuple(c % self.p for c in coeffs))

    def zero(self):
        return FieldElement(self, (0,) * self.e)

    def one(self):
        return self.from_int(1)

    def from_int(self, k):
        return self.element([k % self.p] + [0] * (self.e - 1))

    def gen(self):
        """The power-basis generator (the class of x)."""
        if self.e == 1:
            raise FieldError("prime field has no power-basis generator above constants")
        return self.element([0, 1])

    # -- index <-> element (canonical base-p integer order) ------------------

    def from_index(self, idx):
        coeffs = []
        for _ in range(self.e):
            idx, r = divmod(idx, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def to_index(self, x):
        idx = 0
        for c in reversed(x.coeffs):
            idx = idx * self.p + c
        return idx

    def elements(self):
        """All q elements in the deterministic base-p integer order."""
        for idx in range(self.q):
            yield self.from_index(idx)

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj):
        f = FieldDesc(obj["p"], obj["e"], obj["modulus"])
        if not is_prime(f.p):
            raise FieldError(f"{f.p} is not prime")
        if len(f.modulus) != f.e + 1 or f.modulus[-1] != 1:
            raise FieldError("modulus is not monic of the declared degree")
        return f


class FieldElement:
    """An element of a FieldDesc, as a coefficient vector in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"<{poly_str(self.coeffs)} in F_{self.field.q}>"

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("operands belong to different fields")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        prod = _pmulmod(list(self.coeffs), list(other.coeffs), list(f.modulus), f.p)
        prod += [0] * (f.e - len(prod))
        return FieldElement(f, tuple(prod))

    def inv(self):
        """Multiplicative inverse; raises ZeroDivisionError on 0."""
        if not self:
            raise ZeroDivisionError("inversion of zero field element")
        f = self.field
        # extended Euclid over Z/pZ[x]
        a, b = list(f.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        p = f.p
        while b:
            inv = pow(b[-1], p - 2, p)
            bm = [(c * inv) % p for c in b]
            # quotient of a by bm
            q = []
            rem = list(a)
            db = len(bm) - 1
            qco = [0] * max(len(rem) - db, 1)
            while len(rem) - 1 >= db and rem:
                c = rem[-1]
                off = len(rem) - 1 - db
                if c:
                    qco[off] = c
                    for i in range(db + 1):
                        rem[off + i] = (rem[off + i] - c * bm[i]) % p
                rem.pop()
            q = _trim(qco)
            # scale q by inv to account for monic normalization of b
            q = [(c * inv) % p for c in q]
            a, b = b, _trim(rem)
            s0, s1 = s1, _trim(
                [
                    (x - y) % p
                    for x, y in itertools.zip_longest(s0, _pmul(q, s1, p), fillvalue=0)
                ]
            )
        # a is now gcd (a unit);
        lead_inv = pow(a[-1], p - 2, p)
        s0 = [(c * lead_inv) % p for c in s0]
        s0 = _pmod(s0, list(f.modulus), p)
        s0 += [0] * (f.e - len(s0))
        return FieldElement(f, tuple(s0))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __pow__(self, k):
        f = self.field
        if k < 0:
            return self.inv() ** (-k)
        r = _ppowmod(list(self.coeffs), k, list(f.modulus), f.p)
        r += [0] * (f.e - len(r))
        return FieldElement(f, tuple(r))

    def frobenius(self):
        """x -> x^p."""
        return self ** self.field.p

    def to_int(self):
        """Constant value, defined only for elements of the prime subfield."""
        if any(self.coeffs[1:]):
            raise FieldError("element is not in the prime subfield")
        return self.coeffs[0]


def poly_str(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{c}*g" if c != 1 else "g")
        else:
            terms.append(f"{c}*g^{i}" if c != 1 else f"g^{i}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# field construction


_FIELD_CACHE = {}


def make_field(p, e):
    """The canonical F_{p^e}.

    The modulus is the first monic irreducible of degree e when non-leading
    coefficient vectors are enumerated as base-p integers 0, 1, 2, ...
    (constant coefficient = least significant digit).
    """
    if (p, e) in _FIELD_CACHE:
        return _FIELD_CACHE[(p, e)]
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be positive")
    for k in itertools.count():
        if k >= p**e:
            raise FieldError("no irreducible modulus found")  # unreachable
        coeffs = []
        kk = k
        for _ in range(e):
            kk, r = divmod(kk, p)
            coeffs.append(r)
        m = coeffs + [1]
        if _is_irreducible(m, p):
            field = FieldDesc(p, e, m)
            _FIELD_CACHE[(p, e)] = field
            return field


@dataclass(frozen=True)
class Embedding:
    """Ring embedding of a base field into an extension field.

    `gen_image` is the image of the base power-basis generator; constants map
    to constants.
    """

    base: FieldDesc
    ext: FieldDesc
    gen_image: FieldElement

    def __call__(self, x):
        if x.field != self.base:
            raise FieldError("element does not belong to the embedding's base field")
        acc = self.ext.zero()
        power = self.ext.one()
        for c in x.coeffs:
            if c:
                acc = acc + self.ext.from_int(c) * power
            power = power * self.gen_image
        return acc


_EMBED_CACHE = {}


def extend(base, n):
    """F_{q^n} for q = p^e, with the embedding of the degree-e base field.

    The extension is the canonical degree-(e*n) field over the prime field;
    the base generator is sent to its first root (in enumeration order) of
    the base modulus inside the extension.
    """
    key = (base.p, base.e, base.modulus, n)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    if n < 1:
        raise FieldError("extension degree must be positive")
    ext = make_field(base.p, base.e * n)
    if base.e == 1:
        image = ext.one()
    elif n == 1:
        image = ext.gen()  # base is canonical, so identity embedding
    else:
        image = _find_root(base.modulus, ext)
    emb = Embedding(base, ext, image)
    _EMBED_CACHE[key] = emb
    return emb


def _find_root(modulus, ext):
    # first root in enumeration order; extension sizes with e > 1 bases stay
    # small in practice, so a linear scan is acceptable
    consts = [ext.from_int(c) for c in modulus]
    for idx in range(ext.q):
        x = ext.from_index(idx)
        acc = ext.zero()
        power = ext.one()
        for c in consts:
            acc = acc + c * power
            power = power * x
        if not acc:
            return x
    raise FieldError("modulus has no root in the requested extension")


def enumerate_field(field):
    """All q elements, in the deterministic base-p integer order."""
    return list(field.elements())


def multiplicative_generator(field):
    """First element (in enumeration order) of multiplicative order q - 1."""
    q = field.q
    if q == 2:
        return field.one()
    factors = _prime_divisors(q - 1)
    for idx in range(1, q):
        x = field.from_index(idx)
        if not x:
            continue
        if all(bool(x ** ((q - 1) // f) - field.one()) for f in factors):
            return x
    raise FieldError("no multiplicative generator found")  # unreachable
