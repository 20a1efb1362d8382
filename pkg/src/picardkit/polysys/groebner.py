"""Buchberger's algorithm with normal pair selection and both skip criteria.

Term orders: degrevlex (default) and lex.  Output bases are reduced (auto-
reduced, monic leading coefficients), hence unique for the order.  No F4/F5:
the ideals this package meets are small, and auditability wins.
"""

from __future__ import annotations

from .multipoly import MultiPoly, PolyError, dom_one


def order_key(order):
    if order == "degrevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == "lex":
        return lambda e: tuple(e)
    raise PolyError(f"unknown term order {order!r}")


class HomIdeal:
    """A homogeneous ideal given by generators, with a cached Groebner basis.

    The zero polynomial is silently dropped from the generator list; an empty
    list denotes the zero ideal.
    """

    def __init__(self, generators, term_order="degrevlex", _skip_checks=False):
        gens = [g for g in generators if g]
        if gens:
            nv, dom = gens[0].nvars, gens[0].domain
            for g in gens:
                if g.nvars != nv or g.domain != dom:
                    raise PolyError("generators over different rings")
                if not _skip_checks and not g.is_homogeneous():
                    raise PolyError("generator is not homogeneous")
            self.nvars, self.domain = nv, dom
        else:
            self.nvars, self.domain = None, None
        self.generators = gens
        self.term_order = term_order
        self.cached_basis = None

    def with_ambient(self, nvars, domain=None):
        """Give an empty ideal an explicit ambient ring."""
        if self.generators:
            return self
        out = HomIdeal([], self.term_order)
        out.nvars, out.domain = nvars, domain
        return out

    def basis(self):
        if self.cached_basis is None:
            self.cached_basis = groebner(self)
        return self.cached_basis


def leading(p, key):
    e = max(p.terms, key=key)
    return e, p.terms[e]


def _divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _monomial_mul(p, exps, coeff):
    t = {}
    for e, c in p.terms.items():
        t[tuple(a + b for a, b in zip(e, exps))] = c * coeff
    out = MultiPoly.__new__(MultiPoly)
    out.nvars, out.domain, out.terms = p.nvars, p.domain, t
    return out


def normal_form(f, basis, key):
    """Full remainder of f modulo basis (every term reduced)."""
    if not basis:
        return f
    lead_cache = [leading(g, key) for g in basis]
    remainder = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for g, (le, lc) in zip(basis, lead_cache):
            if _divides(le, e):
                factor = c / lc
                shift = tuple(a - b for a, b in zip(e, le))
                for ge, gc in g.terms.items():
                    if ge == le:
                        continue
                    ne = tuple(a + b for a, b in zip(ge, shift))
                    s = work.get(ne, None)
                    s = -factor * gc if s is None else s - factor * gc
                    if s:
                        work[ne] = s
                    elif ne in work:
                        del work[ne]
                break
        else:
            remainder[e] = c
    out = MultiPoly.__new__(MultiPoly)
    out.nvars, out.domain, out.terms = f.nvars, f.domain, remainder
    return out


def s_polynomial(f, g, key):
    le_f, lc_f = leading(f, key)
    le_g, lc_g = leading(g, key)
    l = _lcm(le_f, le_g)
    one = dom_one(f.domain)
    a = _monomial_mul(f, tuple(x - y for x, y in zip(l, le_f)), one / lc_f)
    b = _monomial_mul(g, tuple(x - y for x, y in zip(l, le_g)), one / lc_g)
    return a - b


def groebner(ideal):
    """Reduced Groebner basis of a HomIdeal.

    Pair selection is the normal strategy (smallest lcm in the term order);
    pairs are skipped by the coprimality criterion and the chain criterion.
    """
    key = order_key(ideal.term_order)
    gens = [g for g in ideal.generators if g]
    if not gens:
        return []
    G = []
    for g in gens:
        _, lc = leading(g, key)
        G.append(g.scaled(dom_one(g.domain) / lc))

    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    done = set()

    def lcm_of(i, j):
        return _lcm(leading(G[i], key)[0], leading(G[j], key)[0])

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        done.add((i, j))
        le_i = leading(G[i], key)[0]
        le_j = leading(G[j], key)[0]
        l = _lcm(le_i, le_j)
        # coprimality criterion
        if all(a + b == c for a, b, c in zip(le_i, le_j, l)):
            continue
        # chain criterion: a third element divides the lcm and both side
        # pairs were already treated
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _divides(leading(G[k], key)[0], l):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        s = normal_form(s_polynomial(G[i], G[j], key), G, key)
        if s:
            _, lc = leading(s, key)
            s = s.scaled(dom_one(s.domain) / lc)
            G.append(s)
            n = len(G) - 1
            for m in range(n):
                pairs.add((m, n))
    return _reduce_basis(G, key)


def _reduce_basis(G, key):
    # drop elements whose leading monomial is divisible by another's
    leads = [leading(g, key)[0] for g in G]
    keep = []
    for i, g in enumerate(G):
        if any(
            j != i and _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i)
            for j in range(len(G))
        ):
            continue
        keep.append(g)
    # fully reduce each kept element against the others
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        r = normal_form(g, others, key) if others else g
        if r:
            _, lc = leading(r, key)
            reduced.append(r.scaled(dom_one(r.domain) / lc))
    reduced.sort(key=lambda p: key(leading(p, key)[0]))
    return reduced


def ideal_sum(*ideals, term_order="degrevlex"):
    gens = []
    for i in ideals:
        gens.extend(i.generators)
    return HomIdeal(gens, term_order)
