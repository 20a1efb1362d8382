"""Pure-Python counting kernel: reference implementation.

The compiled kernel in _ckernel.pyx mirrors this module function for
function; both must produce identical counts on identical inputs (tested).
Field elements are integer indices (the base-p digit encoding of coefficient
vectors); multiplication and addition go through exp/log/Zech tables.

Index conventions inside the tables:
    0 encodes the zero element, 1 encodes one;
    exp[i] = index of g^i, log[idx] = discrete log (log[0] = -1),
    zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0.
"""

from __future__ import annotations

from array import array

BACKEND = "pure"


def build_tables(p, e, modulus):
    """exp/log/Zech tables for F_{p^e} with the given canonical modulus.

    The generator is the first field element (in index order) of
    multiplicative order p^e - 1, so tables are reproducible.
    """
    q = p**e
    mod = list(modulus)

    def idx_to_vec(idx):
        v = []
        for _ in range(e):
            idx, r = divmod(idx, p)
            v.append(r)
        return v

    def vec_to_idx(v):
        idx = 0
        for c in reversed(v):
            idx = idx * p + c
        return idx

    def vmul(a, b):
        out = [0] * (2 * e - 1) if e > 1 else [a[0] * b[0] % p]
        if e > 1:
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] = (out[i + j] + ai * bj) % p
            for k in range(len(out) - 1, e - 1, -1):
                c = out[k]
                if c:
                    for i in range(e + 1):
                        out[k - e + i] = (out[k - e + i] - c * mod[i]) % p
                out[k] = 0
        return out[:e]

    def idx_mul(a, b):
        return vec_to_idx(vmul(idx_to_vec(a), idx_to_vec(b)))

    def idx_pow(a, k):
        r = 1
        while k:
            if k & 1:
                r = idx_mul(r, a)
            a = idx_mul(a, a)
            k >>= 1
        return r

    factors = []
    n = q - 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    gen = 1
    if q > 2:
        for cand in range(2, q):
            if all(idx_pow(cand, (q - 1) // f) != 1 for f in factors):
                gen = cand
                break

    exp = array("q", [0] * (q - 1))
    log = array("q", [-1] * q)
    cur = 1
    for i in range(q - 1):
        exp[i] = cur
        log[cur] = i
        cur = idx_mul(cur, gen)

    zech = array("q", [0] * (q - 1))
    pm1 = p - 1
    for k in range(q - 1):
        t = exp[k]
        # adding one increments the constant digit mod p
        t1 = t + 1 if t % p < pm1 else t - pm1
        zech[k] = log[t1] if t1 else -1
    return exp, log, zech


class _Ops:
    """Field and small-degree polynomial arithmetic on table indices."""

    def __init__(self, Q, p, tmask, exp, log, zech):
        self.Q = Q
        self.p = p
        self.tmask = tmask
        self.Qm1 = Q - 1
        self.exp = exp
        self.log = log
        self.zech = zech
        # index of -1: char 2 has -1 = 1; otherwise g^((Q-1)/2)
        self.negone = 1 if self.Qm1 % 2 else exp[self.Qm1 // 2]

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.Qm1]

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = self.zech[(self.log[b] - self.log[a]) % self.Qm1]
        if z < 0:
            return 0
        return self.exp[(self.log[a] + z) % self.Qm1]

    def neg(self, a):
        return self.mul(a, self.negone)

    def inv(self, a):
        return self.exp[(self.Qm1 - self.log[a]) % self.Qm1]

    # -- dense univariate polynomials as index lists (index = degree) --------

    def ptrim(self, a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def pmonic(self, a):
        lead = a[-1]
        if lead == 1:
            return a
        s = self.inv(lead)
        return [self.mul(c, s) for c in a]

    def psub(self, a, b):
        n = max(len(a), len(b))
        out = [
            self.add(a[i] if i < len(a) else 0, self.neg(b[i]) if i < len(b) else 0)
            for i in range(n)
        ]
        return self.ptrim(out)

    def pmulmod(self, a, b, m):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = self.add(out[i + j], self.mul(ai, bj))
        dm = len(m) - 1
        for k in range(len(out) - 1, dm - 1, -1):
            c = out[k]
            if c:
                nc = self.neg(c)
                for i in range(dm):
                    out[k - dm + i] = self.add(out[k - dm + i], self.mul(nc, m[i]))
            out[k] = 0
        return self.ptrim(out)

    def pmod(self, a, m):
        # m monic
        a = list(a)
        dm = len(m) - 1
        while len(a) - 1 >= dm and a:
            c = a[-1]
            if c:
                nc = self.neg(c)
                off = len(a) - 1 - dm
                for i in range(dm):
                    a[off + i] = self.add(a[off + i], self.mul(nc, m[i]))
            a.pop()
        return self.ptrim(a)

    def pgcd(self, a, b):
        a, b = list(a), list(b)
        while b:
            bm = self.pmonic(b)
            a, b = bm, self.pmod(a, bm)
        return a

    def pow_x_mod(self, k, m):
        # x^k mod m, m monic of degree >= 1
        base = self.pmod([0, 1], m)
        result = [1]
        while k:
            if k & 1:
                result = self.pmulmod(result, base, m)
            base = self.pmulmod(base, base, m)
            k >>= 1
        return result

    def distinct_roots(self, g):
        """Number of distinct roots in F_Q of a nonconstant polynomial."""
        g = self.pmonic(list(g))
        xq = self.pow_x_mod(self.Q, g)
        r = self.psub(xq, [0, 1])
        if not r:
            return len(g) - 1
        return len(self.pgcd(g, r)) - 1

    def root_count(self, g):
        """distinct_roots with closed forms for degrees 1 and 2.

        Degree 2 avoids the x^Q ladder: quadratic-character parity of the
        discriminant in odd characteristic, an absolute-trace test in
        characteristic 2.
        """
        d = len(g) - 1
        if d == 1:
            return 1
        if d == 2:
            c, b, a = g[0], g[1], g[2]
            if self.p == 2:
                if b == 0:
                    return 1  # squaring is bijective
                v = self.mul(self.mul(a, c), self.inv(self.mul(b, b)))
                if v == 0:
                    return 2
                return 2 if bin(v & self.tmask).count("1") % 2 == 0 else 0
            four = 4 % self.p  # constant elements are their own index
            disc = self.add(self.mul(b, b), self.neg(self.mul(four, self.mul(a, c))))
            if disc == 0:
                return 1
            return 2 if self.log[disc] % 2 == 0 else 0
        return self.distinct_roots(g)


def count_chart(Q, p, tmask, exp, log, zech, gen_terms, nprefix, use_gcd, lo, hi):
    """Count points of one affine chart with outer coordinate in [lo, hi).

    gen_terms: per generator, a flat int array of records
    [coeff_idx, last_deg, e_1..e_nprefix]; a point counts when every
    generator vanishes.  Pass lo=0, hi=1 when nprefix == 0.
    """
    ops = _Ops(Q, p, tmask, exp, log, zech)
    stride = 2 + nprefix
    gens = []
    maxdeg_var = [0] * nprefix
    for terms in gen_terms:
        recs = []
        gdeg = 0
        for t in range(0, len(terms), stride):
            coeff = terms[t]
            dlast = terms[t + 1]
            pexp = tuple(terms[t + 2 : t + stride])
            recs.append((coeff, dlast, pexp))
            gdeg = max(gdeg, dlast)
            for i, ex in enumerate(pexp):
                if ex > maxdeg_var[i]:
                    maxdeg_var[i] = ex
        gens.append((recs, gdeg))

    count = 0

    def run_slice(powcache):
        nonlocal count
        upolys = []
        for recs, gdeg in gens:
            ucoef = [0] * (gdeg + 1)
            for coeff, dlast, pexp in recs:
                m = coeff
                for t, ex in enumerate(pexp):
                    if ex and m:
                        m = ops.mul(m, powcache[t][ex])
                if m:
                    ucoef[dlast] = ops.add(ucoef[dlast], m)
            ops.ptrim(ucoef)
            if ucoef:  # identically-zero slice polynomials impose nothing
                upolys.append(ucoef)
        if not upolys:
            count += Q
            return
        if any(len(u) == 1 for u in upolys):
            return  # a nonzero constant condition: no solutions
        if not use_gcd:
            for v in range(Q):
                ok = True
                for ucoef in upolys:
                    acc = 0
                    for c in reversed(ucoef):
                        acc = ops.add(ops.mul(acc, v), c)
                    if acc:
                        ok = False
                        break
                if ok:
                    count += 1
            return
        g = upolys[0]
        for u in upolys[1:]:
            g = ops.pgcd(g, u)
            if len(g) == 1:
                return
        count += ops.root_count(g)

    if nprefix == 0:
        run_slice([])
        return count

    powcache = [[1]] * nprefix

    def fill_pow(t, v):
        md = maxdeg_var[t]
        row = [1] * (md + 1)
        if md >= 1:
            row[1] = v
            for k in range(2, md + 1):
                row[k] = ops.mul(row[k - 1], v)
        powcache[t] = row

    def rec(t):
        start, stop = (lo, hi) if t == 0 else (0, Q)
        if t == nprefix - 1:
            for v in range(start, stop):
                fill_pow(t, v)
                run_slice(powcache)
        else:
            for v in range(start, stop):
                fill_pow(t, v)
                rec(t + 1)

    rec(0)
    return count
