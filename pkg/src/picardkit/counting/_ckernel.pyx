# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled counting kernel; exact mirror of kernel_py (same contracts).

All field elements are int64 table indices.  See kernel_py for the table
conventions.  The chart loop runs without the GIL so count_points can spread
outer-coordinate ranges across threads.
"""

from cpython cimport array
import array

from libc.stdlib cimport free, malloc
from libc.string cimport memset

BACKEND = "cython"


def build_tables(p_in, e_in, modulus):
    """exp/log/Zech tables for F_{p^e}; identical output to kernel_py."""
    cdef long long p = p_in
    cdef long long e = e_in
    cdef long long q = 1
    cdef long long i
    for i in range(e):
        q *= p

    cdef array.array mod_arr = array.array("q", list(modulus))
    cdef long long* mod = mod_arr.data.as_longlongs

    cdef array.array exp_arr = array.array("q", bytes(8 * (q - 1)))
    cdef array.array log_arr = array.array("q", bytes(8 * q))
    cdef array.array zech_arr = array.array("q", bytes(8 * (q - 1)))
    cdef long long* exp = exp_arr.data.as_longlongs
    cdef long long* log = log_arr.data.as_longlongs
    cdef long long* zech = zech_arr.data.as_longlongs

    cdef long long* va = <long long*> malloc(8 * e)
    cdef long long* vb = <long long*> malloc(8 * e)
    cdef long long* vt = <long long*> malloc(8 * (2 * e))
    if va == NULL or vb == NULL or vt == NULL:
        raise MemoryError()

    # factor q - 1 (python ints fine here)
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

    cdef long long gen = 1
    cdef long long cand, k, r, ok
    try:
        if q > 2:
            for cand in range(2, q):
                ok = 1
                for f in factors:
                    if _idx_pow(cand, (q - 1) // f, p, e, mod, va, vb, vt) == 1:
                        ok = 0
                        break
                if ok:
                    gen = cand
                    break

        cur = 1
        for i in range(q):
            log[i] = -1
        for i in range(q - 1):
            exp[i] = cur
            log[cur] = i
            cur = _idx_mul(cur, gen, p, e, mod, va, vb, vt)

        pm1 = p - 1
        for k in range(q - 1):
            t = exp[k]
            if t % p < pm1:
                t1 = t + 1
            else:
                t1 = t - pm1
            zech[k] = log[t1] if t1 else -1
    finally:
        free(va)
        free(vb)
        free(vt)
    return exp_arr, log_arr, zech_arr


cdef long long _idx_mul(long long a, long long b, long long p, long long e,
                        long long* mod, long long* va, long long* vb,
                        long long* vt) noexcept nogil:
    cdef long long i, j, k, c, idx
    if e == 1:
        return (a * b) % p
    for i in range(e):
        va[i] = a % p
        a //= p
        vb[i] = b % p
        b //= p
    for i in range(2 * e):
        vt[i] = 0
    for i in range(e):
        if va[i]:
            for j in range(e):
                vt[i + j] = (vt[i + j] + va[i] * vb[j]) % p
    for k in range(2 * e - 2, e - 1, -1):
        c = vt[k]
        if c:
            for i in range(e + 1):
                vt[k - e + i] = (vt[k - e + i] - c * mod[i]) % p
                if vt[k - e + i] < 0:
                    vt[k - e + i] += p
            vt[k] = 0
    idx = 0
    for i in range(e - 1, -1, -1):
        idx = idx * p + vt[i]
    return idx


cdef long long _idx_pow(long long a, long long k, long long p, long long e,
                        long long* mod, long long* va, long long* vb,
                        long long* vt) noexcept nogil:
    cdef long long r = 1
    while k:
        if k & 1:
            r = _idx_mul(r, a, p, e, mod, va, vb, vt)
        a = _idx_mul(a, a, p, e, mod, va, vb, vt)
        k >>= 1
    return r


# ---------------------------------------------------------------------------
# chart counting


cdef inline long long MUL(long long a, long long b, long long* exp,
                          long long* log, long long Qm1) noexcept nogil:
    cdef long long s
    if a == 0 or b == 0:
        return 0
    s = log[a] + log[b]
    if s >= Qm1:
        s -= Qm1
    return exp[s]


cdef inline long long ADD(long long a, long long b, long long* exp,
                          long long* log, long long* zech,
                          long long Qm1) noexcept nogil:
    cdef long long dd, z, s
    if a == 0:
        return b
    if b == 0:
        return a
    dd = log[b] - log[a]
    if dd < 0:
        dd += Qm1
    z = zech[dd]
    if z < 0:
        return 0
    s = log[a] + z
    if s >= Qm1:
        s -= Qm1
    return exp[s]


cdef struct FOps:
    long long* exp
    long long* log
    long long* zech
    long long Q
    long long Qm1
    long long negone
    long long p
    long long tmask


cdef inline long long NEG(long long a, FOps* F) noexcept nogil:
    return MUL(a, F.negone, F.exp, F.log, F.Qm1)


cdef inline long long INV(long long a, FOps* F) noexcept nogil:
    cdef long long s = F.Qm1 - F.log[a]
    if s >= F.Qm1:
        s -= F.Qm1
    return F.exp[s]


cdef long long _ptrim(long long* a, long long n) noexcept nogil:
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return n


cdef void _pmonic(long long* a, long long n, FOps* F) noexcept nogil:
    cdef long long s, i
    if n == 0 or a[n - 1] == 1:
        return
    s = INV(a[n - 1], F)
    for i in range(n):
        a[i] = MUL(a[i], s, F.exp, F.log, F.Qm1)


cdef long long _pmod(long long* a, long long na, long long* m, long long nm,
                     FOps* F) noexcept nogil:
    # a mod monic m, in place; returns new length of a
    cdef long long dm = nm - 1
    cdef long long c, nc, off, i
    while na - 1 >= dm and na > 0:
        c = a[na - 1]
        if c:
            nc = NEG(c, F)
            off = na - 1 - dm
            for i in range(dm):
                a[off + i] = ADD(a[off + i], MUL(nc, m[i], F.exp, F.log, F.Qm1),
                                 F.exp, F.log, F.zech, F.Qm1)
        na -= 1
        na = _ptrim(a, na)
    return na


cdef long long _pgcd(long long* a, long long na, long long* b, long long nb,
                     FOps* F) noexcept nogil:
    # gcd into a; returns length; clobbers both inputs
    cdef long long i, t
    cdef long long* pa = a
    cdef long long* pb = b
    while nb > 0:
        _pmonic(pb, nb, F)
        na = _pmod(pa, na, pb, nb, F)
        # swap
        t = na; na = nb; nb = t
        pa, pb = pb, pa
    if pa != a:
        for i in range(na):
            a[i] = pa[i]
    return na


cdef long long _pmulmod(long long* a, long long na, long long* b, long long nb,
                        long long* m, long long nm, long long* out,
                        FOps* F) noexcept nogil:
    # out = a*b mod monic m; returns length
    cdef long long i, j, n
    if na == 0 or nb == 0:
        return 0
    n = na + nb - 1
    for i in range(n):
        out[i] = 0
    for i in range(na):
        if a[i]:
            for j in range(nb):
                if b[j]:
                    out[i + j] = ADD(out[i + j],
                                     MUL(a[i], b[j], F.exp, F.log, F.Qm1),
                                     F.exp, F.log, F.zech, F.Qm1)
    return _pmod(out, n, m, nm, F)


cdef long long _root_count(long long* g, long long ng, long long* s1,
                           long long* s2, long long* s3, FOps* F) noexcept nogil:
    # closed forms for degrees 1 and 2, x^Q ladder beyond
    cdef long long a, b, c, v, disc, four, k
    if ng == 2:
        return 1
    if ng == 3:
        c = g[0]; b = g[1]; a = g[2]
        if F.p == 2:
            if b == 0:
                return 1
            v = MUL(MUL(a, c, F.exp, F.log, F.Qm1),
                    INV(MUL(b, b, F.exp, F.log, F.Qm1), F),
                    F.exp, F.log, F.Qm1)
            if v == 0:
                return 2
            k = v & F.tmask
            k ^= k >> 32; k ^= k >> 16; k ^= k >> 8
            k ^= k >> 4; k ^= k >> 2; k ^= k >> 1
            return 0 if (k & 1) else 2
        four = 4 % F.p
        disc = ADD(MUL(b, b, F.exp, F.log, F.Qm1),
                   NEG(MUL(four, MUL(a, c, F.exp, F.log, F.Qm1),
                           F.exp, F.log, F.Qm1), F),
                   F.exp, F.log, F.zech, F.Qm1)
        if disc == 0:
            return 1
        return 2 if (F.log[disc] % 2 == 0) else 0
    return _distinct_roots(g, ng, s1, s2, s3, F)


cdef long long _distinct_roots(long long* g, long long ng, long long* s1,
                               long long* s2, long long* s3, FOps* F) noexcept nogil:
    # number of distinct roots of g in F_Q; g clobbered, buffers >= 2*ng
    cdef long long i, k, nbase, nres, nt
    _pmonic(g, ng, F)
    # base = x mod g
    s1[0] = 0; s1[1] = 1
    nbase = _pmod(s1, 2, g, ng, F)
    # result = 1
    s2[0] = 1
    nres = 1
    k = F.Q
    while k:
        if k & 1:
            nt = _pmulmod(s2, nres, s1, nbase, g, ng, s3, F)
            for i in range(nt):
                s2[i] = s3[i]
            nres = nt
        nt = _pmulmod(s1, nbase, s1, nbase, g, ng, s3, F)
        for i in range(nt):
            s1[i] = s3[i]
        nbase = nt
        k >>= 1
    # r = result - x
    nt = nres
    if nt < 2:
        nt = 2
    for i in range(nres, nt):
        s2[i] = 0
    s2[1] = ADD(s2[1], NEG(1, F), F.exp, F.log, F.zech, F.Qm1)
    nt = _ptrim(s2, nt)
    if nt == 0:
        return ng - 1
    return _pgcd(g, ng, s2, nt, F) - 1


def count_chart(Q_in, p_in, tmask_in, exp_arr, log_arr, zech_arr, gen_terms,
                nprefix_in, use_gcd_in, lo_in, hi_in):
    """Count points of one affine chart; same contract as kernel_py."""
    cdef long long Q = Q_in
    cdef long long nprefix = nprefix_in
    cdef long long use_gcd = use_gcd_in
    cdef long long lo = lo_in
    cdef long long hi = hi_in

    cdef array.array exp_a = exp_arr
    cdef array.array log_a = log_arr
    cdef array.array zech_a = zech_arr

    cdef FOps F
    F.exp = exp_a.data.as_longlongs
    F.log = log_a.data.as_longlongs
    F.zech = zech_a.data.as_longlongs
    F.Q = Q
    F.Qm1 = Q - 1
    F.p = p_in
    F.tmask = tmask_in
    if F.Qm1 % 2:
        F.negone = 1
    else:
        F.negone = F.exp[F.Qm1 // 2]

    cdef long long ngens = len(gen_terms)
    cdef long long stride = 2 + nprefix

    # flatten generator terms
    cdef long long total_recs = 0
    for terms in gen_terms:
        total_recs += len(terms) // stride
    cdef array.array flat_a = array.array("q", bytes(8 * max(total_recs * stride, 1)))
    cdef array.array goff_a = array.array("q", bytes(8 * (ngens + 1)))
    cdef long long* flat = flat_a.data.as_longlongs
    cdef long long* goff = goff_a.data.as_longlongs
    cdef long long pos = 0
    cdef long long gi = 0
    for terms in gen_terms:
        goff[gi] = pos
        for v in terms:
            flat[pos] = v
            pos += 1
        gi += 1
    goff[ngens] = pos

    # degrees
    cdef long long maxdeg = 0
    cdef long long i, t
    cdef array.array gdeg_a = array.array("q", bytes(8 * max(ngens, 1)))
    cdef long long* gdeg = gdeg_a.data.as_longlongs
    for gi in range(ngens):
        gdeg[gi] = 0
        for t in range(goff[gi], goff[gi + 1], stride):
            if flat[t + 1] > gdeg[gi]:
                gdeg[gi] = flat[t + 1]
        if gdeg[gi] > maxdeg:
            maxdeg = gdeg[gi]

    cdef array.array pmax_a = array.array("q", bytes(8 * max(nprefix, 1)))
    cdef long long* pmax = pmax_a.data.as_longlongs
    for i in range(nprefix):
        pmax[i] = 0
    for gi in range(ngens):
        for t in range(goff[gi], goff[gi + 1], stride):
            for i in range(nprefix):
                if flat[t + 2 + i] > pmax[i]:
                    pmax[i] = flat[t + 2 + i]

    cdef long long count = 0
    with nogil:
        count = _chart_loop(&F, flat, goff, gdeg, pmax, ngens, stride, nprefix,
                            maxdeg, use_gcd, lo, hi)
    if count < 0:
        raise MemoryError()
    return count


cdef long long _chart_loop(FOps* F, long long* flat, long long* goff,
                           long long* gdeg, long long* pmax, long long ngens,
                           long long stride, long long nprefix,
                           long long maxdeg, long long use_gcd, long long lo,
                           long long hi) noexcept nogil:
    cdef long long Q = F.Q
    cdef long long D = maxdeg + 1
    cdef long long bufsz = 2 * D + 2
    cdef long long powstride = 0
    cdef long long i
    for i in range(nprefix):
        if pmax[i] + 1 > powstride:
            powstride = pmax[i] + 1
    if powstride == 0:
        powstride = 1

    cdef long long* powcache = <long long*> malloc(8 * max(nprefix, 1) * powstride)
    cdef long long* values = <long long*> malloc(8 * max(nprefix, 1))
    cdef long long* ucoef = <long long*> malloc(8 * ngens * D)
    cdef long long* udeg = <long long*> malloc(8 * max(ngens, 1))
    cdef long long* g = <long long*> malloc(8 * bufsz)
    cdef long long* s1 = <long long*> malloc(8 * bufsz)
    cdef long long* s2 = <long long*> malloc(8 * bufsz)
    cdef long long* s3 = <long long*> malloc(8 * bufsz)
    if (powcache == NULL or values == NULL or ucoef == NULL or udeg == NULL
            or g == NULL or s1 == NULL or s2 == NULL or s3 == NULL):
        if powcache != NULL: free(powcache)
        if values != NULL: free(values)
        if ucoef != NULL: free(ucoef)
        if udeg != NULL: free(udeg)
        if g != NULL: free(g)
        if s1 != NULL: free(s1)
        if s2 != NULL: free(s2)
        if s3 != NULL: free(s3)
        return -1

    cdef long long count = 0
    cdef long long level, limit, v

    if nprefix == 0:
        count += _run_slice(F, flat, goff, gdeg, ngens, stride, nprefix, D,
                            powcache, powstride, ucoef, udeg, use_gcd,
                            g, s1, s2, s3)
    else:
        # odometer over prefix coordinates, outermost restricted to [lo, hi)
        for i in range(nprefix):
            values[i] = 0
        values[0] = lo
        if lo < hi:
            for i in range(nprefix):
                _fill_pow(F, powcache, powstride, i, values[i], pmax[i])
            while True:
                count += _run_slice(F, flat, goff, gdeg, ngens, stride,
                                    nprefix, D, powcache, powstride, ucoef,
                                    udeg, use_gcd, g, s1, s2, s3)
                level = nprefix - 1
                while level >= 0:
                    values[level] += 1
                    limit = hi if level == 0 else Q
                    if values[level] < limit:
                        _fill_pow(F, powcache, powstride, level, values[level],
                                  pmax[level])
                        break
                    values[level] = 0
                    _fill_pow(F, powcache, powstride, level, 0, pmax[level])
                    level -= 1
                if level < 0:
                    break

    free(powcache); free(values); free(ucoef); free(udeg)
    free(g); free(s1); free(s2); free(s3)
    return count


cdef void _fill_pow(FOps* F, long long* powcache, long long powstride,
                    long long t, long long v, long long md) noexcept nogil:
    cdef long long* row = powcache + t * powstride
    cdef long long k
    row[0] = 1
    if md >= 1:
        row[1] = v
        for k in range(2, md + 1):
            row[k] = MUL(row[k - 1], v, F.exp, F.log, F.Qm1)


cdef long long _run_slice(FOps* F, long long* flat, long long* goff,
                          long long* gdeg, long long ngens, long long stride,
                          long long nprefix, long long D, long long* powcache,
                          long long powstride, long long* ucoef,
                          long long* udeg, long long use_gcd, long long* g,
                          long long* s1, long long* s2, long long* s3) noexcept nogil:
    cdef long long Q = F.Q
    cdef long long gi, t, i, m, e, nu, acc, v, ok
    cdef long long cnt = 0
    cdef long long ng = 0
    cdef long long nactive = 0
    # build univariate slice polynomials
    for gi in range(ngens):
        for i in range(gdeg[gi] + 1):
            ucoef[nactive * D + i] = 0
        t = goff[gi]
        while t < goff[gi + 1]:
            m = flat[t]
            for i in range(nprefix):
                e = flat[t + 2 + i]
                if e and m:
                    m = MUL(m, powcache[i * powstride + e], F.exp, F.log, F.Qm1)
            if m:
                ucoef[nactive * D + flat[t + 1]] = ADD(
                    ucoef[nactive * D + flat[t + 1]], m,
                    F.exp, F.log, F.zech, F.Qm1)
            t += stride
        nu = _ptrim(ucoef + nactive * D, gdeg[gi] + 1)
        if nu == 0:
            continue  # identically zero: imposes nothing
        if nu == 1:
            return 0  # nonzero constant: no solutions
        udeg[nactive] = nu
        nactive += 1
    if nactive == 0:
        return Q
    if not use_gcd:
        for v in range(Q):
            ok = 1
            for gi in range(nactive):
                acc = 0
                i = udeg[gi] - 1
                while i >= 0:
                    acc = ADD(MUL(acc, v, F.exp, F.log, F.Qm1),
                              ucoef[gi * D + i], F.exp, F.log, F.zech, F.Qm1)
                    i -= 1
                if acc:
                    ok = 0
                    break
            if ok:
                cnt += 1
        return cnt
    # gcd-slice
    ng = udeg[0]
    for i in range(ng):
        g[i] = ucoef[i]
    for gi in range(1, nactive):
        for i in range(udeg[gi]):
            s1[i] = ucoef[gi * D + i]
        ng = _pgcd(g, ng, s1, udeg[gi], F)
        if ng == 1:
            return 0
    return _root_count(g, ng, s1, s2, s3, F)
