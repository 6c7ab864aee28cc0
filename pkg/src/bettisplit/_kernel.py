"""Compiled inner loops for the Koszul-homology oracle.

The kernel visits every squarefree degree sigma of the lcm lattice, builds
the upper Koszul complex from the generators dividing x^sigma, strips
dominated vertices (a strong collapse, which preserves homotopy type and so
is independent of the field) and then ranks the boundary maps of whatever
core is left by dense elimination modulo 2 and modulo 3.

Rational ranks come from the two finite-field answers.  For every degree r,
dim H_r(K; Q) <= dim H_r(K; F_p) by universal coefficients, and the Euler
characteristic does not depend on the field.  So when the mod-p homology is
concentrated in a single degree (or vanishes) the rational homology equals
it.  Cores where neither prime gives a concentrated answer are flagged and
recomputed exactly in Python by the caller.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def lattice_members(gens, nvars):
    """Boolean table over all 2^nvars supports: is sigma a union of generators?"""
    size = 1 << nvars
    union = np.zeros(size, dtype=np.uint32)
    isgen = np.zeros(size, dtype=np.bool_)
    for g in gens:
        isgen[g] = True
    for s in range(1, size):
        u = np.uint32(s) if isgen[s] else np.uint32(0)
        t = s
        while t:
            low = t & -t
            u |= union[s ^ low]
            t ^= low
        union[s] = u
    out = np.zeros(size, dtype=np.bool_)
    for s in range(1, size):
        out[s] = union[s] == s
    if isgen[0]:
        out[0] = True
    return out


@njit(cache=True)
def _rank_mod(M, p):
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if M[i, c] % p != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = tmp
        a = M[r, c] % p
        inv = 1
        for _ in range(p - 2):
            inv = inv * a % p
        for j in range(c, cols):
            M[r, j] = M[r, j] * inv % p
        for i in range(r + 1, rows):
            f = M[i, c] % p
            if f:
                for j in range(c, cols):
                    M[i, j] = (M[i, j] - f * M[r, j]) % p
        r += 1
    return r


@njit(cache=True)
def _core_homology(facets, nf, out2, out3):
    """Reduced homology of the complex generated by facets[:nf] mod 2 and mod 3.

    out[k] receives dim H~_{k-1}; the arrays must have length >= top + 1.
    """
    top = 0
    total = 0
    for k in range(nf):
        c = _popcount(facets[k])
        if c > top:
            top = c
        total += 1 << c
    keys = np.empty(total, dtype=np.int64)
    pos = 0
    for k in range(nf):
        f = facets[k]
        sub = f
        while True:
            keys[pos] = (np.int64(_popcount(sub)) << 40) | sub
            pos += 1
            if sub == 0:
                break
            sub = (sub - 1) & f
    keys = np.unique(keys)
    start = np.zeros(top + 2, dtype=np.int64)
    for key in keys:
        start[(key >> 40) + 1] += 1
    for k in range(1, top + 2):
        start[k] += start[k - 1]
    mask40 = (np.int64(1) << 40) - 1
    rank2 = np.zeros(top + 2, dtype=np.int64)
    rank3 = np.zeros(top + 2, dtype=np.int64)
    for k in range(1, top + 1):
        lo, hi = start[k], start[k + 1]
        plo, phi = start[k - 1], start[k]
        M = np.zeros((hi - lo, phi - plo), dtype=np.int64)
        lower = keys[plo:phi]
        for r in range(lo, hi):
            f = keys[r] & mask40
            sign = 1
            t = f
            while t:
                low = t & -t
                target = (np.int64(k - 1) << 40) | (f ^ low)
                col = np.searchsorted(lower, target)
                M[r - lo, col] = sign
                sign = -sign
                t ^= low
        rank2[k] = _rank_mod(M.copy(), 2)
        rank3[k] = _rank_mod(M, 3)
    for k in range(top + 1):
        cnt = start[k + 1] - start[k]
        out2[k] = cnt - rank2[k] - rank2[k + 1]
        out3[k] = cnt - rank3[k] - rank3[k + 1]


@njit(cache=True)
def _strong_core(fa, F):
    """Collapse dominated vertices in place; returns the new facet count.

    fa[:F] holds the generating faces.  A vertex v is dominated when the
    intersection of the faces containing v is bigger than {v}.
    """
    inter = np.empty(64, dtype=np.int64)
    keep = np.empty(F, dtype=np.bool_)
    changed = np.empty(F, dtype=np.bool_)
    while F > 1:
        allv = np.int64(0)
        for k in range(F):
            allv |= fa[k]
        t = allv
        while t:
            low = t & -t
            inter[_popcount(low - 1)] = -1
            t ^= low
        for k in range(F):
            f = fa[k]
            t = f
            while t:
                low = t & -t
                inter[_popcount(low - 1)] &= f
                t ^= low
        hit = np.int64(0)
        t = allv
        while t:
            low = t & -t
            if inter[_popcount(low - 1)] & ~low:
                hit = low
                break
            t ^= low
        if hit == 0:
            break
        for k in range(F):
            keep[k] = True
            changed[k] = (fa[k] & hit) != 0
            fa[k] &= ~hit
        # only faces that contained the removed vertex can stop being maximal
        for k in range(F):
            if not changed[k]:
                continue
            f = fa[k]
            for m in range(F):
                if m != k and keep[m] and (f & fa[m]) == f and (f != fa[m] or m < k or not changed[m]):
                    keep[k] = False
                    break
        w = 0
        for k in range(F):
            if keep[k]:
                fa[w] = fa[k]
                w += 1
        F = w
    return F


@njit(cache=True)
def _face_count(fa, F):
    total = 0
    for k in range(F):
        total += 1 << _popcount(fa[k])
    return total


@njit(cache=True)
def _maximal_in_place(fa, F):
    w = 0
    for k in range(F):
        f = fa[k]
        drop = False
        for m in range(F):
            if m != k and (f & fa[m]) == f and (f != fa[m] or m < k):
                drop = True
                break
        if not drop:
            fa[w] = f
            w += 1
    return w


@njit(cache=True)
def _reduced_homology(fa, F, h2, h3):
    """Homology of the (already collapsed) complex fa[:F] into h2/h3, where
    index k holds H~_{k-1}.  Returns the number of entries written."""
    if F == 1:
        if fa[0] == 0:
            h2[0] = 1
            h3[0] = 1
            return 1
        return 0
    top = 0
    for k in range(F):
        c = _popcount(fa[k])
        if c > top:
            top = c
    for k in range(top + 1):
        h2[k] = 0
        h3[k] = 0
    _core_homology(fa, F, h2, h3)
    return top + 1


@njit(cache=True)
def betti_over_sigmas(gens, dual, sigmas, maxlen):
    """Graded Betti tables over F2, F3 and Q for the given squarefree degrees.

    ``dual`` holds the generators of the Alexander dual ideal.  For each
    sigma both the upper Koszul complex K^sigma and the restriction of the
    Stanley-Reisner complex to sigma (its Alexander dual inside sigma, with
    facets sigma - T) are collapsed, and homology is computed on the smaller
    core: beta_{i,sigma} = H~_{i-1}(K^sigma) = H~_{|sigma|-i-2}(Delta_sigma).

    Returns (t2, t3, tq, pending) where t*[i, j] = beta_{i,j} and pending
    marks the sigmas whose rational homology needs an exact recomputation
    (their contribution is left out of tq).
    """
    t2 = np.zeros((maxlen + 1, maxlen + 1), dtype=np.int64)
    t3 = np.zeros((maxlen + 1, maxlen + 1), dtype=np.int64)
    tq = np.zeros((maxlen + 1, maxlen + 1), dtype=np.int64)
    pending = np.zeros(len(sigmas), dtype=np.bool_)
    fa = np.empty(len(gens), dtype=np.int64)
    fd = np.empty(max(len(dual), 1), dtype=np.int64)
    h2 = np.zeros(66, dtype=np.int64)
    h3 = np.zeros(66, dtype=np.int64)
    b2 = np.zeros(maxlen + 2, dtype=np.int64)
    b3 = np.zeros(maxlen + 2, dtype=np.int64)
    for idx in range(len(sigmas)):
        s = sigmas[idx]
        j = _popcount(s)
        F = 0
        common = s
        for g in gens:
            if g & s == g:
                fa[F] = s & ~g
                common &= fa[F]
                F += 1
        if F == 0 or common != 0:
            continue
        if F > 1:
            F = _strong_core(fa, F)
            if F == 1:
                continue
        use_dual = False
        D = 0
        if F > 1 and len(dual) > 0:
            for t in dual:
                fd[D] = s & ~t
                D += 1
            D = _maximal_in_place(fd, D)
            if D > 1:
                D = _strong_core(fd, D)
            if D == 1 and fd[0] != 0:
                continue
            use_dual = _face_count(fd, D) < _face_count(fa, F)
        for k in range(maxlen + 2):
            b2[k] = 0
            b3[k] = 0
        if use_dual:
            m = _reduced_homology(fd, D, h2, h3)
            # H~_{k-1}(Delta_sigma) gives beta_{|sigma| - k - 1, sigma}
            for k in range(m):
                i = j - k - 1
                if 0 <= i <= maxlen:
                    b2[i] = h2[k]
                    b3[i] = h3[k]
        else:
            m = _reduced_homology(fa, F, h2, h3)
            for k in range(m):
                b2[k] = h2[k]
                b3[k] = h3[k]
        nz2 = 0
        nz3 = 0
        for k in range(maxlen + 1):
            if b2[k]:
                nz2 += 1
            if b3[k]:
                nz3 += 1
            t2[k, j] += b2[k]
            t3[k, j] += b3[k]
        if nz2 <= 1:
            for k in range(maxlen + 1):
                tq[k, j] += b2[k]
        elif nz3 <= 1:
            for k in range(maxlen + 1):
                tq[k, j] += b3[k]
        else:
            pending[idx] = True
    return t2, t3, tq, pending
