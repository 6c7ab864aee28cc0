"""Deliberately naive reference implementations used only by the tests.

Nothing here shares code with the package: downsets come from filtering all
subsets, and Betti numbers come from the upper Koszul simplicial complex at
every squarefree multidegree (no lcm-lattice pruning, no collapses), with a
dense signed boundary matrix reduced by textbook Gaussian elimination.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def subsets(n):
    return range(1 << n)


def support(m):
    return [i for i in range(m.bit_length()) if m >> i & 1]


def brute_downsets(n, leq):
    """Downsets of a poset given by a predicate leq(a, b) on 0..n-1."""
    out = []
    for m in subsets(n):
        if all(not leq(a, b) or m >> a & 1 for b in support(m) for a in range(n)):
            out.append(m)
    return out


def _rank(rows, p):
    """Rank of a dense matrix over GF(p), or over Q when p == 0."""
    M = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        lead = M[rank][c]
        inv = 1 / lead if p == 0 else pow(lead, p - 2, p)
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] * inv
                M[r] = [(a - f * b) if p == 0 else (a - f * b) % p for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


PRIMES = {"F2": 2, "F3": 3, "Q": 0}


def reduced_homology(faces, field="F2"):
    """dim H~_r for r = -1 .. top, from an explicit list of faces (bitmasks)."""
    p = PRIMES[field]
    faces = set(faces)
    if not faces:
        return []
    by_dim = {}
    for f in faces:
        by_dim.setdefault(bin(f).count("1") - 1, []).append(f)
    top = max(by_dim)
    for k in by_dim:
        by_dim[k].sort()
    index = {k: {f: i for i, f in enumerate(v)} for k, v in by_dim.items()}

    def boundary_rank(k):
        # boundary from dimension k to k - 1
        if k not in by_dim or (k - 1) not in by_dim:
            return 0
        rows = []
        for f in by_dim[k]:
            row = [0] * len(by_dim[k - 1])
            verts = support(f)
            for pos, v in enumerate(verts):
                row[index[k - 1][f & ~(1 << v)]] = (-1) ** pos
            rows.append(row)
        return _rank(rows, p)

    ranks = {k: boundary_rank(k) for k in range(0, top + 1)}
    out = []
    for k in range(-1, top + 1):
        n_k = len(by_dim.get(k, []))
        out.append(n_k - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return out


def all_faces_of(facets):
    out = set()
    for f in facets:
        vs = support(f)
        for r in range(len(vs) + 1):
            for c in combinations(vs, r):
                m = 0
                for v in c:
                    m |= 1 << v
                out.add(m)
    return out


def brute_betti(gens, nvars, field="F2"):
    """{(i, j): beta_ij} for the squarefree ideal with generator supports gens."""
    table = {}
    for sigma in subsets(nvars):
        faces = [t for t in subsets(nvars) if t & sigma == t and any(g & (sigma & ~t) == g for g in gens)]
        if not faces:
            continue
        h = reduced_homology(faces, field)
        deg = bin(sigma).count("1")
        for r, b in enumerate(h):
            # index r is dimension r - 1, which carries beta_{r, sigma}
            if b:
                table[(r, deg)] = table.get((r, deg), 0) + b
    return table


def brute_totals(table):
    top = max((i for i, _ in table), default=-1)
    return [sum(v for (i, _), v in table.items() if i == k) for k in range(top + 1)]


def brute_transversals(edges, nvars):
    """Minimal vertex covers by filtering every subset."""
    covers = [m for m in subsets(nvars) if all(m & e for e in edges)]
    return sorted(m for m in covers if not any(c != m and c & m == c for c in covers))
