"""Vectorized evaluation of weighted bottleneck costs over many lines.

Only rectangle modules with few summands take these paths; the caller falls
back to exact per-line evaluation otherwise.  Dead bars are collapsed to
zero-length bars at their birth instead of being dropped, which leaves the
bottleneck value unchanged (a zero-length bar matches the diagonal for free,
and pairing any bar with a point on the diagonal never beats that bar's own
half-persistence), so every rectangle keeps a fixed slot across all lines.

Two precisions share one structure.  The float path screens large line sets
with a sound error margin.  The integer path is exact: on the key (dx, dy, k)
with scaling lam, every push and pull onto the line is a fraction over the
common per-line denominator lam*(dx+dy)*dx*dy, so bottleneck costs reduce to
integer max/min arithmetic on numerators, and the weighted value becomes a
canonical reduced fraction per line.  All intermediates are certified against
the int64 range before the path is taken.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .rational import INF

MAX_FINITE = 4
MAX_ESSENTIAL = 3
CHUNK = 32768


@lru_cache(maxsize=None)
def match_patterns(r1, r2):
    """All partial injections of range(r1) into range(r2), with leftovers."""
    out = []
    for k in range(min(r1, r2) + 1):
        for c1 in combinations(range(r1), k):
            for c2 in permutations(range(r2), k):
                s1 = tuple(i for i in range(r1) if i not in c1)
                s2 = tuple(j for j in range(r2) if j not in c2)
                out.append((tuple(zip(c1, c2)), s1, s2))
    return tuple(out)


def _split(module):
    """(essential lowers, finite rects) as float tuples; inf upper allowed on
    one coordinate of a finite rect."""
    ess, fin = [], []
    for r in module.rectangles:
        l1, l2 = float(r.lower[0]), float(r.lower[1])
        u1 = INF if r.upper[0] == INF else float(r.upper[0])
        u2 = INF if r.upper[1] == INF else float(r.upper[1])
        if u1 == INF and u2 == INF:
            ess.append((l1, l2))
        else:
            fin.append((l1, l2, u1, u2))
    return ess, fin


def vector_ready(M, N) -> bool:
    if M.rectangles is None or N.rectangles is None:
        return False
    em, fm = _split(M)
    en, fn = _split(N)
    return (len(fm) <= MAX_FINITE and len(fn) <= MAX_FINITE
            and len(em) <= MAX_ESSENTIAL and len(en) <= MAX_ESSENTIAL)


def coord_scale(M, N) -> float:
    out = 1.0
    for mod in (M, N):
        for r in mod.rectangles:
            for v in (*r.lower, *r.upper):
                if v != INF:
                    out = max(out, abs(float(v)))
    return out


def line_floats(dxs, dys, ks, lam):
    dx = np.asarray(dxs, dtype=np.float64)
    dy = np.asarray(dys, dtype=np.float64)
    k = np.asarray(ks, dtype=np.float64)
    mx = np.maximum(dx, dy)
    m1 = dx / mx
    m2 = dy / mx
    b1 = k / (float(lam) * (dx + dy))
    return m1, m2, b1, -b1


def eval_lines(M, N, m1, m2, b1, b2):
    """Weighted bottleneck costs for rectangle modules over float line arrays.

    Lines are in standard normalization: max(m1, m2) = 1, b2 = -b1.
    Requires equal essential counts on the two sides.
    """
    em, fm = _split(M)
    en, fn = _split(N)
    if len(em) != len(en):
        raise ValueError("essential counts differ")
    out = np.empty(len(m1), dtype=np.float64)
    for s in range(0, len(m1), CHUNK):
        sl = slice(s, s + CHUNK)
        out[sl] = _eval_chunk(em, fm, en, fn,
                              m1[sl], m2[sl], b1[sl], b2[sl])
    return out


def _eval_chunk(em, fm, en, fn, m1, m2, b1, b2):
    def push(l1, l2):
        return np.maximum((l1 - b1) / m1, (l2 - b2) / m2)

    def bars(fin):
        births, deaths = [], []
        for l1, l2, u1, u2 in fin:
            b = push(l1, l2)
            d = np.minimum((u1 - b1) / m1, (u2 - b2) / m2)
            births.append(b)
            deaths.append(np.maximum(b, d))
        return births, deaths

    bm, dm = bars(fm)
    bn, dn = bars(fn)
    hm = [(d - b) / 2 for b, d in zip(bm, dm)]
    hn = [(d - b) / 2 for b, d in zip(bn, dn)]
    pc = [[np.maximum(np.abs(bm[i] - bn[j]), np.abs(dm[i] - dn[j]))
           for j in range(len(fn))] for i in range(len(fm))]

    fin_cost = None
    for pairs, un1, un2 in match_patterns(len(fm), len(fn)):
        parts = [pc[i][j] for i, j in pairs]
        parts += [hm[i] for i in un1]
        parts += [hn[j] for j in un2]
        cost = np.maximum.reduce(parts) if parts else np.zeros_like(m1)
        fin_cost = cost if fin_cost is None else np.minimum(fin_cost, cost)

    if em:
        ebm = [push(l1, l2) for l1, l2 in em]
        ebn = [push(l1, l2) for l1, l2 in en]
        ess_cost = None
        for perm in permutations(range(len(em))):
            cost = np.maximum.reduce(
                [np.abs(ebm[i] - ebn[perm[i]]) for i in range(len(em))])
            ess_cost = cost if ess_cost is None else \
                np.minimum(ess_cost, cost)
        total = np.maximum(fin_cost, ess_cost)
    else:
        total = fin_cost
    return np.minimum(m1, m2) * total


def eval_keys(M, N, dxs, dys, ks, lam):
    m1, m2, b1, b2 = line_floats(dxs, dys, ks, lam)
    return eval_lines(M, N, m1, m2, b1, b2)


def _split_int(module, lam):
    """(essential lowers, finite rects) as exact lam-scaled integers; an
    infinite coordinate of a finite rect becomes None."""
    ess, fin = [], []
    for r in module.rectangles:
        l1, l2 = int(r.lower[0] * lam), int(r.lower[1] * lam)
        u1 = None if r.upper[0] == INF else int(r.upper[0] * lam)
        u2 = None if r.upper[1] == INF else int(r.upper[1] * lam)
        if u1 is None and u2 is None:
            ess.append((l1, l2))
        else:
            fin.append((l1, l2, u1, u2))
    return ess, fin


def exact_reduced_values(M, N, dxv, dyv, kv, lam):
    """Exact weighted costs over int64 key arrays as reduced fractions.

    Returns (p, q) int64 arrays with value = p/q in lowest terms, or None
    when the certified intermediate bounds do not fit int64.  Requires
    vector_ready modules with equal essential counts.
    """
    em, fm = _split_int(M, lam)
    en, fn = _split_int(N, lam)
    if len(em) != len(en):
        raise ValueError("essential counts differ")
    coords = [v for rs in (em, fm, en, fn) for r in rs for v in r
              if v is not None]
    amax = max((abs(v) for v in coords), default=0)
    dxm = int(dxv.max()) if dxv.size else 1
    dym = int(dyv.max()) if dyv.size else 1
    kb = int(np.abs(kv).max()) if kv.size else 0
    s = dxm + dym
    push_bound = (s * amax + kb) * max(dxm, dym)
    num_bound = max(dxm, dym) * 4 * push_bound
    den_bound = 2 * lam * s * dxm * dym
    if max(num_bound, den_bound) >= 1 << 62:
        return None
    ps = np.empty(len(dxv), dtype=np.int64)
    qs = np.empty(len(dxv), dtype=np.int64)
    for t in range(0, len(dxv), CHUNK):
        sl = slice(t, t + CHUNK)
        ps[sl], qs[sl] = _exact_chunk(em, fm, en, fn, lam,
                                      dxv[sl], dyv[sl], kv[sl])
    return ps, qs


def _exact_chunk(em, fm, en, fn, lam, dxv, dyv, kv):
    s = dxv + dyv

    def push(l1, l2):
        return np.maximum((s * l1 - kv) * dyv, (s * l2 + kv) * dxv)

    def bars(fin):
        births, deaths = [], []
        for l1, l2, u1, u2 in fin:
            b = push(l1, l2)
            if u1 is None:
                d = (s * u2 + kv) * dxv
            elif u2 is None:
                d = (s * u1 - kv) * dyv
            else:
                d = np.minimum((s * u1 - kv) * dyv, (s * u2 + kv) * dxv)
            births.append(b)
            deaths.append(np.maximum(b, d))
        return births, deaths

    bm, dm = bars(fm)
    bn, dn = bars(fn)
    # numerators over the common denominator 2*lam*(dx+dy)*dx*dy
    hm = [d - b for b, d in zip(bm, dm)]
    hn = [d - b for b, d in zip(bn, dn)]
    pc = [[2 * np.maximum(np.abs(bm[i] - bn[j]), np.abs(dm[i] - dn[j]))
           for j in range(len(fn))] for i in range(len(fm))]

    fin_cost = None
    for pairs, un1, un2 in match_patterns(len(fm), len(fn)):
        parts = [pc[i][j] for i, j in pairs]
        parts += [hm[i] for i in un1]
        parts += [hn[j] for j in un2]
        cost = np.maximum.reduce(parts) if parts \
            else np.zeros_like(dxv)
        fin_cost = cost if fin_cost is None else np.minimum(fin_cost, cost)

    if em:
        ebm = np.sort(np.stack([push(l1, l2) for l1, l2 in em]), axis=0)
        ebn = np.sort(np.stack([push(l1, l2) for l1, l2 in en]), axis=0)
        ess_cost = 2 * np.abs(ebm - ebn).max(axis=0)
        total = np.maximum(fin_cost, ess_cost)
    else:
        total = fin_cost

    p = np.minimum(dxv, dyv) * total
    q = 2 * lam * s * dxv * dyv
    g = np.gcd(p, q)
    return p // g, q // g
