"""Exact bottleneck distance between persistence diagrams.

Essential (infinite-death) bars can only be matched among themselves at
finite cost, and their optimal assignment is the in-order matching of sorted
birth values; finite bars are matched by binary search over the exact
candidate costs (pairwise l-infinity distances and half-persistences) with an
augmenting-path feasibility matcher.  The overall cost is the maximum of the
two parts, with the convention inf - inf = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .rational import INF, Q, ext_abs_diff


class TooLarge(ValueError):
    """Raised by the brute-force oracle when diagrams exceed its guard."""


@dataclass(frozen=True)
class MatchingWitness:
    """An optimal matching: index pairs (i in D1, j in D2), indices sent to
    the diagonal as (side, index) with side 1 or 2, the exact cost, and a
    realizer (s, t, delta) with cost = |s - t| / delta (None when there is
    nothing to realize)."""

    pairs: tuple
    unmatched_to_diagonal: tuple
    cost: object
    realizer: tuple | None


def _half(bar):
    return INF if bar.death == INF else (bar.death - bar.birth) / 2


def _pair_cost(a, b):
    return max(abs(a.birth - b.birth), ext_abs_diff(a.death, b.death))


def _feasible(c, pc, half1, half2):
    """Perfect matching in the augmented bipartite graph at threshold c.

    Left side: n1 real points of D1 then n2 diagonal proxies of D2; right
    side: n2 real points of D2 then n1 diagonal proxies of D1.  A real point
    may pair with a real point at l-infinity cost <= c or with its own proxy
    at half-persistence <= c; proxies pair with each other freely.  Returns
    the right-to-left matching array, or None.
    """
    n1, n2 = len(half1), len(half2)
    total = n1 + n2
    match_r = [-1] * total

    def neighbors(u):
        if u < n1:
            for j in range(n2):
                if pc[u][j] <= c:
                    yield j
            if half1[u] <= c:
                yield n2 + u
        else:
            j = u - n1
            if half2[j] <= c:
                yield j
            for i in range(n1):
                yield n2 + i

    def try_assign(u, seen):
        for v in neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] < 0 or try_assign(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in range(total):
        if not try_assign(u, set()):
            return None
    return match_r


def bottleneck(d1, d2):
    """Exact bottleneck distance with witness.

    Returns (cost, MatchingWitness).  If the diagrams have different numbers
    of essential bars the cost is +inf with a degenerate witness.
    """
    ess1 = [i for i, b in enumerate(d1) if b.death == INF]
    ess2 = [j for j, b in enumerate(d2) if b.death == INF]
    if len(ess1) != len(ess2):
        unmatched = tuple((1, i) for i in range(len(d1))) + \
            tuple((2, j) for j in range(len(d2)))
        return INF, MatchingWitness((), unmatched, INF, None)

    ess1.sort(key=lambda i: d1[i].birth)
    ess2.sort(key=lambda j: d2[j].birth)
    ess_pairs = list(zip(ess1, ess2))
    cost_e = Q(0)
    realizer_e = None
    for i, j in ess_pairs:
        c = abs(d1[i].birth - d2[j].birth)
        if realizer_e is None or c > cost_e:
            cost_e = c
            realizer_e = (d1[i].birth, d2[j].birth, 1)

    fin1 = [i for i, b in enumerate(d1) if b.death != INF]
    fin2 = [j for j, b in enumerate(d2) if b.death != INF]
    p1 = [d1[i] for i in fin1]
    p2 = [d2[j] for j in fin2]
    pc = [[_pair_cost(a, b) for b in p2] for a in p1]
    half1 = [_half(a) for a in p1]
    half2 = [_half(b) for b in p2]

    candidates = {Q(0)}
    candidates.update(half1)
    candidates.update(half2)
    for row in pc:
        candidates.update(row)
    cand = sorted(candidates)

    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cand[mid], pc, half1, half2) is not None:
            hi = mid
        else:
            lo = mid + 1
    cost_f = cand[lo]
    match_r = _feasible(cost_f, pc, half1, half2)

    n1, n2 = len(p1), len(p2)
    pairs_f = []
    diag = []
    for v in range(n2):
        u = match_r[v]
        if u < n1:
            pairs_f.append((u, v))
        else:
            diag.append((2, fin2[v]))
    # P1 point i went to the diagonal iff its proxy slot is held by i itself
    # (a left real); proxy-proxy pairings hold left indices >= n1.
    for v in range(n2, n2 + n1):
        if match_r[v] < n1:
            diag.append((1, fin1[v - n2]))

    realizer_f = None
    for u, v in pairs_f:
        if pc[u][v] == cost_f:
            a, b = p1[u], p2[v]
            if abs(a.birth - b.birth) == cost_f:
                realizer_f = (a.birth, b.birth, 1)
            else:
                realizer_f = (a.death, b.death, 1)
            break
    if realizer_f is None:
        for side, idx in diag:
            bar = d1[idx] if side == 1 else d2[idx]
            if _half(bar) == cost_f:
                realizer_f = (bar.birth, bar.death, 2)
                break

    cost = max(cost_e, cost_f)
    if cost_f >= cost_e and realizer_f is not None:
        realizer = realizer_f
    else:
        realizer = realizer_e

    pairs = tuple(sorted(ess_pairs + [(fin1[u], fin2[v]) for u, v in pairs_f]))
    witness = MatchingWitness(pairs, tuple(sorted(diag)), cost, realizer)
    return cost, witness


def bottleneck_bruteforce(d1, d2):
    """Exhaustive minimum over every partial multi-bijection; test oracle.

    Raises:
        TooLarge: if |D1| + |D2| > 8.
    """
    if len(d1) + len(d2) > 8:
        raise TooLarge("brute force limited to 8 bars total")
    n2 = len(d2)
    halves2 = [_half(b) for b in d2]
    best = INF

    def rec(i, used, cur):
        nonlocal best
        if cur >= best and best != INF:
            return
        if i == len(d1):
            tot = cur
            for j in range(n2):
                if j not in used:
                    tot = max(tot, halves2[j])
            best = min(best, tot)
            return
        a = d1[i]
        rec(i + 1, used, max(cur, _half(a)))
        for j in range(n2):
            if j not in used:
                rec(i + 1, used | {j}, max(cur, _pair_cost(a, d2[j])))

    rec(0, frozenset(), Q(0))
    return best
