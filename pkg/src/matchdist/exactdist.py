"""Exact matching distance via reduction to finitely many candidate lines.

The distance is a supremum over positive-slope lines of the weighted
bottleneck distance between restricted barcodes.  It is attained on a line
through two members of a finite point set: the lub-closures of the critical
values together with the switch points, the locations where the combinatorial
type of a restriction can change.  Switch points are enumerated by difference
classes: each formula in the catalogue depends on its generating quadruple
only through one or two coordinate differences or corner keys, so classes of
ordered point pairs stand in for quadruples, with a realizability filter
guaranteeing a quadruple with at least three distinct points behind every
emitted point.

Candidate lines are identified by primitive integer keys (dx, dy, k) over a
common-denominator scaling of the point set; a key passes scaled point (X, Y)
when dy*X - dx*Y = k.  The pair enumeration is quadratic in the point set and
can reach tens of millions of pairs, so keys are produced in bounded blocks
and consumed by streaming folds: a running float maximum with a sound margin
keeps only the lines that can still win, and distinct keys are counted through
an injective int64 packing.  Only the surviving lines are evaluated exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from . import _fastpath
from .bottleneck import MatchingWitness, bottleneck
from .fibered import InvalidPresentation, restrict_module
from .geometry import Line, ProjPoint, normalize_line, weight
from .modules import TwoParamModule, critical_values, lub_closure, swap_axes
from .rational import INF, Q, rat


class BothTrivial(ValueError):
    """Raised when an operation needs at least one nontrivial module."""


@dataclass(frozen=True)
class SwitchPointSet:
    """Finite proper points plus positive directions on the line at infinity."""

    proper: frozenset
    at_infinity: frozenset


@dataclass(frozen=True)
class CandidateLineSet:
    """Deduplicated normalized lines, sorted by (m1/m2, b1)."""

    lines: tuple


@dataclass(frozen=True)
class DistanceResult:
    value: object
    witness_line: Line | None
    witness_detail: MatchingWitness | None
    candidate_count: int


_DIAG = ProjPoint.of(0, 1, 1)
_RS = (Q(1, 2), Q(1), Q(2))


class _Cls:
    """Tracks which unordered point pairs realize a difference class."""

    __slots__ = ("pid", "multi")

    def __init__(self):
        self.pid = None
        self.multi = False

    def note(self, pid):
        if self.pid is None:
            self.pid = pid
        elif not self.multi and self.pid != pid:
            self.multi = True


def _note(d, key, pid):
    c = d.get(key)
    if c is None:
        d[key] = c = _Cls()
    c.note(pid)


def _ok(c1, c2):
    # some quadruple uses two different unordered pairs
    return c1.multi or c2.multi or c1.pid != c2.pid


def _pos_dir(a, b):
    """Canonical at-infinity direction [0:a:b] when both coordinates end up
    positive, else None."""
    if a == 0 or b == 0 or (a > 0) != (b > 0):
        return None
    return ProjPoint.of(0, a, b)


def switch_points(C) -> SwitchPointSet:
    """All switch points generated by the point set C.

    Classes of ordered pairs (p, q), p != q: dy holds second-coordinate
    differences p2-q2, dx first-coordinate differences p1-q1, and d2 the
    crossed corner keys (q1, p2).  Every catalogue formula is a combination
    of two class values scaled by a ratio r in {1/2, 1, 2}.
    """
    pts = {(rat(p[0]), rat(p[1])) for p in C}
    proper = set()
    infinite = {_DIAG}
    dy, dx, d2 = {}, {}, {}
    for p in pts:
        for q in pts:
            if p == q:
                continue
            pid = frozenset((p, q))
            _note(dy, p[1] - q[1], pid)
            _note(dx, p[0] - q[0], pid)
            _note(d2, (q[0], p[1]), pid)

    for a, ca in dy.items():
        if a == 0:
            continue
        for b, cb in dx.items():
            if b == 0 or not _ok(ca, cb):
                continue
            for r in _RS:
                d = _pos_dir(b, r * a)
                if d is not None:
                    infinite.add(d)

    for a, ca in dy.items():
        for (k1, k2), ck in d2.items():
            if _ok(ca, ck):
                for r in _RS:
                    proper.add((k1, k2 + r * a))
    for b, cb in dx.items():
        for (k1, k2), ck in d2.items():
            if _ok(cb, ck):
                for r in _RS:
                    proper.add((k1 + r * b, k2))

    items = list(d2.items())
    for l, cl in items:
        for rr, cr in items:
            if not _ok(cl, cr):
                continue
            proper.add((2 * l[0] - rr[0], 2 * l[1] - rr[1]))
            proper.add(((l[0] + rr[0]) / 2, (l[1] + rr[1]) / 2))
            proper.add(((2 * l[0] + rr[0]) / 3, (2 * l[1] + rr[1]) / 3))
            d = _pos_dir(l[0] - rr[0], l[1] - rr[1])
            if d is not None:
                infinite.add(d)
    return SwitchPointSet(frozenset(proper), frozenset(infinite))


def _switch_for(M, N, extra):
    sp = switch_points(set(critical_values(M)) | set(critical_values(N)))
    if extra is not None:
        proper = sp.proper | frozenset(
            (rat(p[0]), rat(p[1])) for p in extra.proper)
        infinite = sp.at_infinity | frozenset(extra.at_infinity)
        sp = SwitchPointSet(proper, infinite)
    return sp


def _point_set(M, N, sp):
    pts = set(lub_closure(critical_values(M))) \
        | set(lub_closure(critical_values(N))) | set(sp.proper)
    dirs = {d for d in sp.at_infinity
            if d.h0 == 0 and d.h1 > 0 and d.h2 > 0}
    return pts, dirs


_GUARD = 1 << 25
_BLOCK = 1 << 22


def _scaled(pts, dirs):
    """Common-denominator integer scaling: sorted points as (X, Y) int lists,
    primitive direction value pairs, and the scaling lam."""
    pts = sorted(pts)
    lam = 1
    for x, y in pts:
        lam = lcm(lam, int(x.denominator), int(y.denominator))
    X = [int(x * lam) for x, _ in pts]
    Y = [int(y * lam) for _, y in pts]
    dvals = sorted((int(d.h1), int(d.h2)) for d in dirs)
    return X, Y, dvals, lam


def _use_bigint(X, Y, dvals):
    big = max((abs(v) for v in X + Y), default=0)
    bigd = max((max(a, b) for a, b in dvals), default=0)
    return big > _GUARD or bigd > _GUARD


def _pack_spec(X, Y, dvals):
    """Constants (SDY, SK, KB) of the injective int64 key encoding
    (dx*SDY + dy)*SK + (k + KB), or None when the ranges do not fit.
    Expects sorted X."""
    ax = max(abs(X[0]), abs(X[-1]))
    ymin, ymax = min(Y), max(Y)
    ay = max(abs(ymin), abs(ymax))
    dxm = max(X[-1] - X[0], max((d[0] for d in dvals), default=0))
    dym = max(ymax - ymin, max((d[1] for d in dvals), default=0))
    kb = dym * ax + dxm * ay + 1
    top = (dxm * (dym + 1) + dym) * (2 * kb + 1) + 2 * kb
    if top >= 1 << 62:
        return None
    return dym + 1, 2 * kb + 1, kb


def _pack(spec, dxv, dyv, kv):
    sdy, sk, kb = spec
    return (dxv * sdy + dyv) * sk + (kv + kb)


def _unpack(spec, packed):
    sdy, sk, kb = spec
    kv = packed % sk - kb
    rest = packed // sk
    return rest // sdy, rest % sdy, kv


def _iter_blocks(X, Y, dvals):
    """Yield primitive (dx, dy, k) int64 key blocks: every positive-slope
    line through two distinct points once per unordered pair, then every
    (point, direction) line once.  Expects sorted points within the int64
    guard."""
    n = len(X)
    Xa = np.asarray(X, dtype=np.int64)
    Ya = np.asarray(Y, dtype=np.int64)
    col = np.arange(n, dtype=np.int64)
    if n >= 2:
        rows = max(1, _BLOCK // n)
        for a in range(0, n - 1, rows):
            b = min(a + rows, n - 1)
            left = np.arange(a, b, dtype=np.int64)
            dx = Xa[None, :] - Xa[a:b, None]
            dy = Ya[None, :] - Ya[a:b, None]
            # sorted points make dx >= 0 above the diagonal of the pair
            # matrix; what remains is dropping axis-parallel and
            # negative-slope pairs
            keep = (col[None, :] > left[:, None]) & (dx > 0) & (dy > 0)
            if not keep.any():
                continue
            dxv = dx[keep]
            dyv = dy[keep]
            ii = np.broadcast_to(left[:, None], keep.shape)[keep]
            g = np.gcd(dxv, dyv)
            dxv //= g
            dyv //= g
            yield dxv, dyv, dyv * Xa[ii] - dxv * Ya[ii]
    buf, size = [], 0
    for d1, d2 in dvals:
        buf.append((np.full(n, d1, np.int64), np.full(n, d2, np.int64),
                    d2 * Xa - d1 * Ya))
        size += n
        if size >= _BLOCK // 4:
            yield tuple(np.concatenate([p[t] for p in buf]) for t in range(3))
            buf, size = [], 0
    if buf:
        yield tuple(np.concatenate([p[t] for p in buf]) for t in range(3))


def _keys_py(X, Y, dvals):
    """Arbitrary-precision fallback for coordinates beyond the int64 guard;
    returns deduplicated sorted (dx, dy, k) tuples of python ints.  Expects
    sorted points."""
    from math import gcd
    out = set()
    n = len(X)
    for a in range(n):
        for b in range(a + 1, n):
            dx = X[b] - X[a]
            dy = Y[b] - Y[a]
            if dx <= 0 or dy <= 0:
                continue
            g = gcd(dx, dy)
            dx //= g
            dy //= g
            out.add((dx, dy, dy * X[a] - dx * Y[a]))
    for d1, d2 in dvals:
        for a in range(n):
            out.add((d1, d2, d2 * X[a] - d1 * Y[a]))
    return sorted(out)


class _KeyUnion:
    """Distinct packed keys accumulated across blocks; memory is bounded by
    the number of distinct candidate lines."""

    __slots__ = ("parts", "size")

    def __init__(self):
        self.parts = []
        self.size = 0

    def add(self, u):
        self.parts.append(u)
        self.size += u.size
        if self.size > 4 * _BLOCK:
            self.finish()

    def finish(self):
        if not self.parts:
            return np.empty(0, np.int64)
        if len(self.parts) > 1:
            merged = np.unique(np.concatenate(self.parts))
            self.parts = [merged]
            self.size = merged.size
        return self.parts[0]


class _LexMin:
    """Exact running minimum of the line order (dx/dy, k/(lam*(dx+dy)))."""

    __slots__ = ("lam", "key", "best")

    def __init__(self, lam):
        self.lam = lam
        self.key = None
        self.best = None

    def offer(self, dxv, dyv, kv):
        # float screen with slack, then exact refinement of the near-minimal
        r = dxv.astype(np.float64) / dyv.astype(np.float64)
        m = float(r.min())
        for t in np.nonzero(r <= m * (1 + 1e-9) + 1e-12)[0]:
            self.offer_one(int(dxv[t]), int(dyv[t]), int(kv[t]))

    def offer_one(self, dx, dy, k):
        ck = (Q(dx, dy), Q(k, self.lam * (dx + dy)))
        if self.best is None or ck < self.best:
            self.best, self.key = ck, (dx, dy, k)


class _Screen:
    """Running float maximum with a buffer of keys still within the margin.

    Pruning against the running maximum is sound: a dropped key lost to some
    line by more than the margin, so it cannot reach the final maximum
    within float error.
    """

    __slots__ = ("M", "N", "lam", "margin", "fmax", "keys", "vals", "size")

    def __init__(self, M, N, lam, margin):
        self.M, self.N, self.lam, self.margin = M, N, lam, margin
        self.fmax = -np.inf
        self.keys, self.vals, self.size = [], [], 0

    def offer(self, dxv, dyv, kv, packed):
        fv = _fastpath.eval_keys(self.M, self.N, dxv, dyv, kv, self.lam)
        fm = float(fv.max())
        if fm > self.fmax:
            self.fmax = fm
        mask = fv >= self.fmax - self.margin
        self.keys.append(packed[mask])
        self.vals.append(fv[mask])
        self.size += int(mask.sum())
        if self.size > _BLOCK:
            self._consolidate()

    def _consolidate(self):
        keys = np.concatenate(self.keys)
        vals = np.concatenate(self.vals)
        mask = vals >= self.fmax - self.margin
        self.keys, self.vals = [keys[mask]], [vals[mask]]
        self.size = int(mask.sum())

    def finish(self):
        """Deduplicated packed survivor keys."""
        self._consolidate()
        return np.unique(self.keys[0])


def _line_from_key(dx, dy, k, lam):
    dx, dy, k = int(dx), int(dy), int(k)
    mx = max(dx, dy)
    b1 = Q(k, lam * (dx + dy))
    return Line((Q(dx, mx), Q(dy, mx)), (b1, -b1))


def _lex_pair(dx, dy, k, lam):
    return (Q(int(dx), int(dy)), Q(int(k), lam * (int(dx) + int(dy))))


def _distinct_keys(X, Y, dvals):
    """All distinct candidate keys as python int triples."""
    if _use_bigint(X, Y, dvals):
        return _keys_py(X, Y, dvals)
    spec = _pack_spec(X, Y, dvals)
    if spec is None:
        rows = [np.stack(blk, axis=1) for blk in _iter_blocks(X, Y, dvals)]
        allrows = np.unique(np.concatenate(rows), axis=0)
        return [tuple(int(v) for v in row) for row in allrows]
    union = _KeyUnion()
    for dxv, dyv, kv in _iter_blocks(X, Y, dvals):
        union.add(np.unique(_pack(spec, dxv, dyv, kv)))
    dxv, dyv, kv = _unpack(spec, union.finish())
    return list(zip(dxv.tolist(), dyv.tolist(), kv.tolist()))


def candidate_lines(M: TwoParamModule, N: TwoParamModule,
                    extra_switch_points: SwitchPointSet | None = None
                    ) -> CandidateLineSet:
    """Every line through two distinct points of the candidate point set, plus
    every line through one such point with a positive switch direction.

    The set is materialized, which can be very large when the modules have
    many distinct coordinate differences; matching_distance never builds it.

    Raises:
        BothTrivial: if neither module has any critical values.
    """
    if M.is_trivial and N.is_trivial:
        raise BothTrivial("no critical values to aim lines at")
    sp = _switch_for(M, N, extra_switch_points)
    pts, dirs = _point_set(M, N, sp)
    X, Y, dvals, lam = _scaled(pts, dirs)
    keys = _distinct_keys(X, Y, dvals)
    keys.sort(key=lambda t: _lex_pair(*t, lam))
    return CandidateLineSet(tuple(_line_from_key(*t, lam) for t in keys))


def _gf2_rank(pres):
    idx = {name: i for i, (name, _) in enumerate(pres.generators)}
    owner = {}
    rank = 0
    for _, _, col in pres.relations:
        c = {idx[n] for n in col}
        while c:
            p = max(c)
            if p not in owner:
                owner[p] = c
                rank += 1
                break
            c = c ^ owner[p]
    return rank


def _essential_count(module: TwoParamModule) -> int:
    """Number of essential bars of any restriction; line-independent."""
    if module.rectangles is not None:
        return sum(1 for r in module.rectangles
                   if r.upper[0] == INF and r.upper[1] == INF)
    pres = module.presentation
    bad = pres.grade_violation()
    if bad is not None:
        raise InvalidPresentation(bad)
    return len(pres.generators) - _gf2_rank(pres)


def _struct_key(module):
    if module.rectangles is not None:
        return ("r", tuple(sorted((r.lower, r.upper)
                                  for r in module.rectangles)))
    return ("p", module.presentation)


def _diagram_cost(d1, d2):
    """Exact bottleneck cost, value only.

    Small diagrams take a direct minimum over matching patterns, sharing the
    pattern table with the float path; larger ones fall back to the full
    search in bottleneck().
    """
    fin1 = [b for b in d1 if b.death != INF]
    fin2 = [b for b in d2 if b.death != INF]
    if len(fin1) > _fastpath.MAX_FINITE or len(fin2) > _fastpath.MAX_FINITE:
        return bottleneck(d1, d2)[0]
    e1 = sorted(b.birth for b in d1 if b.death == INF)
    e2 = sorted(b.birth for b in d2 if b.death == INF)
    if len(e1) != len(e2):
        return INF
    base = Q(0)
    for a, b in zip(e1, e2):
        d = abs(a - b)
        if d > base:
            base = d
    half1 = [(b.death - b.birth) / 2 for b in fin1]
    half2 = [(b.death - b.birth) / 2 for b in fin2]
    pc = [[max(abs(x.birth - y.birth), abs(x.death - y.death))
           for y in fin2] for x in fin1]
    best = None
    for pairs, un1, un2 in _fastpath.match_patterns(len(fin1), len(fin2)):
        cur = base
        for i, j in pairs:
            if pc[i][j] > cur:
                cur = pc[i][j]
        for i in un1:
            if half1[i] > cur:
                cur = half1[i]
        for j in un2:
            if half2[j] > cur:
                cur = half2[j]
        if best is None or cur < best:
            best = cur
            if best == base:
                break
    return best


def _exact_cost(M, N, line):
    """Weighted cost on one line, value only."""
    c = _diagram_cost(restrict_module(M, line), restrict_module(N, line))
    if c == INF:
        return INF
    return weight(line) * c


def _exact_value(M, N, line):
    """Weighted cost with the full matching witness."""
    c, w = bottleneck(restrict_module(M, line), restrict_module(N, line))
    if c == INF:
        return INF, w
    return weight(line) * c, w


def _result_at(M, N, key, lam, count):
    line = _line_from_key(*key, lam)
    value, wit = _exact_value(M, N, line)
    return DistanceResult(value, line, wit, count)


def _select_exact(M, N, keys, lam, count):
    """Exact maximum over key triples, lex-smallest line on ties."""
    best = best_key = best_lex = None
    for key in keys:
        c = _exact_cost(M, N, _line_from_key(*key, lam))
        lex = _lex_pair(*key, lam)
        if best is None or c > best or (c == best and lex < best_lex):
            best, best_key, best_lex = c, key, lex
    return _result_at(M, N, best_key, lam, count)


def _select_vector(M, N, dxv, dyv, kv, lam, count):
    """Exact selection over int64 key arrays through reduced-fraction values.

    Ties collapse by bit equality of the reduced fractions, so plateaus of
    equal-valued lines cost one vectorized pass instead of per-line work.
    """
    res = _fastpath.exact_reduced_values(M, N, dxv, dyv, kv, lam)
    if res is None:
        keys = list(zip(dxv.tolist(), dyv.tolist(), kv.tolist()))
        return _select_exact(M, N, keys, lam, count)
    ps, qs = res
    ratio = ps.astype(np.float64) / qs.astype(np.float64)
    fm = float(ratio.max())
    band = np.nonzero(ratio >= fm * (1 - 1e-9) - 1e-12)[0]
    bp = bq = None
    for p, q in np.unique(np.stack([ps[band], qs[band]], axis=1),
                          axis=0).tolist():
        if bp is None or p * bq > bp * q:
            bp, bq = p, q
    winners = np.nonzero((ps == bp) & (qs == bq))[0]
    lexmin = _LexMin(lam)
    lexmin.offer(dxv[winners], dyv[winners], kv[winners])
    return _result_at(M, N, lexmin.key, lam, count)


def _screened_keys(M, N, keys, lam):
    """Float prefilter over materialized keys; returns the survivors."""
    dxs = np.asarray([float(t[0]) for t in keys])
    dys = np.asarray([float(t[1]) for t in keys])
    ks = np.asarray([float(t[2]) for t in keys])
    fv = _fastpath.eval_lines(M, N, *_fastpath.line_floats(dxs, dys, ks, lam))
    kmax = float(np.abs(ks).max())
    margin = 1e-9 * max(1.0, _fastpath.coord_scale(M, N), kmax / lam)
    keep = np.nonzero(fv >= float(fv.max()) - margin)[0]
    return [keys[int(t)] for t in keep]


def matching_distance(M: TwoParamModule, N: TwoParamModule,
                      extra_switch_points: SwitchPointSet | None = None
                      ) -> DistanceResult:
    """Exact matching distance with a witness line and matching.

    Ties between maximizing lines are broken by the lexicographically
    smallest (m1/m2, b1).  Candidate keys are streamed in blocks, so memory
    is bounded by the number of distinct lines, never the number of pairs.
    """
    if M.is_trivial and N.is_trivial:
        return DistanceResult(Q(0), None, None, 0)
    sp = _switch_for(M, N, extra_switch_points)
    pts, dirs = _point_set(M, N, sp)
    X, Y, dvals, lam = _scaled(pts, dirs)

    # equal-value decisions that need no line search; the witness line is
    # then just the lex-min candidate
    shortcut = (_essential_count(M) != _essential_count(N)
                or _struct_key(M) == _struct_key(N))

    spec = None if _use_bigint(X, Y, dvals) else _pack_spec(X, Y, dvals)
    if spec is None:
        keys = _distinct_keys(X, Y, dvals)
        count = len(keys)
        if shortcut:
            key = min(keys, key=lambda t: _lex_pair(*t, lam))
            return _result_at(M, N, key, lam, count)
        if _fastpath.vector_ready(M, N):
            keys = _screened_keys(M, N, keys, lam)
        return _select_exact(M, N, keys, lam, count)

    union = _KeyUnion()
    lexmin = _LexMin(lam) if shortcut else None
    screen = None
    if not shortcut and _fastpath.vector_ready(M, N):
        # the packing bound caps |k|, so this margin dominates the one any
        # individual block could require
        margin = 1e-9 * max(1.0, _fastpath.coord_scale(M, N), spec[2] / lam)
        screen = _Screen(M, N, lam, margin)

    for dxv, dyv, kv in _iter_blocks(X, Y, dvals):
        packed = _pack(spec, dxv, dyv, kv)
        union.add(np.unique(packed))
        if lexmin is not None:
            lexmin.offer(dxv, dyv, kv)
        if screen is not None:
            screen.offer(dxv, dyv, kv, packed)

    count = int(union.finish().size)
    if shortcut:
        return _result_at(M, N, lexmin.key, lam, count)
    packed = screen.finish() if screen is not None else union.finish()
    dxv, dyv, kv = _unpack(spec, packed)
    if screen is not None:
        return _select_vector(M, N, dxv, dyv, kv, lam, count)
    keys = list(zip(dxv.tolist(), dyv.tolist(), kv.tolist()))
    return _select_exact(M, N, keys, lam, count)


def vertical_cost(M: TwoParamModule, N: TwoParamModule, x0,
                  anchor_height=None):
    """Limit of the weighted bottleneck along lines steepening to the vertical
    through (x0, anchor).

    The anchor sits strictly above every candidate point; two sample slopes
    are taken below every slope at which a line through the anchor meets a
    candidate point or direction, where the weighted cost is affine in the
    slope, and the limit is its extrapolation to slope zero.

    Raises:
        BothTrivial: if both modules are trivial.
        ValueError: if anchor_height is not strictly above the point set.
    """
    if M.is_trivial and N.is_trivial:
        raise BothTrivial("no critical values")
    x0 = rat(x0)
    sp = _switch_for(M, N, None)
    pts, dirs = _point_set(M, N, sp)
    ymax = max(p[1] for p in pts)
    if anchor_height is None:
        yr = ymax + 1
    else:
        yr = rat(anchor_height)
        if yr <= ymax:
            raise ValueError("anchor height %s not above the point set (max "
                             "second coordinate %s)" % (yr, ymax))
    cands = [Q(d.h1, d.h2) for d in dirs]
    cands += [(x0 - p[0]) / (yr - p[1]) for p in pts if p[0] < x0]
    cutoff = min(c for c in cands if c > 0)
    e1, e2 = cutoff / 2, cutoff / 4
    vals = []
    for e in (e1, e2):
        line = normalize_line((e, 1), (x0, yr))
        value = _exact_cost(M, N, line)
        if value == INF:
            return INF
        vals.append(value)
    f1, f2 = vals
    return (e1 * f2 - e2 * f1) / (e1 - e2)


def horizontal_cost(M: TwoParamModule, N: TwoParamModule, y0,
                    anchor_height=None):
    """Mirror of vertical_cost across the diagonal."""
    return vertical_cost(swap_axes(M), swap_axes(N), y0, anchor_height)
