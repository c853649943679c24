"""Floating-point grid sweep of the weighted bottleneck across line parameters.

The sweep is a lower-bound cross-check for the exact engine: every sample is
the weighted bottleneck cost on one positive-slope line, so no sample can
exceed the exact maximum by more than float round-off.  Lines are drawn from
an (angle, offset) grid, with the direction renormalized to the standard form
so weights match the exact path.  Rectangle modules with few summands are
evaluated vectorized; everything else falls back to exact restriction per
line, lowered to a double at the end.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _fastpath
from .exactdist import _diagram_cost, _essential_count
from .fibered import restrict_module
from .geometry import Line, line_through, weight
from .modules import critical_values, lub_closure
from .rational import INF, rat


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid over (theta, offset) line parameters.

    theta takes theta_steps values strictly inside (0, pi/2); offset takes
    offset_steps values across offset_range.  The default offset range is the
    offset span of the critical-value bounding box of both modules, padded by
    the box diameter, so every line meeting the box occurs in the sweep.
    """

    theta_steps: int
    offset_steps: int
    offset_range: tuple | None = None

    def __post_init__(self):
        if self.theta_steps < 2 or self.offset_steps < 2:
            raise ValueError("grid needs at least 2 steps per axis")
        if self.offset_range is not None and \
                not self.offset_range[0] < self.offset_range[1]:
            raise ValueError("empty offset range")


@dataclass(frozen=True)
class HeatmapRow:
    theta: float
    offset: float
    weighted_cost: float


class _LazyRows:
    """Re-iterable view; each pass re-evaluates the grid row by row."""

    def __init__(self, fn):
        self._fn = fn

    def __iter__(self):
        return self._fn()


@dataclass(frozen=True)
class ScanResult:
    max_value: float
    argmax: tuple
    rows: object  # iterable of HeatmapRow in (theta, offset) order


def default_offset_range(M, N) -> tuple:
    pts = set(critical_values(M)) | set(critical_values(N))
    if not pts:
        return (-1.0, 1.0)
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    d = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    return (min(ys) - max(xs) - d, max(ys) - min(xs) + d)


def _evaluator(M, N):
    """A map from float line arrays (m1, m2, b1, b2) to weighted costs.

    The offset convention matches the exact engine: b = (-o/2, o/2) for a
    line of offset o, so b1 + b2 = 0 holds exactly in floats and the slow
    path can rebuild an exactly normalized Line from the doubles.
    """
    if M.is_trivial and N.is_trivial:
        return lambda m1, m2, b1, b2: np.zeros(len(m1))
    if _essential_count(M) != _essential_count(N):
        return lambda m1, m2, b1, b2: np.full(len(m1), math.inf)
    if _fastpath.vector_ready(M, N):
        return lambda m1, m2, b1, b2: _fastpath.eval_lines(
            M, N, m1, m2, b1, b2)

    def slow(m1, m2, b1, b2):
        out = np.empty(len(m1))
        for i in range(len(m1)):
            line = Line((rat(m1[i]), rat(m2[i])), (rat(b1[i]), rat(b2[i])))
            c = _diagram_cost(restrict_module(M, line),
                              restrict_module(N, line))
            out[i] = math.inf if c == INF else float(weight(line) * c)
        return out

    return slow


def _axes(M, N, g):
    lo, hi = g.offset_range if g.offset_range is not None \
        else default_offset_range(M, N)
    thetas = np.linspace(0.0, math.pi / 2, g.theta_steps + 2)[1:-1]
    offsets = np.linspace(float(lo), float(hi), g.offset_steps)
    return thetas, offsets


def _theta_rows(thetas, offsets, ev):
    b1 = -offsets / 2
    b2 = offsets / 2
    ones = np.ones_like(offsets)
    for th in thetas:
        c, s = math.cos(th), math.sin(th)
        mx = max(c, s)
        yield th, ev(ones * (c / mx), ones * (s / mx), b1, b2)


def scan(M, N, g: GridSpec) -> ScanResult:
    """Sweep the grid; returns the max, its (theta, offset), and lazy rows.

    Rows are produced in (theta, offset) order; iterating them re-runs the
    evaluation, so a scan whose rows are never read costs no row storage.
    """
    thetas, offsets = _axes(M, N, g)
    ev = _evaluator(M, N)
    best = -math.inf
    arg = (float(thetas[0]), float(offsets[0]))
    for th, row in _theta_rows(thetas, offsets, ev):
        j = int(np.argmax(row))
        if row[j] > best:
            best, arg = float(row[j]), (float(th), float(offsets[j]))

    def gen():
        for th, row in _theta_rows(thetas, offsets, ev):
            for j in range(len(offsets)):
                yield HeatmapRow(float(th), float(offsets[j]), float(row[j]))

    return ScanResult(best, arg, _LazyRows(gen))


def restricted_max(M, N, g: GridSpec, family: str) -> float:
    """Max over one restricted line family.

    "diagonal_only" sweeps slope-1 lines over the offset grid;
    "critical_pairs_only" evaluates the finitely many lines through two
    points of the lub-closed critical value sets (no grid involved).
    """
    ev = _evaluator(M, N)
    if family == "diagonal_only":
        _, offsets = _axes(M, N, g)
        ones = np.ones_like(offsets)
        return float(ev(ones, ones, -offsets / 2, offsets / 2).max())
    if family != "critical_pairs_only":
        raise ValueError("unknown family %r" % family)
    pts = sorted(lub_closure(critical_values(M))
                 | lub_closure(critical_values(N)))
    lines = {}
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            ln = line_through(p, q)
            if ln is not None:
                lines[(ln.m, ln.b)] = ln
    if not lines:
        return 0.0
    m1 = np.array([float(ln.m[0]) for ln in lines.values()])
    m2 = np.array([float(ln.m[1]) for ln in lines.values()])
    b1 = np.array([float(ln.b[0]) for ln in lines.values()])
    return float(ev(m1, m2, b1, -b1).max())


def write_csv(rows, fileobj) -> None:
    """CSV with header theta,offset,weighted_bottleneck; inf spelled "inf"."""
    w = csv.writer(fileobj)
    w.writerow(["theta", "offset", "weighted_bottleneck"])
    for r in rows:
        w.writerow([repr(r.theta), repr(r.offset), repr(r.weighted_cost)])
