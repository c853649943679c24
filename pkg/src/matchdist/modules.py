"""Two-parameter persistence modules and their critical values.

A module is either rectangle-decomposable (a multiset of half-open support
rectangles, upper corners possibly infinite) or given by a graded free
presentation over the two-element field.  Critical values are the grades of
generators and relators; the least-upper-bound closure of a finite point set
lives on the grid of its coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass

from .rational import INF, rat


def _coord(x):
    return INF if x == INF or x == "inf" else rat(x)


@dataclass(frozen=True)
class Rect:
    """Support rectangle [lower1, upper1) x [lower2, upper2).

    The lower corner is finite; upper coordinates may be +inf.  Both
    inequalities lower < upper are strict.
    """

    lower: tuple
    upper: tuple

    def __post_init__(self):
        l1, l2 = self.lower
        u1, u2 = self.upper
        if l1 == INF or l2 == INF:
            raise ValueError("lower corner must be finite")
        if not (l1 < u1 and l2 < u2):
            raise ValueError("rectangle needs lower < upper in both coordinates")


def rect(x1, y1, x2, y2) -> Rect:
    """Convenience constructor; accepts ints, strings, rationals, and inf."""
    return Rect((rat(x1), rat(y1)), (_coord(x2), _coord(y2)))


@dataclass(frozen=True)
class Presentation:
    """Graded free presentation over the two-element field.

    generators: tuple of (name, grade) with grade a finite point.
    relations: tuple of (name, grade, column) where column is a frozenset of
    generator names carrying coefficient 1.
    """

    generators: tuple
    relations: tuple

    def grade_violation(self):
        """First structural defect as a message string, or None if valid.

        Checks duplicate generator names, unknown names in relation columns,
        and the requirement that a relation's grade dominates the grade of
        every generator in its column componentwise.
        """
        grades = {}
        for name, grade in self.generators:
            if name in grades:
                return "duplicate generator name %r" % name
            grades[name] = grade
        for name, grade, column in self.relations:
            for gen in column:
                if gen not in grades:
                    return "relation %r references unknown generator %r" % (name, gen)
                g = grades[gen]
                if not (grade[0] >= g[0] and grade[1] >= g[1]):
                    return ("relation %r at (%s, %s) is below generator %r at (%s, %s)"
                            % (name, grade[0], grade[1], gen, g[0], g[1]))
        return None


@dataclass(frozen=True)
class TwoParamModule:
    """Exactly one of: a multiset of rectangles, or a presentation."""

    rectangles: tuple | None = None
    presentation: Presentation | None = None

    def __post_init__(self):
        if (self.rectangles is None) == (self.presentation is None):
            raise ValueError("exactly one of rectangles/presentation must be set")

    @classmethod
    def from_rects(cls, rects) -> "TwoParamModule":
        return cls(rectangles=tuple(rects))

    @classmethod
    def from_presentation(cls, pres: Presentation) -> "TwoParamModule":
        return cls(presentation=pres)

    @property
    def is_rectangle_form(self) -> bool:
        return self.rectangles is not None

    @property
    def is_trivial(self) -> bool:
        """Structurally trivial: no rectangles, or no generators."""
        if self.rectangles is not None:
            return len(self.rectangles) == 0
        return len(self.presentation.generators) == 0


def critical_values(module: TwoParamModule) -> frozenset:
    """Grades of generators and relators, deduplicated; empty iff trivial.

    A rectangle [u, v) contributes its generator grade u and one relator grade
    per finite upper coordinate: (v1, u2) and (u1, v2); infinite relator grades
    are omitted (no relation exists in that direction).
    """
    out = set()
    if module.rectangles is not None:
        for r in module.rectangles:
            l1, l2 = r.lower
            u1, u2 = r.upper
            out.add((l1, l2))
            if u1 != INF:
                out.add((u1, l2))
            if u2 != INF:
                out.add((l1, u2))
    else:
        for _, grade in module.presentation.generators:
            out.add(grade)
        for _, grade, _ in module.presentation.relations:
            out.add(grade)
    return frozenset(out)


def lub_closure(points) -> frozenset:
    """Smallest superset of the given finite points closed under pairwise
    componentwise maximum.

    A grid point (x, y) belongs to the closure iff some input point realizes x
    with second coordinate <= y and some input point realizes y with first
    coordinate <= x; the closure is therefore computed in one pass over the
    coordinate grid (any lub of a subset is the lub of two such witnesses).
    """
    pts = {(p[0], p[1]) for p in points}
    if not pts:
        return frozenset()
    xs = {p[0] for p in pts}
    ys = {p[1] for p in pts}
    out = set(pts)
    for x in xs:
        for y in ys:
            if any(p[0] == x and p[1] <= y for p in pts) and \
               any(p[1] == y and p[0] <= x for p in pts):
                out.add((x, y))
    return frozenset(out)


def rect_as_presentation(r: Rect) -> Presentation:
    """Canonical free presentation of a rectangle module: one generator at the
    lower corner, one relation per finite upper coordinate."""
    rels = []
    l1, l2 = r.lower
    u1, u2 = r.upper
    if u1 != INF:
        rels.append(("r1", (u1, l2), frozenset({"g"})))
    if u2 != INF:
        rels.append(("r2", (l1, u2), frozenset({"g"})))
    return Presentation(generators=(("g", (l1, l2)),), relations=tuple(rels))


def _map_point(p, f):
    return (f(p[0], 0), f(p[1], 1))


def _transform(module: TwoParamModule, f) -> TwoParamModule:
    if module.rectangles is not None:
        return TwoParamModule.from_rects(
            Rect(_map_point(r.lower, f), _map_point(r.upper, f))
            for r in module.rectangles)
    pres = module.presentation
    gens = tuple((n, _map_point(g, f)) for n, g in pres.generators)
    rels = tuple((n, _map_point(g, f), col) for n, g, col in pres.relations)
    return TwoParamModule.from_presentation(Presentation(gens, rels))


def translate(module: TwoParamModule, t) -> TwoParamModule:
    """Translate every grade by the finite vector t."""
    t = (rat(t[0]), rat(t[1]))
    return _transform(module, lambda c, i: INF if c == INF else c + t[i])


def scale(module: TwoParamModule, factor) -> TwoParamModule:
    """Scale every grade by a positive rational factor."""
    f = rat(factor)
    if f <= 0:
        raise ValueError("scale factor must be positive")
    return _transform(module, lambda c, i: INF if c == INF else c * f)


def swap_axes(module: TwoParamModule) -> TwoParamModule:
    """Mirror the module across the diagonal (swap the two parameters)."""
    if module.rectangles is not None:
        return TwoParamModule.from_rects(
            Rect((r.lower[1], r.lower[0]), (r.upper[1], r.upper[0]))
            for r in module.rectangles)
    pres = module.presentation
    gens = tuple((n, (g[1], g[0])) for n, g in pres.generators)
    rels = tuple((n, (g[1], g[0]), col) for n, g, col in pres.relations)
    return TwoParamModule.from_presentation(Presentation(gens, rels))
