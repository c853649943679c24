"""Restriction of a 2-parameter module to a positive-slope line.

The restriction is a 1-parameter module in the line's parameterization; for a
rectangle the bar is [push of the lower corner, pull of the upper corner), and
for a presentation the barcode comes from the standard left-to-right column
reduction of the relation matrix with grades mapped through push_param.
Diagrams are returned as tuples of bars sorted by (birth, death), so equality
of diagrams is multiset equality.
"""
from __future__ import annotations

from dataclasses import dataclass

from .geometry import Line, pull_param, push_param
from .modules import Presentation, Rect, TwoParamModule
from .rational import INF


class InvalidPresentation(ValueError):
    """Raised when a relation grade fails to dominate its column's grades."""


@dataclass(frozen=True)
class Bar:
    """Half-open interval [birth, death), death possibly +inf, birth < death."""

    birth: object
    death: object

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValueError("bar needs birth < death")


def _sorted_diagram(bars) -> tuple:
    return tuple(sorted(bars, key=lambda b: (b.birth, b.death)))


def restrict_rect(r: Rect, line: Line):
    """Bar of a rectangle module on the line, or None if it misses the line."""
    birth = push_param(line, r.lower)
    death = pull_param(line, r.upper)
    if birth < death:
        return Bar(birth, death)
    return None


def restrict_module(module: TwoParamModule, line: Line) -> tuple:
    """Persistence diagram of the restriction of the module to the line."""
    if module.rectangles is not None:
        bars = []
        for r in module.rectangles:
            bar = restrict_rect(r, line)
            if bar is not None:
                bars.append(bar)
        return _sorted_diagram(bars)
    return restrict_presentation(module.presentation, line)


def restrict_presentation(pres: Presentation, line: Line) -> tuple:
    """Barcode of a presented module restricted to the line.

    Generators and relations are sorted by the push parameter of their grade
    (stable on ties by input order).  Columns are reduced left to right over
    the two-element field; a column's pivot is its generator of largest birth
    parameter.  Pivoted columns yield finite bars (zero-length ones dropped),
    unpivoted generators yield essential bars.

    Raises:
        InvalidPresentation: if a relation grade fails the componentwise
            dominance invariant (or a column references an unknown name).
    """
    bad = pres.grade_violation()
    if bad is not None:
        raise InvalidPresentation(bad)

    gens = pres.generators
    order = sorted(range(len(gens)),
                   key=lambda i: (push_param(line, gens[i][1]), i))
    birth = [push_param(line, gens[i][1]) for i in order]
    rank = {gens[i][0]: r for r, i in enumerate(order)}

    rels = pres.relations
    rel_order = sorted(range(len(rels)),
                       key=lambda j: (push_param(line, rels[j][1]), j))

    owner = {}  # pivot rank -> reduced column (set of ranks)
    bars = []
    for j in rel_order:
        _, grade, column = rels[j]
        col = {rank[name] for name in column}
        while col:
            piv = max(col)
            seen = owner.get(piv)
            if seen is None:
                break
            col ^= seen
        if col:
            piv = max(col)
            owner[piv] = col
            death = push_param(line, grade)
            if birth[piv] < death:
                bars.append(Bar(birth[piv], death))
    for r in range(len(birth)):
        if r not in owner:
            bars.append(Bar(birth[r], INF))
    return _sorted_diagram(bars)
