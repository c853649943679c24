"""Exact matching distance between 2-parameter persistence modules.

The distance is the supremum, over positive-slope lines, of the weighted
bottleneck distance between the modules' restrictions to the line.  The
engine reduces the supremum to an exact maximum over a finite candidate line
set; a floating-point grid sweep provides an independent lower-bound check.
"""
from .bottleneck import MatchingWitness, bottleneck
from .exactdist import (BothTrivial, CandidateLineSet, DistanceResult,
                        SwitchPointSet, candidate_lines, horizontal_cost,
                        matching_distance, switch_points, vertical_cost)
from .fibered import Bar, InvalidPresentation, restrict_module
from .geometry import (Line, ProjPoint, line_through, line_through_infinite,
                       normalize_line, pull_param, push_param, weight)
from .gridscan import GridSpec, HeatmapRow, ScanResult, restricted_max, scan
from .modules import (Presentation, Rect, TwoParamModule, critical_values,
                      lub_closure, rect, rect_as_presentation, scale,
                      swap_axes, translate)
from .rational import INF, Q, rat

__all__ = [
    "Bar", "BothTrivial", "CandidateLineSet", "DistanceResult", "GridSpec",
    "HeatmapRow", "INF", "InvalidPresentation", "Line", "MatchingWitness",
    "Presentation", "ProjPoint", "Q", "Rect", "ScanResult", "SwitchPointSet",
    "TwoParamModule", "bottleneck", "candidate_lines", "critical_values",
    "horizontal_cost", "line_through", "line_through_infinite",
    "lub_closure", "matching_distance", "normalize_line", "pull_param",
    "push_param", "rat", "rect", "rect_as_presentation", "restrict_module",
    "restricted_max", "scale", "scan", "swap_axes", "switch_points",
    "translate", "vertical_cost", "weight",
]
