"""Grid sweep tests: golden values, dominance by the exact engine, and the
CSV boundary."""
import csv
import io
import math
import random

import pytest

from conftest import (combined_presentation, ex_diag_not_suff, ex_need_diag,
                      ex_need_omega, rand_pool, rand_rect_module)
from matchdist.exactdist import matching_distance
from matchdist.gridscan import (GridSpec, default_offset_range,
                                restricted_max, scan, write_csv)
from matchdist.modules import TwoParamModule, rect
from matchdist.rational import INF, Q


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 5)
    with pytest.raises(ValueError):
        GridSpec(5, 1)
    with pytest.raises(ValueError):
        GridSpec(3, 3, offset_range=(2, 2))
    GridSpec(2, 2)


def test_default_offset_range():
    M, N = ex_need_omega()
    assert default_offset_range(M, N) == (-18.0, 22.0)
    t = TwoParamModule.from_rects([])
    assert default_offset_range(t, t) == (-1.0, 1.0)


def test_scan_golden_interior_pivot():
    M, N = ex_need_omega()
    res = scan(M, N, GridSpec(400, 400))
    assert abs(res.max_value - 2.1) < 0.02
    assert res.max_value <= float(Q(21, 10)) + 1e-9


def test_scan_golden_split_swap():
    M, N = ex_diag_not_suff()
    res = scan(M, N, GridSpec(400, 400))
    exact = float(Q(28, 11))
    assert exact - 0.05 < res.max_value <= exact + 1e-9


def test_restricted_diagonal_hits_golden_offsets():
    # spacing 1/2 over (-18, 22) puts the maximizing offsets 2.5 and 2 on
    # the grid exactly
    g = GridSpec(2, 81)
    M, N = ex_need_omega()
    assert restricted_max(M, N, g, "diagonal_only") == pytest.approx(
        1.5, abs=1e-9)
    M, N = ex_diag_not_suff()
    assert restricted_max(M, N, g, "diagonal_only") == pytest.approx(
        2.0, abs=1e-9)


def test_restricted_critical_pairs_golden():
    M, N = ex_need_omega()
    v = restricted_max(M, N, GridSpec(2, 2), "critical_pairs_only")
    assert v == pytest.approx(float(Q(21, 11)), abs=1e-9)


def test_neither_restricted_family_suffices():
    M, N = ex_need_omega()
    g = GridSpec(400, 400)
    full = scan(M, N, g).max_value
    assert full > restricted_max(M, N, g, "critical_pairs_only")
    assert full > restricted_max(M, N, GridSpec(2, 81), "diagonal_only")


def test_unknown_family_rejected():
    M, N = ex_need_omega()
    with pytest.raises(ValueError):
        restricted_max(M, N, GridSpec(2, 2), "everything")


def test_samples_never_exceed_exact():
    rng = random.Random(17)
    pool = rand_pool(rng, 4)
    cases = [ex_diag_not_suff(), ex_need_omega(), ex_need_diag(),
             (rand_rect_module(rng, max_rects=2, pool=pool, p_inf=0),
              rand_rect_module(rng, max_rects=2, pool=pool, p_inf=0)),
             (TwoParamModule.from_rects([rect(0, 0, INF, INF)]),
              TwoParamModule.from_rects([rect(0, 0, 4, 4)]))]
    for M, N in cases:
        exact = float(matching_distance(M, N).value)
        res = scan(M, N, GridSpec(50, 50))
        assert res.max_value <= exact + 1e-9
        assert all(r.weighted_cost <= exact + 1e-9 for r in res.rows)


def test_refinement_monotone():
    # theta interiors nest when fine_steps+1 is a multiple of coarse+1, and
    # offsets nest when fine-1 is a multiple of coarse-1
    M, N = ex_need_omega()
    rng_kwargs = dict(offset_range=(-18, 22))
    coarse = scan(M, N, GridSpec(4, 5, **rng_kwargs)).max_value
    fine = scan(M, N, GridSpec(9, 9, **rng_kwargs)).max_value
    assert fine >= coarse - 1e-12


def test_rows_order_and_argmax():
    M, N = ex_need_diag()
    g = GridSpec(3, 4)
    res = scan(M, N, g)
    rows = list(res.rows)
    assert len(rows) == 3 * 4
    assert rows == list(res.rows)  # re-iterable, deterministic
    order = [(r.theta, r.offset) for r in rows]
    assert order == sorted(order)
    assert max(r.weighted_cost for r in rows) == res.max_value
    assert any((r.theta, r.offset) == res.argmax
               and r.weighted_cost == res.max_value for r in rows)


def test_trivial_scan_all_zero():
    t = TwoParamModule.from_rects([])
    res = scan(t, t, GridSpec(3, 3))
    assert res.max_value == 0.0
    assert all(r.weighted_cost == 0.0 for r in res.rows)


def test_presentation_path_agrees_with_rect_path():
    M, N = ex_need_omega()
    g = GridSpec(10, 10)
    fast = list(scan(M, N, g).rows)
    slow = list(scan(combined_presentation(M), combined_presentation(N),
                     g).rows)
    assert len(fast) == len(slow)
    for a, b in zip(fast, slow):
        assert (a.theta, a.offset) == (b.theta, b.offset)
        assert a.weighted_cost == pytest.approx(b.weighted_cost, abs=1e-9)


def test_csv_round_trip_and_inf_sentinel():
    M = TwoParamModule.from_rects([rect(0, 0, INF, INF)])
    N = TwoParamModule.from_rects([rect(0, 0, 4, 4)])
    res = scan(M, N, GridSpec(2, 3))
    buf = io.StringIO()
    write_csv(res.rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "theta,offset,weighted_bottleneck"
    parsed = list(csv.reader(lines[1:]))
    assert len(parsed) == 2 * 3
    for (ts, os_, cs), row in zip(parsed, res.rows):
        assert float(ts) == row.theta
        assert float(os_) == row.offset
        assert cs == "inf" and float(cs) == math.inf
