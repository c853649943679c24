import random

import pytest

from conftest import rand_diagram
from matchdist.bottleneck import (MatchingWitness, TooLarge, bottleneck,
                                  bottleneck_bruteforce)
from matchdist.fibered import Bar
from matchdist.rational import INF, Q
from oracles import essential_bruteforce, matching_cost


def dgm(*pairs):
    return tuple(Bar(Q(b) if b != INF else b, Q(d) if d != INF else d)
                 for b, d in pairs)


def check_witness(d1, d2, cost, w: MatchingWitness):
    assert w.cost == cost
    used1 = {i for i, _ in w.pairs}
    used2 = {j for _, j in w.pairs}
    diag1 = {i for s, i in w.unmatched_to_diagonal if s == 1}
    diag2 = {j for s, j in w.unmatched_to_diagonal if s == 2}
    assert used1 | diag1 == set(range(len(d1)))
    assert used2 | diag2 == set(range(len(d2)))
    assert not used1 & diag1 and not used2 & diag2
    assert len(used1) == len(w.pairs) and len(used2) == len(w.pairs)
    assert matching_cost(d1, d2, w.pairs) == cost
    if w.realizer is not None:
        s, t, delta = w.realizer
        assert abs(s - t) / delta == cost
    elif cost != INF:
        assert cost == 0


def test_empty():
    cost, w = bottleneck((), ())
    assert cost == 0 and w.pairs == () and w.realizer is None


def test_known_values():
    d1 = dgm((0, 7), (4, 11))
    d2 = dgm((0, 11), (4, 7))
    cost, w = bottleneck(d1, d2)
    assert cost == 4
    check_witness(d1, d2, cost, w)

    d1 = dgm((Q(10, 17), Q(129, 17)), (Q(61, 17), Q(180, 17)))
    d2 = dgm((Q(61, 17), Q(129, 17)), (Q(10, 17), Q(180, 17)))
    cost, w = bottleneck(d1, d2)
    assert cost == 3
    check_witness(d1, d2, cost, w)

    d1 = dgm((1, 8), (4, 11))
    d2 = dgm((4, 8), (1, 11))
    cost, w = bottleneck(d1, d2)
    assert cost == 3
    check_witness(d1, d2, cost, w)


def test_diagonal_beats_pairing():
    # cheaper to drop both tiny bars than to match across
    d1 = dgm((0, 1))
    d2 = dgm((100, 101))
    cost, w = bottleneck(d1, d2)
    assert cost == Q(1, 2)
    assert w.pairs == ()
    assert set(w.unmatched_to_diagonal) == {(1, 0), (2, 0)}
    check_witness(d1, d2, cost, w)


def test_essential_conventions():
    cost, _ = bottleneck(dgm((0, INF)), dgm((5, INF)))
    assert cost == 5
    cost, w = bottleneck(dgm((0, INF)), ())
    assert cost == INF and w.realizer is None
    cost, _ = bottleneck(dgm((0, INF), (0, 3)), dgm((1, INF)))
    assert cost == Q(3, 2)
    # essential bars must pair in birth order
    cost, w = bottleneck(dgm((0, INF), (10, INF)), dgm((2, INF), (11, INF)))
    assert cost == 2
    assert w.pairs == ((0, 0), (1, 1))


def test_mixed_essential_blocks_finite_pairing():
    # the finite bar cannot absorb the essential one
    d1 = dgm((0, INF), (5, 6))
    d2 = dgm((0, INF))
    cost, w = bottleneck(d1, d2)
    assert cost == Q(1, 2)
    check_witness(d1, d2, cost, w)


def test_realizer_ratio_forms():
    # cost realized by a birth difference
    cost, w = bottleneck(dgm((0, 10)), dgm((3, 10)))
    assert cost == 3 and w.realizer == (Q(0), Q(3), 1)
    # cost realized by a half-persistence
    cost, w = bottleneck(dgm((0, 8)), ())
    assert cost == 4 and w.realizer == (Q(0), Q(8), 2)


def test_bruteforce_guard():
    big = dgm(*[(i, i + 1) for i in range(9)])
    with pytest.raises(TooLarge):
        bottleneck_bruteforce(big, ())


def test_matches_bruteforce_random():
    rng = random.Random(98765)
    for _ in range(250):
        d1 = rand_diagram(rng, max_bars=4)
        d2 = rand_diagram(rng, max_bars=4)
        cost, w = bottleneck(d1, d2)
        assert cost == bottleneck_bruteforce(d1, d2)
        check_witness(d1, d2, cost, w)


def test_essential_inorder_optimal():
    rng = random.Random(4242)
    for _ in range(200):
        k = rng.randint(0, 5)
        b1 = [Q(rng.randint(0, 30), rng.randint(1, 3)) for _ in range(k)]
        b2 = [Q(rng.randint(0, 30), rng.randint(1, 3)) for _ in range(k)]
        d1 = tuple(Bar(b, INF) for b in b1)
        d2 = tuple(Bar(b, INF) for b in b2)
        cost, _ = bottleneck(d1, d2)
        assert cost == essential_bruteforce(b1, b2)


def test_symmetry_and_identity():
    rng = random.Random(31337)
    for _ in range(80):
        d1 = rand_diagram(rng, max_bars=4)
        d2 = rand_diagram(rng, max_bars=4)
        c12, _ = bottleneck(d1, d2)
        c21, _ = bottleneck(d2, d1)
        assert c12 == c21
        c11, _ = bottleneck(d1, d1)
        assert c11 == 0


def test_triangle_inequality():
    rng = random.Random(555)
    for _ in range(60):
        ds = [rand_diagram(rng, max_bars=3) for _ in range(3)]
        ab, _ = bottleneck(ds[0], ds[1])
        bc, _ = bottleneck(ds[1], ds[2])
        ac, _ = bottleneck(ds[0], ds[2])
        if ab != INF and bc != INF:
            assert ac <= ab + bc
