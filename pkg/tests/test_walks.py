import functools
import random

import pytest

from ordwalks.ordinal import ZERO, compare, from_int, parse, render, universe
from ordwalks.walks import (
    CofinalityError,
    CSequence,
    c_trace,
    check_triple,
    check_universe,
    fiber,
    rho,
    rhobar,
    shift_chain_counterexample,
    walk_trace,
)

from oracles import rho_finite, rho_pair, rhobar_finite, rhobar_pair


def pair_ord(a, b):
    if a == 0:
        return from_int(b)
    if b == 0:
        return parse(f"w*{a}") if a > 1 else parse("w")
    return parse(f"w*{a}+{b}") if a > 1 else parse(f"w+{b}")


def test_ladder_elements_successor_and_limit():
    p = CSequence()
    assert list(p.first(parse("w+3"), 5)) == [parse("w+2")]
    assert list(p.first(parse("w"), 4)) == [parse("1"), parse("2"), parse("3"), parse("4")]
    assert list(p.first(parse("w*2"), 3)) == [parse("w+1"), parse("w+2"), parse("w+3")]
    assert list(p.first(parse("w^2"), 3)) == [parse("w"), parse("w*2"), parse("w*3")]
    with pytest.raises(ValueError):
        next(p.elements(ZERO))


def test_c_trace_hand_values():
    p = CSequence()
    t = c_trace(parse("w"), parse("3"), p)
    assert t.count == 2
    assert t.below == (parse("1"), parse("2"))
    assert t.step == parse("3")
    t2 = c_trace(parse("w*2"), parse("w"), p)
    assert t2.count == 0
    assert t2.below == ()
    assert t2.step == parse("w+1")
    with pytest.raises(ValueError):
        c_trace(parse("w"), parse("w"), p)


def test_rho_spot_values():
    p = CSequence()
    assert rho(parse("3"), parse("w"), p) == 2
    assert rho(parse("w"), parse("w"), p) == 0
    assert rho(parse("0"), parse("w"), p) == 0
    assert rho(parse("w"), parse("w*2"), p) == 0
    assert rho(parse("w+1"), parse("w*2"), p) == 0
    with pytest.raises(ValueError):
        rho(parse("w"), parse("3"), p)


def test_rho_matches_literal_recursion_on_finites():
    p = CSequence()
    for k in range(30):
        for m in range(k, 40):
            assert rho(from_int(k), from_int(m), p) == rho_finite(k, m)


def test_rho_matches_pair_model():
    p = CSequence()
    memo = {}
    pairs = [(a, b) for a in range(4) for b in range(5)]
    for x in pairs:
        for y in pairs:
            if x <= y:
                got = rho(pair_ord(*x), pair_ord(*y), p)
                want = rho_pair(x, y, memo)
                assert got == want, (x, y, got, want)


def test_rhobar_matches_pair_model():
    p = CSequence()
    memo = {}
    pairs = [(a, b) for a in range(4) for b in range(5)]
    for x in pairs:
        for y in pairs:
            if x < y:
                got = rhobar(pair_ord(*x), pair_ord(*y), p)
                want = rhobar_pair(x, y, memo)
                assert got == want, (x, y, got, want)


def test_rhobar_spot_values_and_finite_closed_form():
    p = CSequence()
    assert rhobar(parse("3"), parse("w"), p) == 36
    assert rhobar(parse("w"), parse("w*2"), p) == 7
    assert rhobar(parse("2"), parse("5"), p) == 7
    for k in range(0, 60):
        for m in range(k + 1, 62):
            assert rhobar(from_int(k), from_int(m), p) == 2 * k + 3
    assert rhobar_finite(11, 57) == 25
    with pytest.raises(ValueError):
        rhobar(parse("w"), parse("w"), p)


def test_fiber_hand_values_and_monotonicity():
    p = CSequence()
    f = fiber(parse("w"), 1, p)
    assert [render(x) for x in f.members] == ["0", "1", "2", "w"]
    assert fiber(parse("w"), 0, p).members == (parse("0"), parse("1"), parse("w"))
    small = fiber(parse("5"), 0, p)
    assert small.members == tuple(from_int(i) for i in range(6))
    rng = random.Random(23)
    pool = universe(2, 3)
    for _ in range(25):
        alpha = rng.choice(pool)
        prev = None
        for n in range(4):
            members = set(fiber(alpha, n, p).members)
            for xi in members:
                assert rho(xi, alpha, p) <= n
            if prev is not None:
                assert prev <= members
            prev = members
    with pytest.raises(ValueError):
        fiber(parse("w"), -1, p)


def test_walk_trace_endpoints_and_example():
    p = CSequence()
    steps = walk_trace(parse("3"), parse("w+2"), p)
    assert [render(x) for x in steps] == ["w+2", "w+1", "w", "3"]
    assert walk_trace(parse("w"), parse("w"), p) == (parse("w"),)
    rng = random.Random(5)
    pool = universe(2, 2)
    for _ in range(40):
        a, b = rng.choice(pool), rng.choice(pool)
        if compare(a, b) > 0:
            a, b = b, a
        steps = walk_trace(a, b, p)
        assert steps[0] == b and steps[-1] == a
        for u, v in zip(steps, steps[1:]):
            assert compare(v, u) < 0


def test_custom_ladder_overrides_change_walks():
    # route the ladder at w straight through 5: the walk from w to 3 now
    # crosses {5}'s predecessors instead of 1..2
    p = CSequence({parse("w"): ((parse("5"),), True)})
    t = c_trace(parse("w"), parse("3"), p)
    assert t.count == 0 and t.step == parse("5")
    assert rho(parse("3"), parse("w"), p) == rho(parse("3"), parse("5"), p)
    # a finite ladder that stops below alpha must fail loudly
    p2 = CSequence({parse("w"): ((parse("1"), parse("3")), False)})
    with pytest.raises(CofinalityError):
        c_trace(parse("w"), parse("5"), p2)
    with pytest.raises(ValueError):
        CSequence({parse("w+1"): ((parse("1"),), False)})
    with pytest.raises(ValueError):
        CSequence({parse("w"): ((parse("3"), parse("2")), False)})
    with pytest.raises(ValueError):
        CSequence({parse("w"): ((parse("w*2"),), False)})


def test_cseq_from_file_and_errors(tmp_path):
    path = tmp_path / "ladders.txt"
    path.write_text("w: 2, 4; canonical\nw*2: w+1\n")
    p = CSequence.from_file(str(path))
    assert list(p.first(parse("w"), 4)) == [parse("2"), parse("4"), parse("5"), parse("6")]
    assert list(p.first(parse("w*2"), 2)) == [parse("w+1")]
    bad = tmp_path / "bad.txt"
    bad.write_text("w 1,2\n")
    with pytest.raises(ValueError) as exc:
        CSequence.from_file(str(bad))
    assert str(bad) in str(exc.value) and ":1:" in str(exc.value)


def test_check_triple_and_universe_sweep():
    p = CSequence()
    rep = check_triple(parse("3"), parse("w"), parse("w*2"), p)
    assert (rep.r_ab, rep.r_ac, rep.r_bc) == (36, 36, 7)
    assert rep.ok
    assert rep.flags() == (True, True, True, True, True)
    with pytest.raises(ValueError):
        check_triple(parse("w"), parse("3"), parse("w*2"), p)
    summary = check_universe(universe(1, 3), p)
    assert summary.size == 16
    assert summary.triples == 560
    assert summary.failures == 0
    assert summary.first_failure is None


def test_shift_chain_counterexample_absent_on_samples():
    p = CSequence()
    rng = random.Random(41)
    pool = universe(2, 3)
    key = functools.cmp_to_key(compare)
    for _ in range(10):
        sample = sorted(rng.sample(pool, 12), key=key)
        assert shift_chain_counterexample(sample, p) is None


def test_providers_are_interchangeable():
    # caches are per-provider; fresh providers must agree everywhere
    rng = random.Random(3)
    pool = universe(2, 4)
    p1, p2 = CSequence(), CSequence()
    for _ in range(60):
        a, b = rng.choice(pool), rng.choice(pool)
        if compare(a, b) > 0:
            a, b = b, a
        assert rho(a, b, p1) == rho(a, b, p2)
        if compare(a, b) < 0:
            assert rhobar(a, b, p1) == rhobar(a, b, p2)
