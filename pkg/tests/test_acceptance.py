"""End-to-end acceptance checks, one verdict line per area.

Each test prints (and the terminal summary repeats) a single PASS line with
the measured numbers; a failed assert is the corresponding FAIL.
"""

import random
import time

from ordwalks.cli import main
from ordwalks.ordinal import compare, from_int, parse, universe
from ordwalks.qspace import RationalSpace, crowding_check, kernel
from ordwalks.refine import (
    Labeling,
    implication_check,
    refine,
    sigma,
    sigma_code,
    sigma_parent,
    verify_result,
)
from ordwalks.walks import CSequence, c_trace, check_universe, fiber, rho, rhobar, walk_trace


def rho_literal(x, y, provider, memo):
    """The defining recursion, spelled out with no shortcuts: the maximum of
    the crossing count, the value at the step ordinal, and the values of
    ladder elements below x against x."""
    if x == y:
        return 0
    key = (x, y)
    if key in memo:
        return memo[key]
    below = []
    step = None
    for e in provider.elements(y):
        if compare(e, x) < 0:
            below.append(e)
        else:
            step = e
            break
    vals = [len(below)]
    if step != x:
        vals.append(rho_literal(x, step, provider, memo))
    for e in below:
        vals.append(rho_literal(e, x, provider, memo))
    result = max(vals)
    memo[key] = result
    return result


def test_universe_sweep_all_triple_properties(acceptance):
    t0 = time.perf_counter()
    summary = check_universe(universe(2, 4), CSequence())
    elapsed = time.perf_counter() - t0
    assert summary.size == 125
    assert summary.triples == 317750
    assert summary.failures == 0
    assert summary.first_failure is None
    assert elapsed < 120.0
    wide = check_universe(universe(3, 2), CSequence())
    assert wide.size == 81 and wide.failures == 0
    acceptance(
        f"PASS universe sweeps: w2:4 317750 triples, w3:2 {wide.triples} triples, "
        f"0 failures, {elapsed:.1f}s"
    )


def test_finite_segment_closed_form(acceptance):
    provider = CSequence()
    t0 = time.perf_counter()
    pairs = 0
    for m in range(1, 201):
        bm = from_int(m)
        for k in range(m):
            ak = from_int(k)
            assert rho(ak, bm, provider) == 0
            assert rhobar(ak, bm, provider) == 2 * k + 3
            pairs += 1
    elapsed = time.perf_counter() - t0
    assert pairs == 20100
    assert elapsed < 1.0
    acceptance(f"PASS finite closed form: {pairs} pairs, rho=0 and rhobar=2k+3, {elapsed:.2f}s")


def test_fiber_soundness_and_completeness(acceptance):
    provider = CSequence()
    memo = {}
    rng = random.Random(314159)
    bound_top = parse("w^2*4")
    alphas = [x for x in universe(2, 4) if compare(x, bound_top) <= 0]
    pool = universe(2, 6)
    samples = []
    for _ in range(50):
        alpha = rng.choice(alphas)
        n = rng.randint(0, 6)
        members = fiber(alpha, n, provider).members
        for xi in members:
            assert rho_literal(xi, alpha, provider, memo) <= n, (xi, alpha, n)
        outside = [
            x for x in pool
            if compare(x, alpha) <= 0 and x not in set(members)
        ]
        samples.append((alpha, n, outside))
        # monotone: everything found at n stays found at n + 1
        if n < 6:
            assert set(members) <= set(fiber(alpha, n + 1, provider).members)
    nonempty = [s for s in samples if s[2]]
    assert nonempty
    checked = 0
    while checked < 10**4:
        alpha, n, outside = rng.choice(nonempty)
        xi = rng.choice(outside)
        assert rho_literal(xi, alpha, provider, memo) > n, (xi, alpha, n)
        checked += 1
    acceptance(
        "PASS fiber oracle: 50 fibers sound vs literal recursion, "
        f"{checked} non-members confirmed outside, monotone in n"
    )


def test_spot_values_hand_unrolled(acceptance):
    provider = CSequence()
    memo = {}
    w = parse("w")
    # rho(3, w), unrolled: the ladder at w starts 1, 2, 3, so two elements
    # cross below 3 and the walk lands exactly on 3; both branch walks
    # rho(1,3) and rho(2,3) descend successor ladders and cross nothing.
    t = c_trace(w, parse("3"), provider)
    assert t.count == 2 and t.below == (parse("1"), parse("2")) and t.step == parse("3")
    assert rho(parse("1"), parse("3"), provider) == 0
    assert rho(parse("2"), parse("3"), provider) == 0
    assert rho(parse("3"), w, provider) == 2
    # fiber(3, 2) = {0,1,2,3}: every xi <= 3 reaches 3 through successor
    # steps alone, so all four walk values are 0 <= 2.
    assert fiber(parse("3"), 2, provider).members == tuple(from_int(i) for i in range(4))
    # rhobar(3, w) = 2^2 * (2*4 + 1) = 36.
    assert rhobar(parse("3"), w, provider) == 36
    assert rho_literal(parse("3"), w, provider, memo) == 2

    # rho(w, w*2), unrolled: the ladder at w*2 is w+1, w+2, ... with nothing
    # below w, step w+1; the ladder at w+1 is {w}, step w, walk over.
    t2 = c_trace(parse("w*2"), w, provider)
    assert t2.count == 0 and t2.step == parse("w+1")
    assert rho(w, parse("w*2"), provider) == 0
    # fiber(w, 0) = {0, 1, w}: rho(0,w) = rho(1,w) = 0 but rho(2,w) = 1.
    assert fiber(w, 0, provider).members == (parse("0"), parse("1"), w)
    assert rho(parse("2"), w, provider) == 1
    # rhobar(w, w*2) = 2^0 * (2*3 + 1) = 7.
    assert rhobar(w, parse("w*2"), provider) == 7
    assert rho_literal(w, parse("w*2"), provider, memo) == 0

    # fiber(w, 1) adds exactly 2 (rho(2,w) = 1, rho(3,w) = 2 stays out).
    assert fiber(w, 1, provider).members == (parse("0"), parse("1"), parse("2"), w)

    # walk from w+2 down to 3: two successor steps, then the limit w.
    assert walk_trace(parse("3"), parse("w+2"), provider) == (
        parse("w+2"), parse("w+1"), w, parse("3"),
    )
    acceptance("PASS spot values: rhobar(3,w)=36, rhobar(w,w*2)=7, fiber(w,1), walk(3,w+2)")


def test_kernel_properties_window_500(acceptance):
    space = RationalSpace.canonical()
    window = list(range(500))
    rng = random.Random(2718)
    t0 = time.perf_counter()
    kernels = {}
    for depth in (1, 2, 3):
        ker = kernel(window, depth, space)
        kernels[depth] = set(ker)
        if ker:
            assert crowding_check(ker, depth, space).ok
    assert kernels[3] <= kernels[2] <= kernels[1]
    certified = 0
    attempts = 0
    while certified < 100:
        attempts += 1
        assert attempts < 5000
        depth = rng.choice((1, 2, 3))
        sub = rng.sample(window, rng.randint(20, 80))
        if crowding_check(sub, depth, space).ok:
            assert set(sub) <= kernels[depth]
            certified += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    sizes = ",".join(str(len(kernels[d])) for d in (1, 2, 3))
    acceptance(
        f"PASS kernels on 500-point window: sizes {sizes} antitone, certified, "
        f"{certified} random certified subsets contained, {elapsed:.1f}s"
    )


def test_refine_end_to_end_target_64(acceptance, capsys):
    space = RationalSpace.canonical()
    t0 = time.perf_counter()
    result = refine(space, "omega2-diagonal", target=64, window=10**5)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    assert len(result.chosen) == 65
    report = verify_result(result.chosen, space, Labeling.omega2_diagonal())
    assert report.strong_failures == ()
    assert report.shift_failures == ()
    assert report.ball_failures == ()
    assert report.coverage_failures == ()

    argv = ["refine", "--labeling", "omega2-diagonal", "--target", "64", "--window", "100000"]
    assert main(list(argv)) == 0
    first = capsys.readouterr().out
    assert main(list(argv)) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.startswith("status=ok\n")
    acceptance(
        f"PASS refine target 64, window 100000: {elapsed:.1f}s, all four verify "
        "checks clean, reruns byte-identical"
    )


def test_strong_ordering_implies_shift_on_samples(acceptance):
    labeling = Labeling.omega2_diagonal()
    rng = random.Random(777)
    for _ in range(10**3):
        members = rng.sample(range(500), 8)
        assert implication_check(members, labeling)
    acceptance("PASS ordering implication: 1000 random 8-subsets, strong form never "
               "outruns shift-increase")


def test_sigma_enumeration_exhaustive(acceptance):
    seen = {}
    for code in range(10**4):
        seq = sigma(code)
        assert seq not in seen
        seen[seq] = code
        assert sigma_code(seq) == code
        if code > 0:
            parent, last = sigma_parent(code)
            assert parent < code
            assert sigma(parent) + (last,) == seq
    acceptance("PASS sigma enumeration: bijective with parent-first order for 10^4 codes")
