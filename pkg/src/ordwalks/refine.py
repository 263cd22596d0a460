"""Backtracking construction of shift-increasing, crowding-certified prefixes.

Given an enumerated rational space and a strictly increasing ordinal labeling,
`refine` builds a prefix k_0 < k_1 < ... < k_S such that the induced distances
r(k, l) = rhobar(alpha(k), alpha(l)) grow strictly along every chain
r(k_0, m) < r(k_1, m) < ... and every step lands inside the ball dictated by a
fixed tree enumeration of finite sequences (so the chosen points crowd around
each other at every depth).  `verify_result` re-checks everything from scratch.

The tree schedule: finite sequences of naturals are coded by iterating the
Cantor pairing, code(empty) = 0 and code(s + [j]) = pair(code(s), j) + 1, which
makes every parent code smaller than its children.  Step t of the construction
must lie in the ball (chosen[parent(t)], j) where sigma_t = sigma_parent + [j].
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .ordinal import ONE, ZERO, Ordinal, _add_power, compare, from_int, from_terms, parse, render
from .qspace import RationalSpace, in_ball, kernel
from .walks import CSequence, rhobar


def pair_code(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def pair_decode(code: int) -> Tuple[int, int]:
    if code < 0:
        raise ValueError("pair codes are non-negative")
    w = (isqrt(8 * code + 1) - 1) // 2
    b = code - w * (w + 1) // 2
    return (w - b, b)


def sigma(code: int) -> Tuple[int, ...]:
    """The finite sequence with the given code; sigma(0) is empty."""
    if code < 0:
        raise ValueError("sigma codes are non-negative")
    out: List[int] = []
    while code > 0:
        code, j = pair_decode(code - 1)
        out.append(j)
    out.reverse()
    return tuple(out)


def sigma_code(seq: Sequence[int]) -> int:
    code = 0
    for j in seq:
        code = pair_code(code, j) + 1
    return code


def sigma_parent(code: int) -> Tuple[int, int]:
    """Split sigma(code) as sigma(parent) + [j]; returns (parent code, j)."""
    if code <= 0:
        raise ValueError("the empty sequence has no parent")
    return pair_decode(code - 1)


class InvalidLabeling(ValueError):
    pass


class Labeling:
    """An injective, strictly increasing map from naturals to ordinals.

    The derived pair function r(k, l) applies rhobar to the two labels taken
    in ordinal order, so it stays total even on corrupted label data (the
    verifier then reports numeric failures instead of crashing).
    """

    def __init__(self, func: Callable[[int], Ordinal], name: str, provider=None):
        self._func = func
        self.name = name
        self.provider = provider if provider is not None else CSequence()
        self._alpha: Dict[int, Ordinal] = {}

    def alpha(self, n: int) -> Ordinal:
        a = self._alpha.get(n)
        if a is None:
            a = self._func(n)
            self._alpha[n] = a
        return a

    def r(self, k: int, l: int) -> int:
        # Not memoized here: the walk provider's own caches already make a
        # repeat call cheap, and the search layers its own disposable cache on
        # top (a flat pair memo would keep growing with every discarded
        # candidate).
        if k == l:
            raise ValueError("r needs two distinct indices")
        a, b = self.alpha(k), self.alpha(l)
        if compare(a, b) > 0:
            a, b = b, a
        return rhobar(a, b, self.provider)

    def ensure_strictly_increasing(self, window: int) -> None:
        prev = None
        for n in range(window):
            cur = self.alpha(n)
            if prev is not None and compare(prev, cur) >= 0:
                raise InvalidLabeling(f"labels not strictly increasing at n={n}")
            prev = cur

    @classmethod
    def identity(cls) -> "Labeling":
        return cls(from_int, "identity")

    @classmethod
    def omega2_diagonal(cls) -> "Labeling":
        """n -> w*(a+b) + b under Cantor unpairing n = pair(a, b).

        Reading the unpaired coordinates through the diagonal sum keeps the
        sequence strictly increasing (the enumeration walks each diagonal in
        increasing b before moving to the next one) while staying cofinal in
        w^2.
        """

        def label(n: int) -> Ordinal:
            a, b = pair_decode(n)
            d = a + b
            pairs = []
            if d:
                pairs.append((ONE, d))
            if b:
                pairs.append((ZERO, b))
            return from_terms(pairs)

        return cls(label, "omega2-diagonal")

    @classmethod
    def seeded_sample(cls, max_exponent: int, seed: int) -> "Labeling":
        """A pseudo-random strictly increasing sequence below w^max_exponent."""
        if max_exponent < 1:
            raise ValueError("seeded samples need max_exponent >= 1")
        rng = random.Random(seed)
        cache: List[Ordinal] = [ZERO]

        def label(n: int) -> Ordinal:
            while len(cache) <= n:
                e = from_int(rng.randrange(max_exponent))
                cache.append(_add_power(cache[-1], e, rng.randrange(1, 4)))
            return cache[n]

        return cls(label, f"seeded-sample:{max_exponent}")

    @classmethod
    def from_mapping(cls, mapping: Dict[int, Ordinal], name: str = "mapping") -> "Labeling":
        table = {int(k): v for k, v in mapping.items()}
        if len({v.terms for v in table.values()}) != len(table):
            raise InvalidLabeling("labels must be pairwise distinct")

        def label(n: int) -> Ordinal:
            try:
                return table[n]
            except KeyError:
                raise ValueError(f"no label for index {n}") from None

        return cls(label, name)

    @classmethod
    def from_file(cls, path: str) -> "Labeling":
        """Load lines `n CNF` with indices consecutive from 0."""
        table: Dict[int, Ordinal] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise InvalidLabeling(f"{path}:{lineno}: expected 'n CNF'")
                try:
                    n = int(parts[0])
                except ValueError as exc:
                    raise InvalidLabeling(f"{path}:{lineno}: bad index") from exc
                if n in table:
                    raise InvalidLabeling(f"{path}:{lineno}: duplicate index {n}")
                table[n] = parse(parts[1])
        if sorted(table) != list(range(len(table))):
            raise InvalidLabeling(f"{path}: indices must be consecutive from 0")
        out = cls.from_mapping(table, name=path)
        out.ensure_strictly_increasing(len(table))
        return out

    @classmethod
    def from_spec(cls, spec: str, seed: int = 0) -> "Labeling":
        if spec == "identity":
            return cls.identity()
        if spec == "omega2-diagonal":
            return cls.omega2_diagonal()
        if spec.startswith("seeded-sample:"):
            try:
                k = int(spec.split(":", 1)[1])
            except ValueError as exc:
                raise InvalidLabeling(f"bad labeling spec {spec!r}") from exc
            return cls.seeded_sample(k, seed)
        return cls.from_file(spec)


@dataclass
class RefinementState:
    """A partial prefix plus the search parameters that shape its extensions."""

    window: int
    depth: int = 1
    lookahead: Optional[int] = None
    chosen: List[int] = field(default_factory=list)


def _scan(
    prefix: Tuple[int, ...],
    window: int,
    space: RationalSpace,
    labeling: Labeling,
    counters: Optional[Dict[str, int]] = None,
    rcache: Optional[Dict[int, Dict[int, int]]] = None,
    probe_cache: Optional[Dict[int, int]] = None,
) -> Iterator[int]:
    """Valid extensions of the prefix, promising candidates first.

    Candidates must exceed the last chosen index, land in the ball assigned by
    the tree schedule, and keep the chain r(k_0, m) < ... < r(k_s, m) strictly
    increasing.  The chain is checked from the top down, so a losing candidate
    usually dies on the first comparison; r values are memoized per prefix
    index in rcache (the caller discards a slot when it backtracks past it).

    Order: numeric, except that candidates whose distance to a fixed far probe
    point (the last window index) does not exceed the current top's are
    deferred behind the rest.  Such a candidate almost always dead-ends the
    next level, since chain values toward any far point must keep growing;
    deferring it saves a full-window emptiness proof while keeping the search
    complete.  Both buckets stay in numeric order, so the result is
    deterministic.
    """
    s = len(prefix)
    if s == 0:
        for m in range(window):
            if counters is not None:
                counters["tested"] += 1
            yield m
        return
    lo = prefix[-1] + 1
    r_pos, j = sigma_parent(s)
    rev = prefix[::-1]
    if rcache is None:
        rcache = {}
    if probe_cache is None:
        probe_cache = {}
    slots = [rcache.setdefault(k, {}) for k in rev]
    rfunc = labeling.r
    probe = window - 1
    top = prefix[-1]
    if top < probe:
        base = probe_cache.get(top)
        if base is None:
            base = rfunc(top, probe)
            probe_cache[top] = base
    else:
        base = None
    deferred = []
    for m in space.indices_within(prefix[r_pos], j, lo, window):
        if counters is not None:
            counters["tested"] += 1
        prev = None
        ok = True
        for k, slot in zip(rev, slots):
            v = slot.get(m)
            if v is None:
                v = rfunc(k, m)
                slot[m] = v
            if prev is not None and v >= prev:
                ok = False
                break
            prev = v
        if not ok:
            continue
        if base is not None and m < probe:
            fwd = probe_cache.get(m)
            if fwd is None:
                fwd = rfunc(m, probe)
                probe_cache[m] = fwd
            if fwd <= base:
                deferred.append(m)
                continue
        yield m
    yield from deferred


def _lookahead_score(
    m: int, pool: Sequence[int], state: RefinementState, space: RationalSpace
) -> int:
    best = None
    for w in range(state.lookahead + 1):
        near = [p for p in pool if in_ball(p, m, w, space)]
        size = len(kernel(near, state.depth, space))
        if best is None or size < best:
            best = size
    return best if best is not None else 0


def _ordered(pool: List[int], state: RefinementState, space: RationalSpace) -> List[int]:
    if state.lookahead is None:
        return pool
    return sorted(pool, key=lambda m: (-_lookahead_score(m, pool, state, space), m))


def candidates(state: RefinementState, space: RationalSpace, labeling: Labeling) -> List[int]:
    """All valid extensions of the state, in the order refine would try them.

    With no lookahead the order is numeric within two buckets: candidates
    whose distance to the far probe point grows past the current top's come
    first, the rest after (see _scan).  With lookahead D, candidates are
    scored by the smallest kernel (at the state's depth) of the candidate pool
    restricted to their own balls of radius down to 1/(D+1), largest score
    first; this prefers points whose neighbourhoods stay crowded.  Scoring is
    quadratic in the pool size, which is why it is off by default.
    """
    pool = list(_scan(tuple(state.chosen), state.window, space, labeling))
    return _ordered(pool, state, space)


@dataclass(frozen=True)
class SearchStats:
    visited: int
    tested: int
    backtracks: int

    def to_line(self) -> str:
        return f"visited={self.visited} tested={self.tested} backtracks={self.backtracks}"


class SearchExhausted(RuntimeError):
    def __init__(self, deepest: int, stats: SearchStats):
        super().__init__(
            f"search exhausted at depth {deepest} ({stats.to_line()})"
        )
        self.deepest = deepest
        self.stats = stats


@dataclass(frozen=True)
class VerifyReport:
    size: int
    depth: int
    strong_failures: Tuple[Tuple[int, int, int], ...]
    shift_failures: Tuple[Tuple[int, int, int], ...]
    ball_failures: Tuple[Tuple[int, int, int], ...]
    coverage_failures: Tuple[Tuple[int, int, int], ...]

    @property
    def failures(self) -> int:
        return (
            len(self.strong_failures)
            + len(self.shift_failures)
            + len(self.ball_failures)
            + len(self.coverage_failures)
        )

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_lines(self) -> List[str]:
        def fmt(name: str, items: Tuple[Tuple[int, int, int], ...]) -> str:
            if not items:
                return f"{name}=ok"
            head = ";".join(",".join(str(x) for x in item) for item in items[:3])
            return f"{name}=fail:{len(items)}:{head}"

        return [
            fmt("strong", self.strong_failures),
            fmt("shift", self.shift_failures),
            fmt("ball", self.ball_failures),
            fmt("coverage", self.coverage_failures),
            f"failures={self.failures}",
        ]


def verify_result(
    chosen: Sequence[int],
    space: RationalSpace,
    labeling: Labeling,
    depth: int = 1,
) -> VerifyReport:
    """Recompute every promised property of a refinement prefix from scratch.

    Checks, with all pair distances recomputed on a fresh walk provider:
      strong    r(k_a, k_c) < r(k_b, k_c) for all positions a < b < c;
      shift     r(k_a, k_b) <= r(k_b, k_c) for all positions a < b < c;
      ball      each step t >= 1 lies in the ball of its tree parent;
      coverage  for every (parent, j) whose child code fits in the prefix,
                the child point is inside that ball.
    The depth parameter is echoed into the report for the record; the ball
    radii themselves come from the tree schedule.
    """
    ks = list(chosen)
    for a, b in zip(ks, ks[1:]):
        if a >= b:
            raise ValueError("chosen indices must be strictly increasing")
    provider = CSequence()
    rv: Dict[Tuple[int, int], int] = {}

    def r(p: int, q: int) -> int:
        key = (p, q)
        got = rv.get(key)
        if got is None:
            a, b = labeling.alpha(ks[p]), labeling.alpha(ks[q])
            if compare(a, b) > 0:
                a, b = b, a
            got = rhobar(a, b, provider)
            rv[key] = got
        return got

    size = len(ks)
    strong = []
    shift = []
    for c in range(size):
        for b in range(c):
            for a in range(b):
                if not r(a, c) < r(b, c):
                    strong.append((a, b, c))
                if not r(a, b) <= r(b, c):
                    shift.append((a, b, c))
    ball = []
    for t in range(1, size):
        r_pos, j = sigma_parent(t)
        if not in_ball(ks[t], ks[r_pos], j, space):
            ball.append((t, r_pos, j))
    coverage = []
    for r_pos in range(size):
        j = 0
        while True:
            child = pair_code(r_pos, j) + 1
            if child >= size:
                break
            if not in_ball(ks[child], ks[r_pos], j, space):
                coverage.append((r_pos, j, child))
            j += 1
    return VerifyReport(
        size=size,
        depth=depth,
        strong_failures=tuple(strong),
        shift_failures=tuple(shift),
        ball_failures=tuple(ball),
        coverage_failures=tuple(coverage),
    )


def implication_check(members: Sequence[int], labeling: Labeling) -> bool:
    """True unless the strong chain condition holds while shift-increasing fails.

    The strong form is r(k_a, k_c) < r(k_b, k_c) on all position triples of the
    sorted member list; shift-increasing is r(k_a, k_b) <= r(k_b, k_c).  The
    first is supposed to imply the second, so False flags a genuine violation.
    """
    ks = sorted(set(members))
    size = len(ks)
    strong = True
    for c in range(size):
        for b in range(c):
            for a in range(b):
                if not labeling.r(ks[a], ks[c]) < labeling.r(ks[b], ks[c]):
                    strong = False
                    break
            if not strong:
                break
        if not strong:
            break
    if not strong:
        return True
    for c in range(size):
        for b in range(c):
            for a in range(b):
                if not labeling.r(ks[a], ks[b]) <= labeling.r(ks[b], ks[c]):
                    return False
    return True


@dataclass(frozen=True)
class RefinementResult:
    chosen: Tuple[int, ...]
    points: Tuple[Fraction, ...]
    labels: Tuple[Ordinal, ...]
    rvalues: Dict[Tuple[int, int], int]
    params: Dict[str, object]
    stats: SearchStats
    report: VerifyReport

    def to_lines(self) -> List[str]:
        lines = ["status=ok"]
        lines.extend(f"{key}={value}" for key, value in self.params.items())
        lines.append("chosen=" + ",".join(str(k) for k in self.chosen))
        lines.append("points=" + ",".join(str(x) for x in self.points))
        lines.append("labels=" + ",".join(render(a) for a in self.labels))
        for q in range(1, len(self.chosen)):
            for p in range(q):
                lines.append(f"r={p},{q},{self.rvalues[(p, q)]}")
        lines.extend(self.report.to_lines())
        lines.append(self.stats.to_line())
        return lines


def refine(
    space: RationalSpace,
    labeling: Union[Labeling, str],
    *,
    target: int,
    window: int,
    depth: int = 1,
    lookahead: Optional[int] = None,
    budget: int = 10**6,
    seed: int = 0,
) -> RefinementResult:
    """Depth-first search for a prefix of target + 1 points meeting all
    constraints; deterministic for fixed arguments.

    The budget caps how many placements (node visits) the search may make
    before giving up with SearchExhausted; exhaustion of the root level (the
    window is simply too small) raises the same error.
    """
    if target < 0:
        raise ValueError("target must be non-negative")
    if window <= 0:
        raise ValueError("window must be positive")
    if budget <= 0:
        raise ValueError("budget must be positive")
    if isinstance(labeling, str):
        labeling = Labeling.from_spec(labeling, seed=seed)
    if space.size is not None and window > space.size:
        raise ValueError(f"window {window} exceeds the space size {space.size}")
    labeling.ensure_strictly_increasing(window)

    counters = {"visited": 0, "tested": 0, "backtracks": 0}
    rcache: Dict[int, Dict[int, int]] = {}
    probe_cache: Dict[int, int] = {}

    def level_iter(prefix: Tuple[int, ...]) -> Iterator[int]:
        if lookahead is None:
            return _scan(prefix, window, space, labeling, counters, rcache, probe_cache)
        state = RefinementState(
            window=window, depth=depth, lookahead=lookahead, chosen=list(prefix)
        )
        pool = list(_scan(prefix, window, space, labeling, counters, rcache, probe_cache))
        return iter(_ordered(pool, state, space))

    def freeze() -> SearchStats:
        return SearchStats(
            visited=counters["visited"],
            tested=counters["tested"],
            backtracks=counters["backtracks"],
        )

    chosen: List[int] = []
    iters: List[Iterator[int]] = [level_iter(())]
    deepest = 0
    while len(chosen) <= target:
        m = next(iters[-1], None)
        if m is None:
            iters.pop()
            if not chosen:
                raise SearchExhausted(deepest, freeze())
            rcache.pop(chosen.pop(), None)
            counters["backtracks"] += 1
            continue
        chosen.append(m)
        counters["visited"] += 1
        if len(chosen) > deepest:
            deepest = len(chosen)
        if len(chosen) <= target:
            if counters["visited"] >= budget:
                raise SearchExhausted(deepest, freeze())
            iters.append(level_iter(tuple(chosen)))

    stats = freeze()
    report = verify_result(chosen, space, labeling, depth)
    rvalues = {
        (p, q): labeling.r(chosen[p], chosen[q])
        for q in range(1, len(chosen))
        for p in range(q)
    }
    params: Dict[str, object] = {
        "labeling": labeling.name,
        "space": space.name,
        "target": target,
        "window": window,
        "depth": depth,
        "budget": budget,
        "seed": seed,
    }
    if lookahead is not None:
        params["lookahead"] = lookahead
    return RefinementResult(
        chosen=tuple(chosen),
        points=tuple(space.point(k) for k in chosen),
        labels=tuple(labeling.alpha(k) for k in chosen),
        rvalues=rvalues,
        params=params,
        stats=stats,
        report=report,
    )
