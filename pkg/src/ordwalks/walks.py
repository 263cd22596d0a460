"""Walks along C-sequences and the walk distance functions they induce.

Every ordinal beta > 0 gets a ladder C_beta: for a successor it is the
single-element set {beta - 1} (never overridable), for a limit it is the
strictly increasing canonical sequence from `ordinal.fund_seq`, optionally
replaced by a finite explicit prefix plus an optional canonical tail.

The walk from beta down to alpha repeatedly steps to the least ladder element
that is >= alpha.  `rho` is the maximal ladder crossing count seen anywhere in
that recursion; `rhobar` packs rho together with a fiber count into a single
odd-times-power-of-two code with strong non-archimedean properties, checked
triple by triple via `check_triple` / `check_universe`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from .ordinal import Ordinal, compare, fund_seq, parse, render


class CofinalityError(ValueError):
    """An override ladder ran out below the walk target (it is not cofinal)."""


class CSequence:
    """Ladder provider: canonical fundamental sequences plus overrides.

    Overrides apply to limit ordinals only and consist of a finite strictly
    increasing prefix of ordinals below the key; with ``canonical_tail`` the
    prefix is continued by the canonical sequence elements exceeding it,
    otherwise the ladder is just the finite prefix (walks that need to pass it
    raise CofinalityError).  Instances are immutable; clients may share one
    provider freely, and repeated queries always agree.
    """

    def __init__(self, overrides: Optional[Dict[Ordinal, tuple]] = None):
        self._overrides: Dict[Ordinal, Tuple[Tuple[Ordinal, ...], bool]] = {}
        if overrides:
            for key, (prefix, tail) in overrides.items():
                prefix = tuple(prefix)
                if not key.is_limit:
                    raise ValueError(f"only limit ordinals may be overridden: {key}")
                last = None
                for elem in prefix:
                    if elem >= key:
                        raise ValueError(f"ladder element {elem} not below {key}")
                    if last is not None and elem <= last:
                        raise ValueError(f"ladder for {key} is not strictly increasing")
                    last = elem
                self._overrides[key] = (prefix, bool(tail))
        # get-or-compute caches; values are pure functions of the arguments,
        # so a racing double computation is harmless.
        self._rho: Dict[tuple, int] = {}
        self._fiber: Dict[tuple, "Fiber"] = {}
        self._fiber_size: Dict[tuple, int] = {}
        # ladder prefixes materialized so far, per limit ordinal, paired with
        # the live generator that extends them on demand
        self._streams: Dict[Ordinal, Tuple[List[Ordinal], Iterator[Ordinal]]] = {}

    @classmethod
    def from_file(cls, path: str) -> "CSequence":
        """Load overrides, one per line: ``CNF ":" CNF ("," CNF)* [";canonical"]``."""
        overrides: Dict[Ordinal, tuple] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    head, _, rest = line.partition(":")
                    if not rest:
                        raise ValueError("missing ':'")
                    tail = False
                    if ";" in rest:
                        rest, _, marker = rest.partition(";")
                        if marker.strip() != "canonical":
                            raise ValueError(f"unknown marker {marker.strip()!r}")
                        tail = True
                    key = parse(head.strip())
                    prefix = tuple(parse(p.strip()) for p in rest.split(","))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from exc
                if key in overrides:
                    raise ValueError(f"{path}:{lineno}: duplicate override for {key}")
                overrides[key] = (prefix, tail)
        return cls(overrides)

    def elements(self, beta: Ordinal) -> Iterator[Ordinal]:
        """The ladder C_beta in strictly increasing order.

        Limit ladders are materialized lazily and kept, so walking the same
        ordinal twice reuses the stored prefix instead of regenerating it.
        """
        if beta.is_zero:
            raise ValueError("the zero ordinal has no ladder")
        if beta.is_successor:
            yield beta.predecessor()
            return
        state = self._streams.get(beta)
        if state is None:
            state = ([], self._raw_elements(beta))
            self._streams[beta] = state
        cached, raw = state
        i = 0
        while True:
            if i == len(cached):
                try:
                    cached.append(next(raw))
                except StopIteration:
                    return
            yield cached[i]
            i += 1

    def _raw_elements(self, beta: Ordinal) -> Iterator[Ordinal]:
        override = self._overrides.get(beta)
        if override is None:
            n = 0
            while True:
                yield fund_seq(beta, n)
                n += 1
        else:
            prefix, tail = override
            yield from prefix
            if tail:
                last = prefix[-1] if prefix else None
                n = 0
                while True:
                    v = fund_seq(beta, n)
                    if last is None or v > last:
                        yield v
                    n += 1

    def first(self, beta: Ordinal, count: int) -> List[Ordinal]:
        """Up to ``count`` initial ladder elements (fewer only for finite overrides)."""
        if beta.is_successor:
            return [beta.predecessor()]
        return list(islice(self.elements(beta), count))


class CTrace(NamedTuple):
    """One walk step at beta relative to alpha: crossing count, the ladder
    elements below alpha, and the step min(C_beta minus alpha)."""

    count: int
    below: Tuple[Ordinal, ...]
    step: Ordinal


def c_trace(beta: Ordinal, alpha: Ordinal, provider: CSequence) -> CTrace:
    if compare(alpha, beta) >= 0:
        raise ValueError("c_trace requires alpha < beta")
    below: List[Ordinal] = []
    for elem in provider.elements(beta):
        if compare(elem, alpha) < 0:
            below.append(elem)
        else:
            return CTrace(len(below), tuple(below), elem)
    raise CofinalityError(f"ladder for {beta} is exhausted below {alpha}")


def rho(alpha: Ordinal, beta: Ordinal, provider: CSequence) -> int:
    """The walk count function: max of |C_beta ∩ alpha|, rho at the walk step,
    and rho(xi, alpha) over ladder elements xi below alpha; rho(a, a) = 0.

    Successor runs are stripped wholesale (each successor step crosses
    nothing), and the remaining walk spine is evaluated iteratively with
    memoization, so repeated queries through one provider are cheap.
    """
    c = compare(alpha, beta)
    if c > 0:
        raise ValueError("rho requires alpha <= beta")
    if c == 0:
        return 0
    memo = provider._rho
    spine: List[Tuple[Ordinal, int]] = []
    b = beta
    while True:
        lam = b.limit_part()
        if compare(alpha, lam) >= 0:
            # only successor steps remain between b and alpha
            val = 0
            break
        b = lam
        hit = memo.get((alpha, b))
        if hit is not None:
            val = hit
            break
        tr = c_trace(b, alpha, provider)
        local = tr.count
        for xi in tr.below:
            r = rho(xi, alpha, provider)
            if r > local:
                local = r
        spine.append((b, local))
        if compare(tr.step, alpha) == 0:
            val = 0
            break
        b = tr.step
    for key, local in reversed(spine):
        if local > val:
            val = local
        memo[(alpha, key)] = val
    return val


def walk_trace(alpha: Ordinal, beta: Ordinal, provider: CSequence) -> Tuple[Ordinal, ...]:
    """The full walk from beta down to alpha, inclusive on both ends."""
    if compare(alpha, beta) > 0:
        raise ValueError("walk_trace requires alpha <= beta")
    trace = [beta]
    cur = beta
    while compare(cur, alpha) != 0:
        cur = c_trace(cur, alpha, provider).step
        trace.append(cur)
    return tuple(trace)


@dataclass(frozen=True)
class Fiber:
    """All xi <= alpha with rho(xi, alpha) <= bound, sorted increasingly."""

    alpha: Ordinal
    bound: int
    members: Tuple[Ordinal, ...]


def _fiber_candidates(alpha: Ordinal, bound: int, provider: CSequence) -> set:
    # Superset of the fiber: close {alpha} under "first bound+1 ladder
    # elements".  Any xi with rho(xi, alpha) <= bound has at most bound ladder
    # elements of each visited ordinal below it, so the walk towards xi stays
    # inside this set.
    seen = {alpha}
    stack = [alpha]
    while stack:
        v = stack.pop()
        if v.is_zero:
            continue
        for child in provider.first(v, bound + 1):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def fiber(alpha: Ordinal, bound: int, provider: CSequence) -> Fiber:
    if bound < 0:
        raise ValueError("bound must be non-negative")
    key = (alpha, bound)
    cached = provider._fiber.get(key)
    if cached is not None:
        return cached
    candidates = _fiber_candidates(alpha, bound, provider)
    members = sorted(x for x in candidates if rho(x, alpha, provider) <= bound)
    result = Fiber(alpha, bound, tuple(members))
    provider._fiber[key] = result
    provider._fiber_size[key] = len(members)
    return result


def _fiber_size(alpha: Ordinal, bound: int, provider: CSequence) -> int:
    key = (alpha, bound)
    cached = provider._fiber_size.get(key)
    if cached is not None:
        return cached
    candidates = _fiber_candidates(alpha, bound, provider)
    size = sum(1 for x in candidates if rho(x, alpha, provider) <= bound)
    provider._fiber_size[key] = size
    return size


def rhobar(alpha: Ordinal, beta: Ordinal, provider: CSequence) -> int:
    """2^rho(alpha,beta) * (2*|fiber(alpha, rho(alpha,beta))| + 1).

    Always an odd number times a power of two, and at least 3 (the fiber
    contains alpha itself).
    """
    if compare(alpha, beta) >= 0:
        raise ValueError("rhobar requires alpha < beta")
    e = rho(alpha, beta, provider)
    return (1 << e) * (2 * _fiber_size(alpha, e, provider) + 1)


@dataclass(frozen=True)
class TripleReport:
    """rhobar values and the five pairwise checks for one triple a < b < c.

    distinct   rhobar(a,c) != rhobar(b,c)
    bound_ac   rhobar(a,c) <= max(rhobar(a,b), rhobar(b,c))
    bound_ab   rhobar(a,b) <= max(rhobar(a,c), rhobar(b,c))
    eq_ac      rhobar(a,c) >  rhobar(b,c) implies rhobar(a,b) == rhobar(a,c)
    eq_ab      rhobar(a,b) >  rhobar(b,c) implies rhobar(a,c) == rhobar(a,b)
    """

    a: Ordinal
    b: Ordinal
    c: Ordinal
    r_ab: int
    r_ac: int
    r_bc: int
    distinct: bool
    bound_ac: bool
    bound_ab: bool
    eq_ac: bool
    eq_ab: bool

    @property
    def ok(self) -> bool:
        return self.distinct and self.bound_ac and self.bound_ab and self.eq_ac and self.eq_ab

    def flags(self) -> Tuple[bool, bool, bool, bool, bool]:
        return (self.distinct, self.bound_ac, self.bound_ab, self.eq_ac, self.eq_ab)

    def to_line(self) -> str:
        bits = ",".join("1" if f else "0" for f in self.flags())
        return (
            f"a={render(self.a)} b={render(self.b)} c={render(self.c)} "
            f"rab={self.r_ab} rac={self.r_ac} rbc={self.r_bc} flags={bits}"
        )


def check_triple(a: Ordinal, b: Ordinal, c: Ordinal, provider: CSequence) -> TripleReport:
    if not (compare(a, b) < 0 and compare(b, c) < 0):
        raise ValueError("check_triple requires a < b < c")
    r_ab = rhobar(a, b, provider)
    r_ac = rhobar(a, c, provider)
    r_bc = rhobar(b, c, provider)
    return TripleReport(
        a=a,
        b=b,
        c=c,
        r_ab=r_ab,
        r_ac=r_ac,
        r_bc=r_bc,
        distinct=r_ac != r_bc,
        bound_ac=r_ac <= max(r_ab, r_bc),
        bound_ab=r_ab <= max(r_ac, r_bc),
        eq_ac=r_ac <= r_bc or r_ab == r_ac,
        eq_ab=r_ab <= r_bc or r_ac == r_ab,
    )


@dataclass(frozen=True)
class UniverseSummary:
    size: int
    triples: int
    failures: int
    first_failure: Optional[TripleReport]


def check_universe(
    ordinals: Iterable[Ordinal],
    provider: CSequence,
    on_triple=None,
) -> UniverseSummary:
    """Run check_triple over every increasing triple of a sorted universe.

    The summary is deterministic: triples are visited in lexicographic index
    order and the first failing report (if any) is retained.  ``on_triple``
    receives every report, e.g. for record emission.
    """
    elems = list(ordinals)
    for x, y in zip(elems, elems[1:]):
        if compare(x, y) >= 0:
            raise ValueError("universe must be sorted and duplicate-free")
    triples = 0
    failures = 0
    first: Optional[TripleReport] = None
    for a, b, c in combinations(elems, 3):
        report = check_triple(a, b, c, provider)
        triples += 1
        if not report.ok:
            failures += 1
            if first is None:
                first = report
        if on_triple is not None:
            on_triple(report)
    return UniverseSummary(len(elems), triples, failures, first)


def shift_chain_counterexample(
    ordinals: Iterable[Ordinal], provider: CSequence
) -> Optional[tuple]:
    """Search a sorted universe for a forbidden crowded chain.

    Looks for a base k and a chain i_0 < ... < i_(u+1) with rhobar(k, i_v) = u
    for every v and rhobar(i_v, i_(v+1)) < u for consecutive links.  Such a
    configuration would contradict the pairwise distinctness and bound
    properties, so the search must come up empty; returns the witness tuple
    (base, u, chain) if one is ever found.
    """
    elems = list(ordinals)
    for idx, base in enumerate(elems):
        groups: Dict[int, List[Ordinal]] = {}
        for other in elems[idx + 1 :]:
            groups.setdefault(rhobar(base, other, provider), []).append(other)
        for u, members in groups.items():
            need = u + 2
            if len(members) < need:
                continue
            chain = _grow_chain([], members, need, u, provider)
            if chain is not None:
                return (base, u, tuple(chain))
    return None


def _grow_chain(chain, pool, need, u, provider):
    if len(chain) == need:
        return chain
    start = 0 if not chain else pool.index(chain[-1]) + 1
    for nxt in pool[start:]:
        if chain and rhobar(chain[-1], nxt, provider) >= u:
            continue
        got = _grow_chain(chain + [nxt], pool, need, u, provider)
        if got is not None:
            return got
    return None
