"""Exact rational point enumerations, balls, and crowding kernels.

Points are `fractions.Fraction` values indexed by naturals; the metric is the
absolute difference, computed exactly (no floating point anywhere).  The
canonical space enumerates the reduced fractions in [0, 1] ordered by
denominator then numerator: 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...

Balls are strict: index n lies in the ball (i, j) when d(x_n, x_i) < 1/(j+1).
A set is crowded to depth J when every member has, for each j <= J, another
member strictly inside its (i, j) ball; `kernel` extracts the largest crowded
subset by iteratively discarding members without witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union


class RationalSpace:
    """An injective enumeration n -> rational point with exact distances."""

    def __init__(self, points=None, mapping=None, name="canonical"):
        self.name = name
        self._mapping: Optional[Dict[int, Fraction]] = None
        if mapping is not None:
            self._mapping = dict(mapping)
            if len(set(self._mapping.values())) != len(self._mapping):
                raise ValueError("points must be pairwise distinct")
            self._points: List[Fraction] = []
            self._next_q = None
        elif points is not None:
            self._points = list(points)
            if len(set(self._points)) != len(self._points):
                raise ValueError("points must be pairwise distinct")
            self._next_q = None
        else:
            self._points = [Fraction(0), Fraction(1)]
            self._next_q = 2
        # parallel numerator/denominator arrays for the integer scan path
        self._nums = [x.numerator for x in self._points]
        self._dens = [x.denominator for x in self._points]

    @classmethod
    def canonical(cls) -> "RationalSpace":
        return cls()

    @classmethod
    def from_points(cls, points: Iterable, name="explicit") -> "RationalSpace":
        return cls(points=[Fraction(p) for p in points], name=name)

    @classmethod
    def from_mapping(cls, mapping: Dict[int, Fraction], name="mapping") -> "RationalSpace":
        return cls(mapping={int(k): Fraction(v) for k, v in mapping.items()}, name=name)

    @classmethod
    def from_file(cls, path: str) -> "RationalSpace":
        """Load a space file: header ``points <count>`` then one rational per line."""
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line.strip() for line in fh if line.strip()]
        if not lines or not lines[0].startswith("points "):
            raise ValueError(f"{path}: expected 'points <count>' header")
        try:
            count = int(lines[0].split()[1])
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{path}: bad count in header") from exc
        body = lines[1:]
        if len(body) != count:
            raise ValueError(f"{path}: header says {count} points, found {len(body)}")
        try:
            points = [Fraction(text) for text in body]
        except ValueError as exc:
            raise ValueError(f"{path}: bad rational: {exc}") from exc
        try:
            return cls(points=points, name=path)
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc

    @property
    def size(self) -> Optional[int]:
        """Number of points, or None for the unbounded canonical enumeration."""
        if self._mapping is not None:
            return len(self._mapping)
        if self._next_q is None:
            return len(self._points)
        return None

    def point(self, n: int) -> Fraction:
        if self._mapping is not None:
            try:
                return self._mapping[n]
            except KeyError:
                raise ValueError(f"no point with index {n}") from None
        if n < 0:
            raise ValueError("point indices are non-negative")
        if self._next_q is not None:
            while len(self._points) <= n:
                q = self._next_q
                for p in range(1, q):
                    if gcd(p, q) == 1:
                        self._points.append(Fraction(p, q))
                        self._nums.append(p)
                        self._dens.append(q)
                self._next_q = q + 1
        if n >= len(self._points):
            raise ValueError(f"no point with index {n}")
        return self._points[n]

    def distance(self, i: int, k: int) -> Fraction:
        return abs(self.point(i) - self.point(k))

    def indices_within(self, i: int, j: int, start: int, stop: int) -> Iterator[int]:
        """Indices m in [start, stop) strictly within 1/(j+1) of point i, ascending.

        Same membership as in_ball, evaluated with integer cross products so
        wide scans stay cheap.  Only enumerated spaces support this; spaces
        built from sparse index mappings do not.
        """
        if j < 0:
            raise ValueError("ball depth must be non-negative")
        if self._mapping is not None:
            raise ValueError("index scans need an enumerated space")
        if stop > start:
            self.point(stop - 1)
        pi = self._nums[i]
        qi = self._dens[i]
        scale = j + 1
        nums = self._nums
        dens = self._dens
        for m in range(start, stop):
            qm = dens[m]
            if abs(nums[m] * qi - pi * qm) * scale < qm * qi:
                yield m


def in_ball(n: int, i: int, j: int, space: RationalSpace) -> bool:
    """Strictly within radius 1/(j+1) of point i."""
    if j < 0:
        raise ValueError("ball depth must be non-negative")
    return space.distance(n, i) * (j + 1) < 1


def ball_members(i: int, j: int, window: int, space: RationalSpace) -> Tuple[int, ...]:
    return tuple(n for n in range(window) if in_ball(n, i, j, space))


@dataclass(frozen=True)
class CrowdingCertificate:
    members: Tuple[int, ...]
    depth: int
    witnesses: Dict[Tuple[int, int], int]

    @property
    def ok(self) -> bool:
        return True


@dataclass(frozen=True)
class CrowdingFailure:
    i: int
    j: int

    @property
    def ok(self) -> bool:
        return False


def crowding_check(
    members: Iterable[int], depth: int, space: RationalSpace
) -> Union[CrowdingCertificate, CrowdingFailure]:
    """Certify that every member has, for each j <= depth, a distinct member
    strictly inside its (i, j) ball; witnesses are the least such indices.
    On failure returns the lexicographically least (i, j) lacking a witness.
    """
    pool = sorted(set(members))
    if not pool:
        raise ValueError("crowding_check requires a non-empty set")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    witnesses: Dict[Tuple[int, int], int] = {}
    for i in pool:
        missing = list(range(depth + 1))
        xi = space.point(i)
        for n in pool:
            if n == i:
                continue
            d = abs(space.point(n) - xi)
            still = []
            for j in missing:
                if d * (j + 1) < 1:
                    witnesses[(i, j)] = n
                else:
                    still.append(j)
            missing = still
            if not missing:
                break
        if missing:
            return CrowdingFailure(i, missing[0])
    return CrowdingCertificate(tuple(pool), depth, witnesses)


def kernel(members: Iterable[int], depth: int, space: RationalSpace) -> Tuple[int, ...]:
    """The largest subset passing crowding_check at the given depth.

    Computed by repeatedly discarding every point whose nearest surviving
    neighbour is not strictly within 1/(depth+1); witnesses for shallower j
    come for free since those balls are larger.  The result is independent of
    removal order, and empty when nothing crowds.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    pool = sorted(set(members))
    # order survivors by value; the nearest neighbour is always adjacent
    by_value = sorted(pool, key=space.point)
    while by_value:
        keep = []
        removed = False
        for pos, idx in enumerate(by_value):
            x = space.point(idx)
            ok = False
            if pos > 0 and (x - space.point(by_value[pos - 1])) * (depth + 1) < 1:
                ok = True
            elif pos + 1 < len(by_value) and (
                space.point(by_value[pos + 1]) - x
            ) * (depth + 1) < 1:
                ok = True
            if ok:
                keep.append(idx)
            else:
                removed = True
        if not removed:
            break
        by_value = keep
    return tuple(sorted(by_value))
