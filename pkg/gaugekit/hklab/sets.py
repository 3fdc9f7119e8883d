"""
Cantor-type sets built by repeated removal of open centre intervals, and
the small family of exact point sets the variation tests run against.
"""

import bisect
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import List, Optional, Sequence, Set, Tuple

from .conf import lab_setting
from .core import ZERO, Iv, RatLike, ValueWithError, parse_rat
from .exceptions import (DomainError, NotInComplementError, UndecidedMembershipError,
                         UnknownNameError, UnsupportedInstanceError)

logger = logging.getLogger(__name__)


class SetKind(str, Enum):
    TERNARY_CANTOR = 'ternary_cantor'
    REFLECTED_CANTOR = 'reflected_cantor'
    SVC = 'svc'


class RemovalRule:

    """
        Length of the open centre interval removed from a cell of a given
        depth. ``self_similar`` rules remove the same fraction from every
        cell, which makes the relative position of a point inside its cell
        a finite-state quantity for rational points.
    """

    name: str = 'rule'
    self_similar: bool = False

    def gap(self, cell: Iv, depth: int) -> Fraction:
        raise NotImplementedError

    def removed_at(self, depth: int, cell_length: Fraction, count: int) -> Fraction:
        raise NotImplementedError


class MiddleThirds(RemovalRule):
    name = 'middle-thirds'
    self_similar = True

    def gap(self, cell: Iv, depth: int) -> Fraction:
        return cell.length / 3

    def removed_at(self, depth: int, cell_length: Fraction, count: int) -> Fraction:
        return count * cell_length / 3


class CenterGap(RemovalRule):

    """
        Step n removes an open interval of length 4^-n from the centre of
        every remaining cell
    """

    name = 'center-4^-n'

    def gap(self, cell: Iv, depth: int) -> Fraction:
        return Fraction(1, 4 ** (depth + 1))

    def removed_at(self, depth: int, cell_length: Fraction, count: int) -> Fraction:
        return count * Fraction(1, 4 ** (depth + 1))


def children(cell: Iv, gap: Fraction) -> Tuple[Iv, Iv]:
    mid: Fraction = cell.midpoint
    return Iv(cell.lo, mid - gap / 2), Iv(mid + gap / 2, cell.hi)


class PointSet:

    """
        Exact membership predicate with a tag oracle

        ``points_in`` lists set points inside an interval, nearest to its
        midpoint first; ``cells`` covers the set by closed intervals that
        shrink as the depth grows.
    """

    #No class-level default: dataclass subclasses would inherit it as a field default
    name: str
    is_null: bool = True

    def contains(self, x: Fraction) -> bool:
        raise NotImplementedError

    def __contains__(self, x: RatLike) -> bool:
        return self.contains(parse_rat(x))

    def points_in(self, interval: Iv) -> List[Fraction]:
        return []

    def cells(self, depth: int) -> List[Iv]:
        raise UnsupportedInstanceError(f"set {self.name} has no interval cover")

    def restricted(self, interval: Iv) -> 'PointSet':
        return Restricted(self, interval)

    def __str__(self) -> str:
        return self.name


def _nearest_first(points: Sequence[Fraction], interval: Iv) -> List[Fraction]:
    mid: Fraction = interval.midpoint
    return sorted(set(points), key=lambda p: (abs(p - mid), p))


class LocationKind(str, Enum):
    ENDPOINT = 'endpoint'
    CYCLE = 'cycle'
    GAP = 'gap'
    OUTSIDE = 'outside'
    UNDECIDED = 'undecided'


@dataclass(frozen=True)
class Location:

    """
        Result of descending the construction towards a point

        ``interval`` is the removed gap for GAP, and the last cell that
        still contains the point otherwise.
    """

    kind: LocationKind
    interval: Optional[Iv]
    depth: int


@dataclass(frozen=True)
class ComponentRef:
    interval: Iv
    depth_created: int


@dataclass(frozen=True)
class GeneratedSet(PointSet):

    """
        Limit set of a removal construction started from one or more root
        cells inside ``base``
    """

    name: str
    kind: SetKind
    base: Iv
    roots: Tuple[Iv, ...]
    rule: RemovalRule

    @property
    def is_null(self) -> bool:
        return self.kind is not SetKind.SVC

    def contains(self, x: Fraction) -> bool:
        return member(self, x)

    def points_in(self, interval: Iv) -> List[Fraction]:
        return points_in(self, interval)

    def cells(self, depth: int) -> List[Iv]:
        return list(realize(self, depth))


CANTOR: GeneratedSet = GeneratedSet('C', SetKind.TERNARY_CANTOR, Iv(0, 1), (Iv(0, 1),), MiddleThirds())
REFLECTED_CANTOR: GeneratedSet = GeneratedSet(
    'D', SetKind.REFLECTED_CANTOR, Iv(-1, 1), (Iv(-1, 0), Iv(0, 1)), MiddleThirds()
)
SVC: GeneratedSet = GeneratedSet('S', SetKind.SVC, Iv(0, 1), (Iv(0, 1),), CenterGap())


@lru_cache(maxsize=256)
def realize(generated: GeneratedSet, depth: int) -> Tuple[Iv, ...]:

    """
        Cells of the construction after ``depth`` removal steps

        :param generated: Set to realize
        :type generated: GeneratedSet
        :param depth: Number of removal steps
        :type depth: int

        :return: Sorted closed cells; the two halves of the reflected set
            touch at 0
        :rtype: Tuple[Iv, ...]
    """

    if depth < 0:
        raise DomainError(f"negative depth {depth}", witness=depth)
    if depth == 0:
        return generated.roots

    previous: Tuple[Iv, ...] = realize(generated, depth - 1)
    cells: List[Iv] = []
    for cell in previous:
        cells.extend(children(cell, generated.rule.gap(cell, depth - 1)))
    return tuple(cells)


def measure_at(generated: GeneratedSet, depth: int) -> Fraction:

    """
        Exact total length of realize(generated, depth)

        :param generated: Set to measure
        :type generated: GeneratedSet
        :param depth: Number of removal steps
        :type depth: int

        :return: Total length of the cells
        :rtype: Fraction
    """

    if depth < 0:
        raise DomainError(f"negative depth {depth}", witness=depth)

    measure: Fraction = sum((root.length for root in generated.roots), ZERO)
    cell_length: Fraction = generated.roots[0].length
    count: int = len(generated.roots)
    for step in range(depth):
        removed: Fraction = generated.rule.removed_at(step, cell_length, count)
        measure -= removed
        cell_length = (cell_length - removed / count) / 2
        count *= 2
    return measure


def locate(generated: GeneratedSet, x: Fraction, cap: Optional[int] = None) -> Location:

    """
        Descend the construction towards x until x is an endpoint of a
        cell, falls into a removed gap, or (for self-similar rules) its
        relative position inside the cell repeats

        :param generated: Set to descend
        :type generated: GeneratedSet
        :param x: Point to locate
        :type x: Fraction
        :param cap: Depth cap of non self-similar rules
        :type cap: int

        :return: Where the descent ended
        :rtype: Location
    """

    x = parse_rat(x)
    depth_cap: int = lab_setting('DISTANCE_DEPTH_CAP') if cap is None else cap

    cell: Optional[Iv] = next((root for root in generated.roots if root.contains(x)), None)
    if cell is None:
        return Location(LocationKind.OUTSIDE, None, 0)

    seen: Set[Fraction] = set()
    depth: int = 0
    while True:
        if x == cell.lo or x == cell.hi:
            return Location(LocationKind.ENDPOINT, cell, depth)

        if generated.rule.self_similar:
            position: Fraction = (x - cell.lo) / cell.length
            if position in seen:
                return Location(LocationKind.CYCLE, cell, depth)
            seen.add(position)
        elif depth >= depth_cap:
            logger.debug("descent of %s towards %s stopped at depth %d", generated.name, x, depth)
            return Location(LocationKind.UNDECIDED, cell, depth)

        left, right = children(cell, generated.rule.gap(cell, depth))
        depth += 1
        if x <= left.hi:
            cell = left
        elif x >= right.lo:
            cell = right
        else:
            return Location(LocationKind.GAP, Iv(left.hi, right.lo), depth)


def member(generated: GeneratedSet, x: RatLike) -> bool:

    """
        Exact membership of x in the limit set

        :param generated: Set to query
        :type generated: GeneratedSet
        :param x: Point of the base interval
        :type x: Fraction

        :return: True iff x survives every removal step
        :rtype: bool
    """

    x = parse_rat(x)
    if not generated.base.contains(x):
        raise DomainError(f"{x} is outside the base {generated.base} of {generated.name}", witness=x)

    location: Location = locate(generated, x)
    if location.kind is LocationKind.UNDECIDED:
        raise UndecidedMembershipError(
            f"membership of {x} in {generated.name} undecided after {location.depth} steps", witness=x
        )
    return location.kind in (LocationKind.ENDPOINT, LocationKind.CYCLE)


def distance(generated: GeneratedSet, x: RatLike) -> ValueWithError:

    """
        Distance from x to the limit set

        Gap endpoints survive every step, so inside a gap the distance is
        the distance to the nearer gap endpoint. Past the depth cap the
        result is the inexact bracket [0, distance to the cell boundary].

        :param generated: Set to query
        :type generated: GeneratedSet
        :param x: Any rational point
        :type x: Fraction

        :return: Exact distance, or a bounds-only value
        :rtype: ValueWithError
    """

    x = parse_rat(x)
    if x < generated.base.lo:
        return ValueWithError(generated.base.lo - x)
    if x > generated.base.hi:
        return ValueWithError(x - generated.base.hi)

    location: Location = locate(generated, x)
    if location.kind in (LocationKind.ENDPOINT, LocationKind.CYCLE):
        return ValueWithError(ZERO)
    if location.kind is LocationKind.GAP:
        return ValueWithError(min(x - location.interval.lo, location.interval.hi - x))

    upper: Fraction = min(x - location.interval.lo, location.interval.hi - x)
    logger.warning("distance from %s to %s capped at depth %d, bounds [0, %s]",
                   x, generated.name, location.depth, upper)
    return ValueWithError(upper / 2, upper / 2)


def complement_component(generated: GeneratedSet, x: RatLike) -> ComponentRef:

    """
        Maximal open interval around x that misses the limit set

        :param generated: Set to query
        :type generated: GeneratedSet
        :param x: Point of the base interval outside the set
        :type x: Fraction

        :return: The removed gap containing x and the step that removed it
        :rtype: ComponentRef
    """

    x = parse_rat(x)
    if not generated.base.contains(x):
        raise DomainError(f"{x} is outside the base {generated.base} of {generated.name}", witness=x)

    location: Location = locate(generated, x)
    if location.kind is LocationKind.GAP:
        return ComponentRef(location.interval, location.depth)
    if location.kind is LocationKind.UNDECIDED:
        raise UndecidedMembershipError(f"cannot place {x} relative to {generated.name}", witness=x)
    raise NotInComplementError(f"{x} belongs to {generated.name}", witness=x)


def points_in(generated: GeneratedSet, interval: Iv, limit: int = 8) -> List[Fraction]:

    """
        Cell endpoints of the construction that fall inside the interval

        Descends one depth at a time through the cells meeting the
        interval until some endpoint lands inside it. When none does, at
        most one cell meets the interval, so the frontier stays small.

        :param generated: Set to query
        :type generated: GeneratedSet
        :param interval: Closed interval to search
        :type interval: Iv
        :param limit: Maximum number of points returned
        :type limit: int

        :return: Set points nearest to the interval midpoint first
        :rtype: List[Fraction]
    """

    if interval.length == 0:
        x: Fraction = interval.lo
        if generated.base.contains(x) and locate(generated, x).kind in (LocationKind.ENDPOINT, LocationKind.CYCLE):
            return [x]
        return []

    depth_cap: int = lab_setting('DISTANCE_DEPTH_CAP')
    frontier: List[Iv] = [cell for cell in generated.roots if cell.intersects(interval)]
    depth: int = 0
    while frontier and depth <= depth_cap:
        found: List[Fraction] = [
            end for cell in frontier for end in (cell.lo, cell.hi) if interval.contains(end)
        ]
        if found:
            return _nearest_first(found, interval)[:limit]
        frontier = [
            child
            for cell in frontier
            for child in children(cell, generated.rule.gap(cell, depth))
            if child.intersects(interval)
        ]
        depth += 1

    logger.debug("no point of %s found in %s", generated.name, interval)
    return []


@dataclass(frozen=True)
class EmptySet(PointSet):
    name: str = 'empty'

    def contains(self, x: Fraction) -> bool:
        return False

    def cells(self, depth: int) -> List[Iv]:
        return []


@dataclass(frozen=True)
class FiniteSet(PointSet):
    points: Tuple[Fraction, ...]
    name: str = 'finite'

    @classmethod
    def of(cls, *points: RatLike, name: Optional[str] = None) -> 'FiniteSet':
        parsed: Tuple[Fraction, ...] = tuple(sorted({parse_rat(p) for p in points}))
        return cls(parsed, name or '{' + ', '.join(str(p) for p in parsed) + '}')

    def contains(self, x: Fraction) -> bool:
        return x in self.points

    def points_in(self, interval: Iv) -> List[Fraction]:
        return _nearest_first([p for p in self.points if interval.contains(p)], interval)

    def cells(self, depth: int) -> List[Iv]:
        radius: Fraction = Fraction(1, 2 ** depth)
        return [Iv(p - radius, p + radius) for p in self.points]


@dataclass(frozen=True)
class OpenInterval(PointSet):
    lo: Fraction
    hi: Fraction
    name: str = 'open-interval'

    is_null = False

    def __post_init__(self) -> None:
        object.__setattr__(self, 'lo', parse_rat(self.lo))
        object.__setattr__(self, 'hi', parse_rat(self.hi))

    def contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def points_in(self, interval: Iv) -> List[Fraction]:
        lo: Fraction = max(self.lo, interval.lo)
        hi: Fraction = min(self.hi, interval.hi)
        if lo > hi:
            return []
        candidates: List[Fraction] = [interval.midpoint, (lo + hi) / 2, lo, hi]
        return _nearest_first([p for p in candidates if self.contains(p) and interval.contains(p)], interval)

    def cells(self, depth: int) -> List[Iv]:
        return [Iv(self.lo, self.hi)]


@dataclass(frozen=True)
class Restricted(PointSet):

    """
        E ∩ [α, β]
    """

    inner: PointSet
    window: Iv

    @property
    def name(self) -> str:
        return f"{self.inner.name}∩{self.window}"

    @property
    def is_null(self) -> bool:
        return self.inner.is_null

    def contains(self, x: Fraction) -> bool:
        return self.window.contains(x) and self.inner.contains(x)

    def points_in(self, interval: Iv) -> List[Fraction]:
        clipped: Optional[Iv] = interval.intersection(self.window)
        if clipped is None:
            return []
        return self.inner.points_in(clipped)

    def cells(self, depth: int) -> List[Iv]:
        clipped: List[Optional[Iv]] = [cell.intersection(self.window) for cell in self.inner.cells(depth)]
        return [cell for cell in clipped if cell is not None]


@dataclass(frozen=True)
class UnionSet(PointSet):
    parts: Tuple[PointSet, ...]

    @property
    def name(self) -> str:
        return '∪'.join(part.name for part in self.parts)

    @property
    def is_null(self) -> bool:
        return all(part.is_null for part in self.parts)

    def contains(self, x: Fraction) -> bool:
        return any(part.contains(x) for part in self.parts)

    def points_in(self, interval: Iv) -> List[Fraction]:
        return _nearest_first([p for part in self.parts for p in part.points_in(interval)], interval)

    def cells(self, depth: int) -> List[Iv]:
        return [cell for part in self.parts for cell in part.cells(depth)]


@dataclass(frozen=True)
class Complement(PointSet):

    """
        base \\ E for a generated set E
    """

    inner: GeneratedSet

    is_null = False

    @property
    def name(self) -> str:
        return f"{self.inner.base}\\{self.inner.name}"

    def contains(self, x: Fraction) -> bool:
        return self.inner.base.contains(x) and not self.inner.contains(x)

    def points_in(self, interval: Iv) -> List[Fraction]:
        candidates: List[Fraction] = [interval.midpoint, (interval.lo + interval.midpoint) / 2,
                                      (interval.midpoint + interval.hi) / 2]
        return [p for p in candidates if locate(self.inner, p).kind is LocationKind.GAP]

    def cells(self, depth: int) -> List[Iv]:
        return [self.inner.base]


@dataclass(frozen=True)
class GapCentres(PointSet):

    """
        Centres of the removed gaps of a generated set
    """

    inner: GeneratedSet

    @property
    def name(self) -> str:
        return f"centres({self.inner.name})"

    def contains(self, x: Fraction) -> bool:
        if not self.inner.base.contains(x):
            return False
        location: Location = locate(self.inner, x)
        return location.kind is LocationKind.GAP and location.interval.midpoint == x

    def points_in(self, interval: Iv) -> List[Fraction]:
        if not self.inner.base.intersects(interval):
            return []
        location: Location = locate(self.inner, interval.midpoint)
        if location.kind is LocationKind.GAP and interval.contains(location.interval.midpoint):
            return [location.interval.midpoint]
        return []


EMPTY: EmptySet = EmptySet()


class Cover:

    """
        Open set around a null set, queried pointwise

        ``measure`` bounds the Lebesgue measure from above;
        ``distance_to_complement`` is a radius whose open ball around the
        point stays inside the cover, 0 off the cover.
    """

    @property
    def measure(self) -> Fraction:
        raise NotImplementedError

    def distance_to_complement(self, x: Fraction) -> Fraction:
        raise NotImplementedError

    def contains(self, x: Fraction) -> bool:
        return self.distance_to_complement(x) > 0


@dataclass(frozen=True)
class OpenCover(Cover):

    """
        Finite union of disjoint open intervals, sorted
    """

    intervals: Tuple[Iv, ...]
    lows: Tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'lows', tuple(iv.lo for iv in self.intervals))

    @cached_property
    def measure(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), ZERO)

    def distance_to_complement(self, x: Fraction) -> Fraction:
        index: int = bisect.bisect_right(self.lows, x) - 1
        if index < 0 or not self.intervals[index].contains_open(x):
            return ZERO
        interval: Iv = self.intervals[index]
        return min(x - interval.lo, interval.hi - x)


@dataclass(frozen=True)
class RealizationCover(Cover):

    """
        Cells of a generated set after ``depth`` steps, each widened by
        ``margin`` on both sides

        Queries descend the construction towards the point, so no cell list
        is ever built. A cell that misses the point is only reached through
        its nearest endpoint, which survives every later step.
    """

    generated: GeneratedSet
    depth: int
    margin: Fraction

    @cached_property
    def measure(self) -> Fraction:
        count: int = len(self.generated.roots) * 2 ** self.depth
        return measure_at(self.generated, self.depth) + 2 * count * self.margin

    def distance_to_complement(self, x: Fraction) -> Fraction:
        slacks: List[Fraction] = [ZERO]
        frontier: List[Iv] = []

        def visit(cell: Iv, into: List[Iv]) -> None:
            if cell.contains(x):
                into.append(cell)
            else:
                slacks.append(self.margin - min(abs(x - cell.lo), abs(x - cell.hi)))

        for root in self.generated.roots:
            visit(root, frontier)
        for step in range(self.depth):
            deeper: List[Iv] = []
            for cell in frontier:
                for child in children(cell, self.generated.rule.gap(cell, step)):
                    visit(child, deeper)
            frontier = deeper

        slacks.extend(min(x - cell.lo, cell.hi - x) + self.margin for cell in frontier)
        return max(slacks)


@dataclass(frozen=True)
class CoverUnion(Cover):
    parts: Tuple[Cover, ...]

    @cached_property
    def measure(self) -> Fraction:
        return sum((part.measure for part in self.parts), ZERO)

    def distance_to_complement(self, x: Fraction) -> Fraction:
        return max((part.distance_to_complement(x) for part in self.parts), default=ZERO)


def _merged(intervals: Sequence[Iv]) -> Tuple[Iv, ...]:
    result: List[Iv] = []
    for interval in sorted(intervals, key=lambda iv: iv.lo):
        if result and interval.lo <= result[-1].hi:
            result[-1] = Iv(result[-1].lo, max(result[-1].hi, interval.hi))
        else:
            result.append(interval)
    return tuple(result)


def open_cover(target: PointSet, budget: RatLike) -> Cover:

    """
        Open cover of a null set with measure strictly below the budget

        Generated sets are covered by the first realization whose measure is
        below half the budget, every cell widened by a common margin.

        :param target: Null set to cover
        :type target: PointSet
        :param budget: Strict upper bound on the cover measure
        :type budget: Fraction

        :return: The cover
        :rtype: Cover
    """

    budget = parse_rat(budget)
    if budget <= 0:
        raise DomainError(f"cover budget must be positive, got {budget}", witness=budget)
    if not target.is_null:
        raise UnsupportedInstanceError(f"{target.name} has positive measure and no small open cover")

    if isinstance(target, EmptySet):
        return OpenCover(())
    if isinstance(target, FiniteSet):
        margin: Fraction = budget / (4 * max(len(target.points), 1))
        return OpenCover(_merged([Iv(p - margin, p + margin) for p in target.points]))
    if isinstance(target, Restricted):
        return open_cover(target.inner, budget)
    if isinstance(target, UnionSet):
        share: Fraction = budget / len(target.parts)
        return CoverUnion(tuple(open_cover(part, share) for part in target.parts))
    if isinstance(target, GeneratedSet):
        depth: int = 0
        while measure_at(target, depth) >= budget / 2:
            depth += 1
        count: int = len(target.roots) * 2 ** depth
        margin = (budget - measure_at(target, depth)) / (4 * count)
        logger.debug("cover of %s below %s: depth %d, margin %s", target.name, budget, depth, margin)
        return RealizationCover(target, depth, margin)

    raise UnsupportedInstanceError(f"no open cover construction for {target.name}")


SETS = {
    'C': CANTOR,
    'cantor': CANTOR,
    'ternary_cantor': CANTOR,
    'D': REFLECTED_CANTOR,
    'reflected_cantor': REFLECTED_CANTOR,
    'S': SVC,
    'svc': SVC,
    'empty': EMPTY,
}


def lookup_set(name: str) -> PointSet:

    """
        Resolve a set name: a registry key or a finite list "p1,p2,..."
    """

    if name in SETS:
        return SETS[name]
    if name.startswith('{') and name.endswith('}'):
        inner: str = name[1:-1].strip()
        return FiniteSet.of(*[p for p in inner.split(',') if p.strip()]) if inner else EMPTY
    raise UnknownNameError(f"unknown set '{name}'")
