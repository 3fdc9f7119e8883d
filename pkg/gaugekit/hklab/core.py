"""
Exact scalars, intervals, tagged partitions and gauges.

Every endpoint and tag is a ``fractions.Fraction``; the only inexact
quantities are function values, which travel as ``ValueWithError``.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .conf import lab_setting
from .exceptions import ConfigError, CousinDepthError, DomainError, GaugeKitError, InvalidGaugeError, PartitionError

logger = logging.getLogger(__name__)

Rat = Fraction
RatLike = Union[Fraction, int, str, float]

ZERO: Fraction = Fraction(0)
ONE: Fraction = Fraction(1)


def parse_rat(text: RatLike) -> Fraction:

    """
        Parse an exact rational from "num/den", an integer or a decimal string

        :param text: Textual or numeric rational
        :type text: str | int | Fraction

        :return: The exact rational
        :rtype: Fraction
    """

    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        #Floats are taken at their exact binary value
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"'{text}' is not a rational number", witness=text) from exc


def format_rat(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Iv:

    """
        Closed interval [lo, hi] with exact endpoints
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, 'lo', parse_rat(self.lo))
        object.__setattr__(self, 'hi', parse_rat(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]", witness=(self.lo, self.hi))

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_open(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def covers(self, other: 'Iv') -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: 'Iv') -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: 'Iv') -> Optional['Iv']:
        if not self.intersects(other):
            return None
        return Iv(max(self.lo, other.lo), min(self.hi, other.hi))

    def split(self) -> Tuple['Iv', 'Iv']:
        mid: Fraction = self.midpoint
        return Iv(self.lo, mid), Iv(mid, self.hi)

    def reflected(self) -> 'Iv':
        return Iv(-self.hi, -self.lo)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class ValueWithError:

    """
        A value together with a worst-case absolute error bound

        The true quantity lies in [value - error, value + error]. A value
        flagged ``convention`` is the exact 0 taken where a function is
        undefined.
    """

    value: Fraction
    error: Fraction = ZERO
    convention: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, 'value', parse_rat(self.value))
        object.__setattr__(self, 'error', parse_rat(self.error))
        if self.error < 0:
            raise DomainError(f"negative error bound {self.error}", witness=self.error)

    @classmethod
    def of(cls, value: RatLike) -> 'ValueWithError':
        return cls(parse_rat(value))

    @property
    def exact(self) -> bool:
        return self.error == 0

    @property
    def lower(self) -> Fraction:
        return self.value - self.error

    @property
    def upper(self) -> Fraction:
        return self.value + self.error

    def __add__(self, other: Any) -> 'ValueWithError':
        other = _lift(other)
        return ValueWithError(self.value + other.value, self.error + other.error)

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'ValueWithError':
        other = _lift(other)
        return ValueWithError(self.value - other.value, self.error + other.error)

    def __rsub__(self, other: Any) -> 'ValueWithError':
        return _lift(other) - self

    def __neg__(self) -> 'ValueWithError':
        return ValueWithError(-self.value, self.error, self.convention)

    def __mul__(self, other: Any) -> 'ValueWithError':
        other = _lift(other)
        error: Fraction = abs(self.value) * other.error + abs(other.value) * self.error + self.error * other.error
        return ValueWithError(self.value * other.value, error, self.convention or other.convention)

    __rmul__ = __mul__

    def __abs__(self) -> 'ValueWithError':
        return ValueWithError(abs(self.value), self.error, self.convention)

    def __float__(self) -> float:
        return float(self.value)

    def scaled(self, factor: Fraction) -> 'ValueWithError':
        return ValueWithError(self.value * factor, self.error * abs(factor), self.convention)

    def certainly_below(self, bound: Fraction) -> bool:
        return self.upper < bound

    def __str__(self) -> str:
        if self.exact:
            return str(self.value)
        return f"{float(self.value)} ± {float(self.error):.3g}"


def _lift(other: Any) -> ValueWithError:
    if isinstance(other, ValueWithError):
        return other
    return ValueWithError.of(other)


def total(values: Sequence[ValueWithError]) -> ValueWithError:
    result: ValueWithError = ValueWithError(ZERO)
    for value in values:
        result = result + value
    return result


class TaggedCell(NamedTuple):
    tag: Fraction
    cell: Iv


@dataclass(frozen=True)
class TaggedPartition:

    """
        Finite sequence of (tag, cell) pairs over a domain
    """

    items: Tuple[TaggedCell, ...]
    domain: Iv

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[RatLike, Tuple[RatLike, RatLike]]], domain: Iv) -> 'TaggedPartition':
        items: Tuple[TaggedCell, ...] = tuple(
            TaggedCell(parse_rat(tag), Iv(lo, hi)) for tag, (lo, hi) in pairs
        )
        return cls(items, domain)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[TaggedCell]:
        return iter(self.items)

    @property
    def tags(self) -> Tuple[Fraction, ...]:
        return tuple(item.tag for item in self.items)

    @property
    def mesh(self) -> Fraction:
        return max((item.cell.length for item in self.items), default=ZERO)


@dataclass(frozen=True)
class Violation:
    index: int
    rule: str
    detail: str


@dataclass(frozen=True)
class PartitionCheck:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_partition(partition: TaggedPartition) -> PartitionCheck:

    """
        Check a tagged partition: cells cover the domain without gaps,
        interiors are pairwise disjoint, every tag lies in its cell

        :param partition: Partition to check
        :type partition: TaggedPartition

        :return: Report with one violation per broken rule and index
        :rtype: PartitionCheck
    """

    items: Tuple[TaggedCell, ...] = partition.items
    domain: Iv = partition.domain
    violations: List[Violation] = []

    if not items:
        return PartitionCheck((Violation(0, 'empty', 'partition has no cells'),))

    for index, (tag, cell) in enumerate(items):
        if not cell.contains(tag):
            violations.append(Violation(index, 'tag', f"tag {tag} is not in {cell}"))
        if not domain.covers(cell):
            violations.append(Violation(index, 'domain', f"{cell} leaves the domain {domain}"))

    #Cells are stored sorted; the remaining checks run on the sorted order
    ordered: List[Tuple[int, TaggedCell]] = sorted(enumerate(items), key=lambda pair: (pair[1].cell.lo, pair[1].cell.hi))
    if [index for index, _ in ordered] != list(range(len(items))):
        violations.append(Violation(0, 'order', 'cells are not sorted by left endpoint'))

    for (_, previous), (index, current) in zip(ordered, ordered[1:]):
        if current.cell.lo < previous.cell.hi:
            violations.append(Violation(index, 'overlap', f"{current.cell} overlaps {previous.cell}"))
        elif current.cell.lo > previous.cell.hi:
            violations.append(Violation(index, 'gap', f"gap between {previous.cell} and {current.cell}"))

    first: TaggedCell = ordered[0][1]
    last: TaggedCell = ordered[-1][1]
    if first.cell.lo != domain.lo or max(item.cell.hi for item in items) != domain.hi:
        violations.append(Violation(
            ordered[0][0] if first.cell.lo != domain.lo else ordered[-1][0],
            'coverage',
            f"cells span [{first.cell.lo}, {last.cell.hi}] instead of {domain}"
        ))

    return PartitionCheck(tuple(violations))


RadiusFn = Callable[[Fraction], RatLike]
SuggestFn = Callable[[Iv], Sequence[Fraction]]


def _no_suggestions(interval: Iv) -> Sequence[Fraction]:
    return ()


@dataclass(frozen=True)
class Gauge:

    """
        A positive radius function together with a tag oracle

        ``suggest`` proposes tags for a cell; the Cousin builder tries them
        before the default candidates (endpoints, then midpoint).
    """

    name: str
    radius: RadiusFn
    suggest: SuggestFn = field(default=_no_suggestions)

    @classmethod
    def constant(cls, value: RatLike, name: Optional[str] = None) -> 'Gauge':
        radius: Fraction = parse_rat(value)
        return cls(name or f"constant({radius})", lambda x: radius)

    def at(self, x: Fraction) -> Fraction:

        """
            Evaluate the radius at x, checking that it is positive

            :param x: Point of the domain
            :type x: Fraction

            :return: The radius
            :rtype: Fraction
        """

        try:
            radius: Fraction = parse_rat(self.radius(x))
        except GaugeKitError:
            raise
        except (ArithmeticError, ValueError, TypeError) as exc:
            raise InvalidGaugeError(f"gauge {self.name} failed at {x}: {exc}") from exc
        if radius <= 0:
            raise InvalidGaugeError(f"gauge {self.name} is not positive at {x} (radius {radius})")
        return radius

    def accepts(self, tag: Fraction, interval: Iv) -> bool:
        radius: Fraction = self.at(tag)
        return tag - radius < interval.lo and interval.hi < tag + radius

    def candidates(self, interval: Iv) -> List[Fraction]:
        suggested: List[Fraction] = [parse_rat(x) for x in self.suggest(interval)]
        result: List[Fraction] = []
        for x in suggested + [interval.lo, interval.hi, interval.midpoint]:
            if interval.contains(x) and x not in result:
                result.append(x)
        return result

    def minimum(self, other: 'Gauge', name: Optional[str] = None) -> 'Gauge':

        """
            Pointwise minimum of two gauges; both oracles are consulted
        """

        def radius(x: Fraction) -> Fraction:
            return min(self.at(x), other.at(x))

        def suggest(interval: Iv) -> List[Fraction]:
            return list(self.suggest(interval)) + list(other.suggest(interval))

        return Gauge(name or f"min({self.name}, {other.name})", radius, suggest)


def is_subordinate(partition: TaggedPartition, gauge: Gauge) -> bool:

    """
        True iff every cell lies in the open gauge ball around its tag
    """

    return all(gauge.accepts(tag, cell) for tag, cell in partition.items)


def riemann_sum(f: Callable[[Fraction], ValueWithError], partition: TaggedPartition) -> ValueWithError:

    """
        Sum of f(tag) times cell length over the partition

        :param f: Function returning a ValueWithError per point
        :type f: FnSpec
        :param partition: Valid tagged partition
        :type partition: TaggedPartition

        :return: The sum, exact when every value is exact
        :rtype: ValueWithError
    """

    return total([f(tag).scaled(cell.length) for tag, cell in partition.items])


def _accepted_tag(interval: Iv, gauge: Gauge, rng: Optional[random.Random]) -> Optional[Fraction]:
    candidates: List[Fraction] = gauge.candidates(interval)
    if rng is None:
        for tag in candidates:
            if gauge.accepts(tag, interval):
                return tag
        return None
    accepted: List[Fraction] = [tag for tag in candidates if gauge.accepts(tag, interval)]
    return rng.choice(accepted) if accepted else None


def cousin_partition(
    domain: Iv,
    gauge: Gauge,
    max_depth: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> TaggedPartition:

    """
        Build a tagged partition of the domain subordinate to the gauge

        Each interval takes the first candidate tag whose gauge ball
        contains it; otherwise it is bisected at its exact midpoint. With
        ``rng`` the accepted tag is drawn at random and shallow intervals
        are bisected at random even when a tag fits.

        :param domain: Interval to partition
        :type domain: Iv
        :param gauge: Positive gauge with its tag oracle
        :type gauge: Gauge
        :param max_depth: Bisection budget, DEPTH_CAP when omitted
        :type max_depth: int
        :param rng: Source of randomized choices
        :type rng: random.Random

        :return: Partition passing validate_partition and is_subordinate
        :rtype: TaggedPartition
    """

    depth_cap: int = lab_setting('DEPTH_CAP') if max_depth is None else max_depth
    random_depth: int = lab_setting('RANDOM_SPLIT_DEPTH')
    items: List[TaggedCell] = []
    deepest: int = 0

    #Left halves are pushed last so cells come out sorted
    stack: List[Tuple[Iv, int]] = [(domain, 0)]
    while stack:
        interval, depth = stack.pop()
        deepest = max(deepest, depth)

        voluntary: bool = rng is not None and depth < random_depth and interval.length > 0 and rng.random() < 0.5
        if not voluntary:
            tag: Optional[Fraction] = _accepted_tag(interval, gauge, rng)
            if tag is not None:
                items.append(TaggedCell(tag, interval))
                continue
            if depth >= depth_cap:
                raise CousinDepthError(
                    f"no tag of gauge {gauge.name} covers {interval} after {depth} bisections",
                    interval=interval,
                    gauge=gauge.name,
                    depth=depth,
                )

        left, right = interval.split()
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))

    logger.debug("cousin partition of %s under %s: %d cells, depth %d", domain, gauge.name, len(items), deepest)
    return TaggedPartition(tuple(items), domain)


def merge_partitions(parts: Sequence[TaggedPartition]) -> TaggedPartition:

    """
        Concatenate partitions of abutting domains into one partition

        :param parts: Partitions whose domains abut left to right
        :type parts: Sequence[TaggedPartition]

        :return: Partition of the union domain
        :rtype: TaggedPartition
    """

    if not parts:
        raise PartitionError("nothing to merge")
    for previous, current in zip(parts, parts[1:]):
        if current.domain.lo > previous.domain.hi:
            raise PartitionError(f"gap between {previous.domain} and {current.domain}")
        if current.domain.lo < previous.domain.hi:
            raise PartitionError(f"{previous.domain} overlaps {current.domain}")

    items: Tuple[TaggedCell, ...] = tuple(item for part in parts for item in part.items)
    return TaggedPartition(items, Iv(parts[0].domain.lo, parts[-1].domain.hi))


GaugeFamily = Callable[[Fraction], Gauge]


@dataclass(frozen=True)
class HKRow:
    eps: Fraction
    gauge: str
    sums: Tuple[ValueWithError, ...]
    partitions: Tuple[TaggedPartition, ...] = ()

    @property
    def lower(self) -> Fraction:
        return min(value.lower for value in self.sums)

    @property
    def upper(self) -> Fraction:
        return max(value.upper for value in self.sums)

    @property
    def spread(self) -> Fraction:
        return self.upper - self.lower


@dataclass(frozen=True)
class HKReport:

    """
        Sampled Riemann sums per ε; evidence of integrability, never a proof
    """

    function: str
    a: Fraction
    b: Fraction
    orientation: int
    rows: Tuple[HKRow, ...]
    tolerance: Fraction
    witness: Optional[TaggedPartition] = None

    @property
    def converged(self) -> bool:
        return bool(self.rows) and self.rows[-1].spread < self.tolerance

    @property
    def estimate(self) -> Optional[ValueWithError]:
        if not self.rows:
            return None
        row: HKRow = self.rows[-1]
        return ValueWithError((row.lower + row.upper) / 2, row.spread / 2)


def hk_estimate(
    f: Callable[[Fraction], ValueWithError],
    a: RatLike,
    b: RatLike,
    family: GaugeFamily,
    schedule: Sequence[RatLike],
    samples: int = 3,
    seed: int = 0,
    tolerance: Optional[RatLike] = None,
) -> HKReport:

    """
        Sample Riemann sums of f over partitions subordinate to family(ε)

        Integrals over [b, a] with b > a are reported negated.

        :param f: Integrand
        :type f: FnSpec
        :param a: Lower limit
        :type a: Fraction
        :param b: Upper limit
        :type b: Fraction
        :param family: Gauge per ε
        :type family: Callable
        :param schedule: Decreasing ε values
        :type schedule: Sequence[Fraction]
        :param samples: Partitions per ε
        :type samples: int
        :param seed: Seed of the randomized partitions
        :type seed: int
        :param tolerance: Convergence threshold on the final spread
        :type tolerance: Fraction

        :return: Per-ε sums and their spread
        :rtype: HKReport
    """

    if samples < 1:
        raise ConfigError(f"at least one partition per ε is needed, got {samples}")
    a = parse_rat(a)
    b = parse_rat(b)
    orientation: int = 1 if a <= b else -1
    domain: Iv = Iv(min(a, b), max(a, b))
    epsilons: List[Fraction] = [parse_rat(eps) for eps in schedule]
    rng: random.Random = random.Random(seed)

    rows: List[HKRow] = []
    witness: Optional[TaggedPartition] = None
    for eps in epsilons:
        gauge: Gauge = family(eps)
        sums: List[ValueWithError] = []
        partitions: List[TaggedPartition] = []
        for _ in range(samples):
            witness = cousin_partition(domain, gauge, rng=rng)
            value: ValueWithError = riemann_sum(f, witness)
            sums.append(value if orientation > 0 else -value)
            partitions.append(witness)
        row: HKRow = HKRow(eps, gauge.name, tuple(sums), tuple(partitions))
        logger.info("hk %s over %s, eps=%s: spread %s", getattr(f, 'name', f), domain, eps, row.spread)
        rows.append(row)

    limit: Fraction = parse_rat(tolerance) if tolerance is not None else (epsilons[-1] if epsilons else ONE)
    return HKReport(getattr(f, 'name', 'f'), a, b, orientation, tuple(rows), limit, witness)
