"""
Negligible variation (absolute criterion) and negligible conditional
variation (signed criterion) over sampled and adversarial partitions.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

from .core import (ONE, ZERO, Gauge, Iv, RatLike, TaggedCell, TaggedPartition, ValueWithError,
                   cousin_partition, is_subordinate, merge_partitions, parse_rat, total, validate_partition)
from .exceptions import (ConfigError, InvalidGaugeError, PartitionError, UnknownNameError,
                         UnsupportedInstanceError)
from .funcs import DiniCertificate, FnSpec
from .sets import Cover, GeneratedSet, PointSet, Restricted, distance, member, open_cover

logger = logging.getLogger(__name__)


class VariationSums(NamedTuple):
    abs_sum: ValueWithError
    signed_abs: ValueWithError


def increment(f: FnSpec, cell: Iv) -> ValueWithError:
    return f(cell.hi) - f(cell.lo)


def variation_sums(f: FnSpec, partition: TaggedPartition, tagged_in: PointSet) -> VariationSums:

    """
        Σ|Δf| and |ΣΔf| over the cells whose tag lies in the set

        :param f: Function whose increments are summed
        :type f: FnSpec
        :param partition: Valid tagged partition
        :type partition: TaggedPartition
        :param tagged_in: Exact membership predicate on tags
        :type tagged_in: PointSet

        :return: Absolute and signed sums
        :rtype: VariationSums
    """

    increments: List[ValueWithError] = [
        increment(f, cell) for tag, cell in partition.items if tagged_in.contains(tag)
    ]
    return VariationSums(total([abs(delta) for delta in increments]), abs(total(increments)))


def gauge_dist_complement(generated: GeneratedSet) -> Gauge:

    """
        Radius 1 on the set and the distance to the set off it; the tag
        oracle proposes set points inside the cell

        :param generated: The set
        :type generated: GeneratedSet

        :return: The gauge
        :rtype: Gauge
    """

    def radius(x: Fraction) -> Fraction:
        if generated.base.contains(x) and member(generated, x):
            return ONE
        result: ValueWithError = distance(generated, x)
        if not result.exact:
            raise InvalidGaugeError(f"distance from {x} to {generated.name} is not exact")
        return result.value

    return Gauge(f"dist-complement({generated.name})", radius, generated.points_in)


def gauge_from_zero_derivative(f: FnSpec, zero_set: PointSet, eps: RatLike, span: RatLike) -> Gauge:

    """
        Gauge forcing Σ|Δf| < ε over tags in a set where f' = 0

        On the set the radius is the modulus η at ε/span, so every tagged
        cell has |Δf| <= (ε/span)|I|; off the set it is 1.

        :param f: Function with a modulus certificate
        :type f: FnSpec
        :param zero_set: Set where f' vanishes
        :type zero_set: PointSet
        :param eps: Target ε
        :type eps: Fraction
        :param span: Length of the domain partitioned
        :type span: Fraction

        :return: The gauge
        :rtype: Gauge
    """

    f.require('modulus')
    f.require('deriv')
    eps = parse_rat(eps)
    scale: Fraction = eps / parse_rat(span)

    def radius(x: Fraction) -> Fraction:
        if not zero_set.contains(x):
            return ONE
        if not f.differentiable_at(x) or f.deriv(x).value != 0:
            raise UnsupportedInstanceError(f"{f.name}' does not vanish at {x}")
        return min(f.modulus(x, scale), ONE)

    return Gauge(f"zero-derivative({f.name}, {zero_set.name}, {eps})", radius, zero_set.points_in)


def cover_budget(eps: Fraction, band: int) -> Fraction:
    return eps / (2 ** (band + 1) * (band + 2))


CoverFamily = Callable[[int], Cover]


def validate_cover(cover: Cover, eps: Fraction, band: int) -> Cover:
    budget: Fraction = cover_budget(eps, band)
    if not cover.measure < budget:
        raise UnsupportedInstanceError(
            f"cover of band {band} has measure {cover.measure}, not below {budget}"
        )
    return cover


def dini_covers(null_set: PointSet, eps: RatLike) -> CoverFamily:

    """
        Open covers of a null set, one per Dini band n, each of measure
        below ε/(2^(n+1)(n+2))
    """

    eps = parse_rat(eps)

    @lru_cache(maxsize=None)
    def cover(band: int) -> Cover:
        return validate_cover(open_cover(null_set, cover_budget(eps, band) / 2), eps, band)

    return cover


def gauge_from_dini(f: FnSpec, null_set: PointSet, covers: CoverFamily, eps: RatLike) -> Gauge:

    """
        Gauge forcing Σ|Δf| < ε over tags in a null set where the Dini
        derivatives of f are finite

        A point in band n gets the smaller of its Dini radius and its
        distance to the complement of the band-n cover; points off the
        null set get 1.

        :param f: Function with a Dini certificate
        :type f: FnSpec
        :param null_set: Null set carrying the tags
        :type null_set: PointSet
        :param covers: Cover per band, validated against the budget
        :type covers: Callable[[int], Cover]
        :param eps: Target ε
        :type eps: Fraction

        :return: The gauge
        :rtype: Gauge
    """

    f.require('dini')
    eps = parse_rat(eps)

    def radius(x: Fraction) -> Fraction:
        if not null_set.contains(x):
            return ONE
        certificate: DiniCertificate = f.dini(x)
        cover: Cover = validate_cover(covers(certificate.band), eps, certificate.band)
        slack: Fraction = cover.distance_to_complement(x)
        if slack == 0:
            raise InvalidGaugeError(f"{x} is not inside the band-{certificate.band} cover")
        return min(certificate.radius, slack, ONE)

    return Gauge(f"dini({f.name}, {null_set.name}, {eps})", radius, null_set.points_in)


class Criterion(str, Enum):
    ABSOLUTE = 'abs'
    SIGNED = 'signed'


class Verdict(str, Enum):
    NV_EVIDENCE = 'NV-evidence'
    NCV_ONLY_EVIDENCE = 'NCV-only-evidence'
    REFUTED = 'refuted'


@dataclass(frozen=True)
class Witness:
    eps: Fraction
    gauge: str
    partition: TaggedPartition
    sums: VariationSums


@dataclass(frozen=True)
class VariationRow:
    eps: Fraction
    gauge: str
    tried: int
    max_abs: Fraction
    max_signed: Fraction
    nv_pass: bool
    ncv_pass: bool


@dataclass(frozen=True)
class VariationReport:

    """
        Sampled evidence for NV or NCV; a refutation carries its partition
    """

    function: str
    tagged_in: str
    domain: Iv
    criterion: Criterion
    rows: Tuple[VariationRow, ...]
    verdict: Verdict
    witness: Optional[Witness] = None

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED


GaugeBuilder = Callable[[Fraction], Gauge]


def test_negligible_variation(
    f: FnSpec,
    tagged_in: PointSet,
    gauge_builder: GaugeBuilder,
    schedule: Sequence[RatLike],
    samples: int,
    seed: int,
    domain: Optional[Iv] = None,
    criterion: Criterion = Criterion.ABSOLUTE,
) -> VariationReport:

    """
        Sample subordinate partitions per ε and record the variation sums

        :param f: Function under test
        :type f: FnSpec
        :param tagged_in: Set E
        :type tagged_in: PointSet
        :param gauge_builder: Gauge per ε
        :type gauge_builder: Callable
        :param schedule: ε values
        :type schedule: Sequence[Fraction]
        :param samples: Partitions per ε
        :type samples: int
        :param seed: Seed of the randomized partitions
        :type seed: int
        :param domain: Interval partitioned, the domain of f by default
        :type domain: Iv
        :param criterion: Whether refutation uses Σ|Δf| or |ΣΔf|
        :type criterion: Criterion

        :return: Rows per ε and the verdict
        :rtype: VariationReport
    """

    if samples < 1:
        raise ConfigError(f"at least one partition per ε is needed, got {samples}")
    domain = domain or f.domain
    criterion = Criterion(criterion)
    rng: random.Random = random.Random(seed)
    rows: List[VariationRow] = []
    witness: Optional[Witness] = None

    for eps in (parse_rat(value) for value in schedule):
        gauge: Gauge = gauge_builder(eps)
        max_abs: Fraction = ZERO
        max_signed: Fraction = ZERO
        nv_pass: bool = True
        ncv_pass: bool = True
        for _ in range(samples):
            partition: TaggedPartition = cousin_partition(domain, gauge, rng=rng)
            sums: VariationSums = variation_sums(f, partition, tagged_in)
            max_abs = max(max_abs, sums.abs_sum.upper)
            max_signed = max(max_signed, sums.signed_abs.upper)
            failed_abs: bool = not sums.abs_sum.upper < eps
            failed_signed: bool = not sums.signed_abs.upper < eps
            nv_pass = nv_pass and not failed_abs
            ncv_pass = ncv_pass and not failed_signed
            failed: bool = failed_abs if criterion is Criterion.ABSOLUTE else failed_signed
            if failed and witness is None:
                witness = Witness(eps, gauge.name, partition, sums)

        row: VariationRow = VariationRow(eps, gauge.name, samples, max_abs, max_signed, nv_pass, ncv_pass)
        logger.info("variation of %s on %s, eps=%s: max abs %s, max signed %s",
                    f.name, tagged_in.name, eps, max_abs, max_signed)
        rows.append(row)

    all_nv: bool = all(row.nv_pass for row in rows)
    all_ncv: bool = all(row.ncv_pass for row in rows)
    if criterion is Criterion.ABSOLUTE:
        verdict: Verdict = Verdict.NV_EVIDENCE if all_nv else Verdict.REFUTED
    elif all_ncv:
        verdict = Verdict.NV_EVIDENCE if all_nv else Verdict.NCV_ONLY_EVIDENCE
    else:
        verdict = Verdict.REFUTED

    return VariationReport(f.name, tagged_in.name, domain, criterion, tuple(rows), verdict,
                           witness if verdict is Verdict.REFUTED else None)


class Strategy:
    name: str = 'strategy'

    def build(self, f: FnSpec, tagged_in: PointSet, gauge: Gauge, domain: Iv) -> TaggedPartition:
        raise NotImplementedError


@dataclass(frozen=True)
class SplitAt(Strategy):

    """
        Cousin partitions of the pieces between the split points, merged
    """

    points: Tuple[Fraction, ...]

    @property
    def name(self) -> str:
        return 'split:' + ','.join(str(p) for p in self.points)

    def build(self, f: FnSpec, tagged_in: PointSet, gauge: Gauge, domain: Iv) -> TaggedPartition:
        cuts: List[Fraction] = sorted({p for p in self.points if domain.contains_open(p)})
        if len(cuts) != len(set(self.points)):
            raise PartitionError(f"split points {list(self.points)} are not all inside {domain}")
        bounds: List[Fraction] = [domain.lo] + cuts + [domain.hi]
        return merge_partitions([
            cousin_partition(Iv(lo, hi), gauge) for lo, hi in zip(bounds, bounds[1:])
        ])


def _refined(cell: Iv, gauge: Gauge) -> Optional[Tuple[TaggedCell, ...]]:
    if cell.length == 0:
        return None
    left, right = cell.split()
    return merge_partitions([cousin_partition(left, gauge), cousin_partition(right, gauge)]).items


def _contribution(f: FnSpec, items: Sequence[TaggedCell], tagged_in: PointSet) -> Fraction:
    return total([increment(f, cell) for tag, cell in items if tagged_in.contains(tag)]).value


class Repartition(Strategy):

    """
        Replace each cell by a finer subordinate partition of it whenever
        that raises Σ|Δf| over tags in E
    """

    name = 'repartition'

    def build(self, f: FnSpec, tagged_in: PointSet, gauge: Gauge, domain: Iv) -> TaggedPartition:
        base: TaggedPartition = cousin_partition(domain, gauge)
        items: List[TaggedCell] = []
        for item in base.items:
            kept: Tuple[TaggedCell, ...] = (item,)
            refined: Optional[Tuple[TaggedCell, ...]] = _refined(item.cell, gauge)
            if refined is not None:
                score_kept: Fraction = sum((abs(d) for d in _deltas(f, kept, tagged_in)), ZERO)
                score_refined: Fraction = sum((abs(d) for d in _deltas(f, refined, tagged_in)), ZERO)
                if score_refined > score_kept:
                    kept = refined
            items.extend(kept)
        return TaggedPartition(tuple(items), domain)


def _deltas(f: FnSpec, items: Sequence[TaggedCell], tagged_in: PointSet) -> List[Fraction]:
    return [increment(f, cell).value for tag, cell in items if tagged_in.contains(tag)]


class GreedySign(Strategy):

    """
        Keep the E-tagged cells whose increments share the dominant sign and
        re-partition the others, pushing |ΣΔf| towards Σ|Δf|
    """

    name = 'greedy-sign'

    def build(self, f: FnSpec, tagged_in: PointSet, gauge: Gauge, domain: Iv) -> TaggedPartition:
        base: TaggedPartition = cousin_partition(domain, gauge)
        deltas: List[Fraction] = _deltas(f, base.items, tagged_in)
        sign: int = 1 if sum(d for d in deltas if d > 0) >= -sum(d for d in deltas if d < 0) else -1

        items: List[TaggedCell] = []
        for item in base.items:
            kept: Tuple[TaggedCell, ...] = (item,)
            refined: Optional[Tuple[TaggedCell, ...]] = _refined(item.cell, gauge)
            if refined is not None and sign * _contribution(f, refined, tagged_in) > sign * _contribution(f, kept, tagged_in):
                kept = refined
            items.extend(kept)
        return TaggedPartition(tuple(items), domain)


def parse_strategy(text: str) -> Strategy:

    """
        "split:0", "split:-1/3,1/3", "repartition" or "greedy-sign"
    """

    if text.startswith('split:'):
        return SplitAt(tuple(parse_rat(p) for p in text.split(':', 1)[1].split(',') if p.strip()))
    if text == Repartition.name:
        return Repartition()
    if text == GreedySign.name:
        return GreedySign()
    raise UnknownNameError(f"unknown adversary strategy '{text}'")


@dataclass(frozen=True)
class AdversarialResult:
    strategy: str
    gauge: str
    partition: TaggedPartition
    sums: VariationSums

    @property
    def abs_sum(self) -> ValueWithError:
        return self.sums.abs_sum


def adversarial_variation(
    f: FnSpec,
    tagged_in: PointSet,
    gauge: Gauge,
    strategy: Strategy,
    domain: Optional[Iv] = None,
) -> AdversarialResult:

    """
        Build one partition subordinate to the gauge by a strategy and
        report its variation sums

        :param f: Function under test
        :type f: FnSpec
        :param tagged_in: Set E
        :type tagged_in: PointSet
        :param gauge: Gauge the partition must be subordinate to
        :type gauge: Gauge
        :param strategy: How the partition is formed
        :type strategy: Strategy
        :param domain: Interval partitioned, the domain of f by default
        :type domain: Iv

        :return: The witness partition and its sums
        :rtype: AdversarialResult
    """

    domain = domain or f.domain
    try:
        partition: TaggedPartition = strategy.build(f, tagged_in, gauge, domain)
    except PartitionError as exc:
        raise PartitionError(f"strategy {strategy.name} found no partition of {domain} under {gauge.name}: "
                             f"{exc.detail}") from exc

    check = validate_partition(partition)
    if not check.ok or not is_subordinate(partition, gauge):
        raise PartitionError(f"strategy {strategy.name} produced an invalid partition: "
                             f"{[v.detail for v in check.violations] or 'not subordinate'}")

    sums: VariationSums = variation_sums(f, partition, tagged_in)
    logger.info("adversary %s on %s: abs %s, signed %s", strategy.name, f.name, sums.abs_sum, sums.signed_abs)
    return AdversarialResult(strategy.name, gauge.name, partition, sums)


@dataclass(frozen=True)
class ScanEntry:
    interval: Iv
    report: VariationReport


@dataclass(frozen=True)
class ScanResult:

    """
        NCV per subinterval; one refuted subinterval refutes NV on E
    """

    entries: Tuple[ScanEntry, ...]

    @property
    def nv_refuted(self) -> bool:
        return any(entry.report.refuted for entry in self.entries)

    def verdict_for(self, interval: Iv) -> Verdict:
        return next(entry.report.verdict for entry in self.entries if entry.interval == interval)


def subinterval_ncv_scan(
    f: FnSpec,
    tagged_in: PointSet,
    gauge_builder: GaugeBuilder,
    grid: Sequence[Iv],
    schedule: Sequence[RatLike],
    seed: int,
    samples: int = 3,
) -> ScanResult:

    """
        Signed-criterion test of E ∩ [α, β] on each grid interval

        :param f: Function under test
        :type f: FnSpec
        :param tagged_in: Set E
        :type tagged_in: PointSet
        :param gauge_builder: Gauge per ε
        :type gauge_builder: Callable
        :param grid: Subintervals [α, β]
        :type grid: Sequence[Iv]
        :param schedule: ε values
        :type schedule: Sequence[Fraction]
        :param seed: Seed of the randomized partitions
        :type seed: int
        :param samples: Partitions per ε
        :type samples: int

        :return: Verdict per subinterval
        :rtype: ScanResult
    """

    entries: List[ScanEntry] = []
    for interval in grid:
        report: VariationReport = test_negligible_variation(
            f, Restricted(tagged_in, interval), gauge_builder, schedule, samples, seed,
            domain=interval, criterion=Criterion.SIGNED,
        )
        entries.append(ScanEntry(interval, report))
    return ScanResult(tuple(entries))


@dataclass(frozen=True)
class DiniEstimate:
    estimate: ValueWithError
    best_h: Optional[Fraction]
    skipped: Tuple[Fraction, ...]

    @property
    def lower(self) -> Fraction:
        return self.estimate.lower


def dini_upper_estimate(g: FnSpec, x: RatLike, h_grid: Sequence[RatLike]) -> DiniEstimate:

    """
        Largest difference quotient |g(x ± h) - g(x)| / h over the grid

        The step kept is the one with the largest certified lower bound, so
        ``lower`` bounds the upper Dini derivative from below. Points x ± h
        outside the domain are skipped and listed.

        :param g: Function
        :type g: FnSpec
        :param x: Base point
        :type x: Fraction
        :param h_grid: Positive steps
        :type h_grid: Sequence[Fraction]

        :return: Estimate, the step that attained it and skipped points
        :rtype: DiniEstimate
    """

    x = parse_rat(x)
    base: ValueWithError = g(x)
    best: ValueWithError = ValueWithError(ZERO)
    best_h: Optional[Fraction] = None
    skipped: List[Fraction] = []
    for h in (parse_rat(step) for step in h_grid):
        if h <= 0:
            raise ValueError(f"step {h} is not positive")
        for y in (x + h, x - h):
            if not g.domain.contains(y):
                skipped.append(y)
                continue
            quotient: ValueWithError = abs(g(y) - base).scaled(1 / h)
            if quotient.lower > best.lower:
                best, best_h = quotient, h
    if skipped:
        logger.warning("dini estimate of %s at %s skipped %d points outside %s", g.name, x, len(skipped), g.domain)
    return DiniEstimate(best, best_h, tuple(skipped))


def image_measure_bound(g: FnSpec, tagged_in: PointSet, depth: int) -> Fraction:

    """
        Upper bound on the measure of g(E): the oscillation of g summed
        over a depth-indexed cover of E

        :param g: Function with an oscillation certificate
        :type g: FnSpec
        :param tagged_in: Set E
        :type tagged_in: PointSet
        :param depth: Depth of the cover
        :type depth: int

        :return: The bound
        :rtype: Fraction
    """

    g.require('oscillation')
    bound: Fraction = ZERO
    for cell in tagged_in.cells(depth):
        clipped: Optional[Iv] = cell.intersection(g.domain)
        if clipped is not None:
            bound += g.oscillation(clipped)
    return bound
