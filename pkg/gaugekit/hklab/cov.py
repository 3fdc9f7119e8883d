"""
Change of variables and the fundamental theorem of calculus, checked on
catalog instances by sampled Riemann sums and cross-checked against the
variation of F∘g on the failure set B.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import (ONE, ZERO, Gauge, HKReport, Iv, RatLike, TaggedPartition, ValueWithError,
                   hk_estimate, parse_rat)
from .exceptions import DomainError, UnknownNameError, UnsupportedInstanceError
from .funcs import (ABS, CANTOR_ABS, CANTOR_FN, IDENTITY, QUARTIC_ROOT, SVC_DIST, FailureKind, FailureSet,
                    FnSpec, compose, constant, monomial, product, quartic_root)
from .sets import (CANTOR, EMPTY, REFLECTED_CANTOR, SVC, FiniteSet, GeneratedSet, PointSet, Restricted,
                   member, realize)
from .variation import (Criterion, VariationReport, Verdict, gauge_dist_complement, gauge_from_zero_derivative,
                        test_negligible_variation)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovInstance:

    """
        f, its primitive F and a substitution g on a domain

        ``B`` is where (F∘g)' = f∘g·g' fails. ``expected`` is the analytic
        answer for a subinterval; ``witness`` names the split points the
        known refutations hinge on.
    """

    name: str
    f: FnSpec
    F: Optional[FnSpec]
    g: FnSpec
    domain: Iv
    B: FailureSet
    expected: Callable[[Iv], bool]
    witness: Tuple[Fraction, ...] = ()
    null_sets: Tuple[PointSet, ...] = ()
    description: str = ''

    @property
    def composite(self) -> FnSpec:
        if self.F is None:
            raise UnsupportedInstanceError(f"instance {self.name} has no primitive F")
        return compose(self.F, self.g)


def _always(interval: Iv) -> bool:
    return True


def _constant_on(g: FnSpec) -> Callable[[Iv], bool]:
    #With g' = 0 almost everywhere the right side is 0, so the formula holds iff g(α) = g(β)
    def expected(interval: Iv) -> bool:
        return g.value(interval.lo) == g.value(interval.hi)
    return expected


ONE_FN: FnSpec = constant(1)

INSTANCES: Dict[str, CovInstance] = {
    instance.name: instance
    for instance in (
        CovInstance('identity-sub', ONE_FN, IDENTITY, IDENTITY, Iv(-1, 1), FailureSet.empty(), _always,
                    null_sets=(FiniteSet.of(0, Fraction(1, 2)),),
                    description='f = 1, F = u, g(s) = s'),
        CovInstance('square-sub', ONE_FN, IDENTITY, monomial(1, 2, name='square'), Iv(0, 1), FailureSet.empty(),
                    _always, null_sets=(FiniteSet.of(0), FiniteSet.of(Fraction(1, 3), Fraction(1, 2))),
                    description='f = 1, F = u, g(s) = s²'),
        CovInstance('poly-sub', monomial(2, 1, name='double'), monomial(1, 2, name='square'),
                    monomial(1, 2, name='square'), Iv(-1, 1), FailureSet.empty(), _always,
                    null_sets=(FiniteSet.of(0),),
                    description='f(u) = 2u, F(u) = u², g(s) = s²'),
        CovInstance('abs-sub', ONE_FN, IDENTITY, ABS, Iv(-1, 1), FailureSet.finite(0), _always,
                    witness=(ZERO,), null_sets=(FiniteSet.of(0), FiniteSet.of(Fraction(1, 2))),
                    description='f = 1, F = u, g(s) = |s|'),
        CovInstance('cantorabs-unit', ONE_FN, IDENTITY, CANTOR_ABS, Iv(-1, 1),
                    FailureSet(FailureKind.GENERATED, REFLECTED_CANTOR), _constant_on(CANTOR_ABS),
                    witness=(ZERO,), null_sets=(FiniteSet.of(Fraction(-1, 2), Fraction(1, 2)), REFLECTED_CANTOR),
                    description='f = 1, F = u, g = c(|s|)'),
        CovInstance('cantor-unit', ONE_FN, IDENTITY, CANTOR_FN, Iv(0, 1),
                    FailureSet(FailureKind.GENERATED, CANTOR), _constant_on(CANTOR_FN),
                    witness=(Fraction(1, 3), Fraction(2, 3)), null_sets=(FiniteSet.of(Fraction(1, 2)), CANTOR),
                    description='f = 1, F = u, g = c'),
    )
}


def lookup_instance(name: str) -> CovInstance:
    if name not in INSTANCES:
        raise UnknownNameError(f"unknown instance '{name}'")
    return INSTANCES[name]


#Outcome of the fundamental theorem for catalog functions on their natural domains
FTC_EXPECTED: Dict[str, bool] = {
    'identity': True,
    'square': True,
    'abs': True,
    'cantor_abs': True,
    'cantor_fn': False,
}


def failure_gauge(composite: FnSpec, failure: FailureSet, eps: Fraction) -> Gauge:

    """
        Radius on the failure set

        On a finite set of n points each point tags at most two cells, so a
        radius with oscillation below ε/(8n) keeps Σ|Δ| under ε/2. On
        other sets the radius is 1 and the cells are left to the variation
        of F∘g there.

        :param composite: F∘g
        :type composite: FnSpec
        :param failure: Failure set B
        :type failure: FailureSet
        :param eps: Target ε
        :type eps: Fraction

        :return: The gauge
        :rtype: Gauge
    """

    region: PointSet = failure.region
    if failure.kind is not FailureKind.FINITE:
        return Gauge(f"one-on({region.name})", lambda x: ONE, region.points_in)

    composite.require('continuity')
    target: Fraction = eps / (8 * len(region.points))

    def radius(x: Fraction) -> Fraction:
        #Only cells tagged in B count, so the radius shrinks on B alone
        if not region.contains(x):
            return ONE
        r: Fraction = ONE
        while composite.continuity(x, r) >= target:
            r /= 2
        return r

    return Gauge(f"continuity-on({region.name}, {eps})", radius, region.points_in)


def proof_gauge(
    composite: FnSpec,
    failure: FailureSet,
    eps: RatLike,
    span: RatLike,
    caller: Optional[Gauge] = None,
) -> Gauge:

    """
        Off B the modulus of F∘g at ε/(2·span), so the cells tagged off B
        contribute at most ε/2; on B the failure gauge, shrunk further by
        the caller's gauge when one is given

        :param composite: F∘g
        :type composite: FnSpec
        :param failure: Failure set B
        :type failure: FailureSet
        :param eps: Target ε
        :type eps: Fraction
        :param span: Length of the interval partitioned
        :type span: Fraction
        :param caller: Gauge applied on B only
        :type caller: Gauge

        :return: The gauge
        :rtype: Gauge
    """

    eps = parse_rat(eps)
    scale: Fraction = eps / (2 * parse_rat(span))
    on_failure: Gauge = failure_gauge(composite, failure, eps)
    if caller is not None:
        on_failure = on_failure.minimum(caller)

    def radius(x: Fraction) -> Fraction:
        if failure.contains(x):
            return on_failure.at(x)
        composite.require('modulus')
        return min(composite.modulus(x, scale), ONE)

    return Gauge(f"proof({composite.name}, {eps})", radius, failure.region.points_in)


@dataclass(frozen=True)
class CovRow:
    eps: Fraction
    sums: Tuple[ValueWithError, ...]
    discrepancy: Fraction
    passed: bool


@dataclass(frozen=True)
class CovReport:

    """
        Riemann sums of f∘g·h against F(g(β)) - F(g(α)), with the NCV
        report of F∘g on B
    """

    instance: str
    interval: Iv
    lhs: ValueWithError
    rows: Tuple[CovRow, ...]
    ncv: VariationReport
    expected: Optional[bool] = None
    witness: Optional[TaggedPartition] = None

    @property
    def holds(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def verdict(self) -> str:
        return 'holds-evidence' if self.holds else 'fails'

    @property
    def consistent(self) -> bool:
        return self.holds == (not self.ncv.refuted)

    @property
    def matches_expectation(self) -> Optional[bool]:
        return None if self.expected is None else self.holds == self.expected


def _rows(estimate: HKReport, lhs: ValueWithError) -> Tuple[Tuple[CovRow, ...], Optional[TaggedPartition]]:
    rows: List[CovRow] = []
    witness: Optional[TaggedPartition] = None
    for row in estimate.rows:
        gaps: List[Fraction] = [abs(value - lhs).upper for value in row.sums]
        discrepancy: Fraction = max(gaps, default=ZERO)
        passed: bool = discrepancy < row.eps
        if not passed and witness is None:
            witness = row.partitions[gaps.index(discrepancy)]
        rows.append(CovRow(row.eps, row.sums, discrepancy, passed))
    return tuple(rows), witness


def substitution_integrand(inst: CovInstance) -> FnSpec:
    #f∘g·g', set to 0 on B
    return product(compose(inst.f, inst.g), inst.g.derivative()).zero_on(inst.B.region)


def _ncv_on(composite: FnSpec, failure: FailureSet, interval: Iv, schedule: Sequence[RatLike], samples: int,
            seed: int, criterion: Criterion) -> VariationReport:
    span: Fraction = interval.length or ONE
    return test_negligible_variation(
        composite, Restricted(failure.region, interval),
        lambda eps: proof_gauge(composite, failure, eps, span),
        schedule, samples, seed, domain=interval, criterion=criterion,
    )


def cov_check(
    inst: CovInstance,
    interval: Optional[Iv] = None,
    schedule: Sequence[RatLike] = (Fraction(1, 10), Fraction(1, 100)),
    samples: int = 3,
    seed: int = 0,
) -> CovReport:

    """
        Compare F(g(β)) - F(g(α)) with Riemann sums of (f∘g)·h on [α, β],
        where h is g' with the value 0 on B

        :param inst: Instance
        :type inst: CovInstance
        :param interval: [α, β] inside the instance domain
        :type interval: Iv
        :param schedule: ε values
        :type schedule: Sequence[Fraction]
        :param samples: Partitions per ε
        :type samples: int
        :param seed: Seed of the randomized partitions
        :type seed: int

        :return: Sums, discrepancy per ε and the NCV cross-check
        :rtype: CovReport
    """

    interval = interval or inst.domain
    if not inst.domain.covers(interval):
        raise DomainError(f"{interval} is not inside the domain {inst.domain} of {inst.name}", witness=interval)

    g: FnSpec = inst.g
    start: ValueWithError = g(interval.lo)
    end: ValueWithError = g(interval.hi)
    if inst.F is not None:
        lhs: ValueWithError = inst.F(end.value) - inst.F(start.value)
    else:
        primitive: HKReport = hk_estimate(inst.f, start.value, end.value, lambda eps: Gauge.constant(eps),
                                          schedule, samples, seed)
        lhs = primitive.estimate

    composite: FnSpec = inst.composite
    integrand: FnSpec = substitution_integrand(inst)
    span: Fraction = interval.length or ONE
    estimate: HKReport = hk_estimate(
        integrand, interval.lo, interval.hi,
        lambda eps: proof_gauge(composite, inst.B, eps, span),
        schedule, samples, seed,
    )
    rows, witness = _rows(estimate, lhs)
    ncv: VariationReport = _ncv_on(composite, inst.B, interval, schedule, samples, seed, Criterion.SIGNED)

    report: CovReport = CovReport(inst.name, interval, lhs, rows, ncv, inst.expected(interval), witness)
    logger.info("cov %s on %s: %s (ncv %s)", inst.name, interval, report.verdict, ncv.verdict.value)
    return report


def ftc_check(
    g: FnSpec,
    domain: Optional[Iv] = None,
    schedule: Sequence[RatLike] = (Fraction(1, 10), Fraction(1, 100)),
    samples: int = 3,
    seed: int = 0,
    caller: Optional[Gauge] = None,
) -> CovReport:

    """
        Compare g(b) - g(a) with Riemann sums of g', taken as 0 on the
        failure set of g

        :param g: Function with a derivative certificate
        :type g: FnSpec
        :param domain: [a, b], the domain of g by default
        :type domain: Iv
        :param schedule: ε values
        :type schedule: Sequence[Fraction]
        :param samples: Partitions per ε
        :type samples: int
        :param seed: Seed of the randomized partitions
        :type seed: int
        :param caller: Extra gauge on the failure set
        :type caller: Gauge

        :return: Sums, discrepancy per ε and the NCV report of g on its
            failure set
        :rtype: CovReport
    """

    domain = domain or g.domain
    lhs: ValueWithError = g(domain.hi) - g(domain.lo)
    span: Fraction = domain.length or ONE
    estimate: HKReport = hk_estimate(
        g.derivative(), domain.lo, domain.hi,
        lambda eps: proof_gauge(g, g.failure_set, eps, span, caller),
        schedule, samples, seed,
    )
    rows, witness = _rows(estimate, lhs)
    ncv: VariationReport = _ncv_on(g, g.failure_set, domain, schedule, samples, seed, Criterion.SIGNED)

    expected: Optional[bool] = FTC_EXPECTED.get(g.name) if domain == g.domain else None
    report: CovReport = CovReport(f"ftc:{g.name}", domain, lhs, rows, ncv, expected, witness)
    logger.info("ftc %s on %s: %s", g.name, domain, report.verdict)
    return report


@dataclass(frozen=True)
class NullSetResult:
    null_set: str
    verdict: Optional[Verdict]
    note: str = ''


@dataclass(frozen=True)
class CovScan:

    """
        cov_check per subinterval joined with NV of F∘g on B, on the set
        where g' = 0 and on the sample null sets
    """

    instance: str
    entries: Tuple[CovReport, ...]
    nv_on_b: VariationReport
    nv_on_critical: Optional[VariationReport]
    null_sets: Tuple[NullSetResult, ...] = field(default=())

    @property
    def all_hold(self) -> bool:
        return all(entry.holds for entry in self.entries)

    @property
    def consistent(self) -> bool:
        return self.all_hold == (not self.nv_on_b.refuted)

    @property
    def equivalent_conditions(self) -> bool:
        critical_ok: bool = self.nv_on_critical is None or not self.nv_on_critical.refuted
        return critical_ok and all(result.verdict is not Verdict.REFUTED for result in self.null_sets)

    def verdict_for(self, interval: Iv) -> str:
        return next(entry.verdict for entry in self.entries if entry.interval == interval)


def default_grid(inst: CovInstance) -> List[Iv]:

    """
        The domain, its halves and the pieces cut by the witness points
    """

    domain: Iv = inst.domain
    grid: List[Iv] = [domain, *domain.split()]
    cuts: List[Fraction] = sorted({p for p in inst.witness if domain.contains_open(p)})
    bounds: List[Fraction] = [domain.lo] + cuts + [domain.hi]
    grid.extend(Iv(lo, hi) for lo, hi in zip(bounds, bounds[1:]))
    return list(dict.fromkeys(grid))


def _null_set_variation(composite: FnSpec, null_set: PointSet, inst: CovInstance, schedule: Sequence[RatLike],
                        samples: int, seed: int) -> NullSetResult:
    domain: Iv = inst.domain
    if isinstance(null_set, FiniteSet):
        failure: FailureSet = FailureSet(FailureKind.FINITE, null_set)

        def builder(eps: Fraction) -> Gauge:
            return failure_gauge(composite, failure, eps).minimum(proof_gauge(composite, inst.B, eps, domain.length))
    elif isinstance(null_set, GeneratedSet):
        def builder(eps: Fraction) -> Gauge:
            return gauge_dist_complement(null_set).minimum(proof_gauge(composite, inst.B, eps, domain.length))
    else:
        return NullSetResult(null_set.name, None, 'no gauge construction for this set')

    report: VariationReport = test_negligible_variation(
        composite, null_set, builder, schedule, samples, seed, domain=domain, criterion=Criterion.ABSOLUTE,
    )
    return NullSetResult(null_set.name, report.verdict)


def cov_scan_all_subintervals(
    inst: CovInstance,
    grid: Optional[Sequence[Iv]] = None,
    schedule: Sequence[RatLike] = (Fraction(1, 10), Fraction(1, 100)),
    seed: int = 0,
    samples: int = 3,
) -> CovScan:

    """
        Check the substitution on every grid interval and NV of F∘g on B

        :param inst: Instance
        :type inst: CovInstance
        :param grid: Subintervals, default_grid(inst) when omitted
        :type grid: Sequence[Iv]
        :param schedule: ε values
        :type schedule: Sequence[Fraction]
        :param seed: Seed of the randomized partitions
        :type seed: int
        :param samples: Partitions per ε
        :type samples: int

        :return: Per-interval reports and the NV reports
        :rtype: CovScan
    """

    cells: List[Iv] = list(grid) if grid is not None else default_grid(inst)
    entries: Tuple[CovReport, ...] = tuple(cov_check(inst, cell, schedule, samples, seed) for cell in cells)

    composite: FnSpec = inst.composite
    nv_on_b: VariationReport = _ncv_on(composite, inst.B, inst.domain, schedule, samples, seed, Criterion.ABSOLUTE)

    nv_on_critical: Optional[VariationReport] = None
    critical: PointSet = Restricted(inst.g.critical, inst.domain)
    if inst.g.critical is not EMPTY and composite.modulus is not None:
        span: Fraction = inst.domain.length

        def builder(eps: Fraction) -> Gauge:
            return gauge_from_zero_derivative(composite, critical, eps, span).minimum(
                failure_gauge(composite, inst.B, eps)
            )

        nv_on_critical = test_negligible_variation(
            composite, critical, builder, schedule, samples, seed, domain=inst.domain,
        )

    null_sets: Tuple[NullSetResult, ...] = tuple(
        _null_set_variation(composite, null_set, inst, schedule, samples, seed) for null_set in inst.null_sets
    )
    scan: CovScan = CovScan(inst.name, entries, nv_on_b, nv_on_critical, null_sets)
    logger.info("scan %s: all hold %s, NV on B %s", inst.name, scan.all_hold, nv_on_b.verdict.value)
    return scan


FG: FnSpec = compose(QUARTIC_ROOT, SVC_DIST)


@dataclass(frozen=True)
class SvcCheck:

    """
        One point of the fat Cantor set where F∘G has a difference quotient
        above 2^((2n-3)/4)
    """

    n: int
    x: Fraction
    y: Fraction
    quotient: ValueWithError
    bound: ValueWithError
    ok: bool


def svc_composition_check(n: int, x: RatLike) -> SvcCheck:

    """
        Take y at the centre of the cell of depth n holding x. The gap
        removed there has half-width 2^(-2n-3) and |y - x| < 2^-n, so
        (F∘G)(y)/|y - x| exceeds 2^((2n-3)/4). The comparison is made on
        fourth powers, G(y)/(y - x)^4 > 2^(2n-3), which is exact.

        :param n: Depth, at least 1
        :type n: int
        :param x: Point of the fat Cantor set
        :type x: Fraction

        :return: The nearby point, the quotient and the bound
        :rtype: SvcCheck
    """

    x = parse_rat(x)
    if n < 1:
        raise DomainError(f"depth must be at least 1, got {n}", witness=n)
    if not member(SVC, x):
        raise DomainError(f"{x} is not in {SVC.name}", witness=x)

    cell: Optional[Iv] = next((cell for cell in realize(SVC, n) if cell.contains(x)), None)
    if cell is None:
        raise DomainError(f"{x} lies in no depth-{n} cell of {SVC.name}", witness=x)
    y: Fraction = cell.midpoint
    half_gap: Fraction = Fraction(1, 2 ** (2 * n + 3))
    g_y: ValueWithError = SVC_DIST(y)
    if not (abs(y - x) < Fraction(1, 2 ** n) and g_y.exact and g_y.value >= half_gap):
        raise DomainError(f"no qualifying point near {x} at depth {n}", witness=x)

    quotient: ValueWithError = abs(FG(y) - FG(x)).scaled(1 / abs(y - x))
    power: Fraction = Fraction(2) ** (2 * n - 3)
    ok: bool = g_y.value / (y - x) ** 4 > power
    return SvcCheck(n, x, y, quotient, quartic_root(power), ok)


def sample_svc_points(count: int, depth: int, seed: int) -> List[Fraction]:

    """
        Distinct endpoints of the depth cells, all of which lie in the set
    """

    endpoints: List[Fraction] = sorted({end for cell in realize(SVC, depth) for end in (cell.lo, cell.hi)})
    return sorted(random.Random(seed).sample(endpoints, min(count, len(endpoints))))
