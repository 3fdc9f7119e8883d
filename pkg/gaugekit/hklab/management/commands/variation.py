from fractions import Fraction
from typing import Any, Callable, Dict, Optional, TextIO

from django.core.management.base import CommandParser

from hklab.core import Gauge, Iv, TaggedPartition
from hklab.cov import failure_gauge
from hklab.exceptions import ConfigError, UnsupportedInstanceError
from hklab.exports import write_partition_csv
from hklab.funcs import FailureKind, FailureSet, FnSpec, lookup
from hklab.serializers import AdversarialResultSerializer, VariationReportSerializer
from hklab.sets import EmptySet, FiniteSet, GeneratedSet, PointSet, lookup_set
from hklab.variation import (AdversarialResult, Criterion, VariationReport, Verdict, adversarial_variation,
                             dini_covers, gauge_dist_complement, gauge_from_dini, gauge_from_zero_derivative,
                             parse_strategy, test_negligible_variation)

from ._base import LabCommand, RunOutcome, expectation

GaugeBuilder = Callable[[Fraction], Gauge]


def gauge_builder(kind: str, f: FnSpec, tagged_in: PointSet, domain: Iv) -> GaugeBuilder:

    """
        Gauge per ε for the variation of f over tags in a set

        auto picks dist for generated sets, zero when f' vanishes on a
        finite set, continuity on other finite sets and the constant 1 on
        the empty set.
    """

    if kind == 'auto':
        if isinstance(tagged_in, GeneratedSet):
            kind = 'dist'
        elif isinstance(tagged_in, EmptySet):
            kind = 'constant'
        elif isinstance(tagged_in, FiniteSet):
            vanishes: bool = f.deriv is not None and f.modulus is not None and all(
                f.differentiable_at(p) and f.deriv(p).value == 0 for p in tagged_in.points
            )
            kind = 'zero' if vanishes else 'continuity'
        else:
            raise UnsupportedInstanceError(f"no default gauge for tags in {tagged_in.name}")

    if kind == 'constant':
        return lambda eps: Gauge.constant(1)
    if kind == 'dist':
        if not isinstance(tagged_in, GeneratedSet):
            raise UnsupportedInstanceError(f"dist gauge needs a generated set, got {tagged_in.name}")
        return lambda eps: gauge_dist_complement(tagged_in)
    if kind == 'zero':
        return lambda eps: gauge_from_zero_derivative(f, tagged_in, eps, domain.length)
    if kind == 'continuity':
        if not isinstance(tagged_in, FiniteSet):
            raise UnsupportedInstanceError(f"continuity gauge needs a finite set, got {tagged_in.name}")
        failure: FailureSet = FailureSet(FailureKind.FINITE, tagged_in)
        return lambda eps: failure_gauge(f, failure, eps)
    if kind == 'dini':
        return lambda eps: gauge_from_dini(f, tagged_in, dini_covers(tagged_in, eps), eps)
    raise ConfigError(f"unknown gauge kind '{kind}'")


class Command(LabCommand):
    help = 'Test negligible variation (nv) or negligible conditional variation (ncv) of a function on a set'
    config_options = ('fn', 'tagged_in', 'domain', 'mode', 'adversary', 'gauge')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--fn', required=True)
        parser.add_argument('--set', dest='tagged_in', required=True, help='C, D, S, empty or {p1,p2}')
        parser.add_argument('--mode', choices=['nv', 'ncv'], default='nv')
        parser.add_argument('--adversary', help='split:<p1,p2>, repartition or greedy-sign')
        parser.add_argument('--gauge', default='auto', help='auto, constant, dist, zero, continuity or dini')
        parser.add_argument('--domain', nargs=2, metavar=('A', 'B'))

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        f: FnSpec = lookup(config['fn'])
        tagged_in: PointSet = lookup_set(config['tagged_in'])
        domain: Iv = config.get('interval') or f.domain
        criterion: Criterion = Criterion.ABSOLUTE if config['mode'] == 'nv' else Criterion.SIGNED
        builder: GaugeBuilder = gauge_builder(config.get('gauge') or 'auto', f, tagged_in, domain)

        report: VariationReport = test_negligible_variation(
            f, tagged_in, builder, config['eps'], config['samples'], config['seed'],
            domain=domain, criterion=criterion,
        )
        verdict: Verdict = report.verdict
        witness: Optional[TaggedPartition] = report.witness.partition if report.witness else None
        witness_gauge: Optional[Gauge] = None

        adversary: Optional[AdversarialResult] = None
        if config.get('adversary'):
            eps: Fraction = config['eps'][-1]
            gauge: Gauge = builder(eps)
            adversary = adversarial_variation(f, tagged_in, gauge, parse_strategy(config['adversary']), domain)
            sum_checked = adversary.sums.abs_sum if criterion is Criterion.ABSOLUTE else adversary.sums.signed_abs
            if not sum_checked.upper < eps:
                verdict = Verdict.REFUTED
                witness, witness_gauge = adversary.partition, gauge

        if witness is not None and witness_gauge is None:
            witness_gauge = builder(report.witness.eps)

        table = None
        if witness is not None:
            def table(stream: TextIO) -> int:
                return write_partition_csv(stream, witness, witness_gauge, f)

        data: Dict[str, Any] = {
            'verdict': verdict.value,
            'test': VariationReportSerializer(report).data,
            'adversary': AdversarialResultSerializer(adversary).data if adversary else None,
        }
        expected = expectation(config, None)
        summary: str = f"variation of {f.name} on {tagged_in.name} ({config['mode']}): {verdict.value}"
        if adversary is not None:
            summary += f", {adversary.strategy} abs_sum {adversary.sums.abs_sum}"
        return RunOutcome(
            data, summary,
            None if expected is None else (verdict is not Verdict.REFUTED) == expected,
            table,
        )
