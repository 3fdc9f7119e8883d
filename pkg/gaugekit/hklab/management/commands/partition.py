import random
from typing import Any, Dict, Optional, TextIO

from django.core.management.base import CommandParser

from hklab.core import (Gauge, Iv, PartitionCheck, TaggedPartition, cousin_partition, format_rat, is_subordinate,
                        parse_rat, riemann_sum, validate_partition)
from hklab.cov import proof_gauge
from hklab.exceptions import ConfigError, UnsupportedInstanceError
from hklab.exports import write_partition_csv
from hklab.funcs import FnSpec, lookup
from hklab.serializers import PartitionSummarySerializer, ValueWithErrorSerializer
from hklab.sets import GeneratedSet, PointSet, lookup_set
from hklab.variation import gauge_dist_complement

from ._base import LabCommand, RunOutcome, expectation


def parse_gauge(text: str, f: FnSpec, domain: Iv) -> Gauge:

    """
        Gauge named on the command line

        constant:<r>   constant radius r
        dist:<set>     1 on a generated set, distance to it off the set
        proof:<eps>    modulus gauge of f at ε, with its failure set as oracle
    """

    kind, _, argument = text.partition(':')
    if kind == 'constant':
        return Gauge.constant(argument or 1)
    if kind == 'dist':
        target: PointSet = lookup_set(argument)
        if not isinstance(target, GeneratedSet):
            raise UnsupportedInstanceError(f"dist gauge needs a generated set, got {target.name}")
        return gauge_dist_complement(target)
    if kind == 'proof':
        return proof_gauge(f, f.failure_set, parse_rat(argument or '1/10'), domain.length)
    raise ConfigError(f"unknown gauge '{text}'; use constant:<r>, dist:<set> or proof:<eps>")


class Command(LabCommand):
    help = 'Build one Cousin partition subordinate to a gauge and dump it'
    config_options = ('fn', 'domain', 'gauge')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--fn', required=True, help='Function evaluated at the tags')
        parser.add_argument('--domain', nargs=2, metavar=('A', 'B'))
        parser.add_argument('--gauge', default='constant:1', help='constant:<r>, dist:<set> or proof:<eps>')

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        f: FnSpec = lookup(config['fn'])
        domain: Iv = config.get('interval') or f.domain
        gauge: Gauge = parse_gauge(config.get('gauge') or 'constant:1', f, domain)

        #Deterministic leftmost-tag bisection unless a seed is given
        rng: Optional[random.Random] = random.Random(config['seed']) if config.get('seed') is not None else None
        partition: TaggedPartition = cousin_partition(domain, gauge, rng=rng)
        check: PartitionCheck = validate_partition(partition)
        subordinate: bool = is_subordinate(partition, gauge)

        report: Dict[str, Any] = {
            'function': f.name,
            'gauge': gauge.name,
            'partition': PartitionSummarySerializer(partition).data,
            'valid': check.ok,
            'violations': [{'index': v.index, 'rule': v.rule, 'detail': v.detail} for v in check.violations],
            'subordinate': subordinate,
            'riemann_sum': ValueWithErrorSerializer(riemann_sum(f, partition)).data,
        }

        def table(stream: TextIO) -> int:
            return write_partition_csv(stream, partition, gauge, f)

        return RunOutcome(
            report,
            f"partition of [{format_rat(domain.lo)}, {format_rat(domain.hi)}] under {gauge.name}: "
            f"{len(partition)} cells, valid {check.ok}, subordinate {subordinate}",
            (check.ok and subordinate) == expectation(config, True),
            table,
            'partition',
        )
