from typing import Any, Dict, TextIO

from django.core.management.base import CommandParser

from hklab.core import Gauge, Iv
from hklab.cov import CovInstance, CovReport, cov_check, lookup_instance, proof_gauge, substitution_integrand
from hklab.exports import write_partition_csv
from hklab.funcs import FailureSet, FnSpec
from hklab.serializers import CovReportSerializer

from ._base import LabCommand, RunOutcome, expectation


def cov_outcome(report: CovReport, config: Dict[str, Any], composite: FnSpec, failure: FailureSet,
                integrand: FnSpec) -> RunOutcome:

    """
        Outcome shared by cov and ftc; the first failing partition, if
        any, is dumped under the proof gauge of its ε
    """

    table = None
    if report.witness is not None:
        failed = next(row for row in report.rows if not row.passed)
        gauge: Gauge = proof_gauge(composite, failure, failed.eps, report.interval.length or 1)

        def table(stream: TextIO) -> int:
            return write_partition_csv(stream, report.witness, gauge, integrand)

    expected = expectation(config, report.expected)
    consistency: str = 'consistent' if report.consistent else 'INCONSISTENT'
    return RunOutcome(
        CovReportSerializer(report).data,
        f"{report.instance} on {report.interval}: {report.verdict}, NCV on B {report.ncv.verdict.value} ({consistency})",
        None if expected is None else report.holds == expected,
        table,
    )


class Command(LabCommand):
    help = 'Check the change-of-variables formula of a catalog instance on [α, β]'
    config_options = ('instance', 'domain')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--instance', required=True)
        parser.add_argument('--interval', dest='domain', nargs=2, metavar=('ALPHA', 'BETA'))

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        inst: CovInstance = lookup_instance(config['instance'])
        interval: Iv = config.get('interval') or inst.domain
        report: CovReport = cov_check(inst, interval, config['eps'], config['samples'], config['seed'])
        return cov_outcome(report, config, inst.composite, inst.B, substitution_integrand(inst))
