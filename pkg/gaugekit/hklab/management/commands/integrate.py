from fractions import Fraction
from typing import Any, Dict, TextIO

from django.core.management.base import CommandParser

from hklab.core import Gauge, HKReport, hk_estimate
from hklab.exports import write_partition_csv
from hklab.funcs import FnSpec, lookup
from hklab.serializers import HKReportSerializer

from ._base import LabCommand, RunOutcome, expectation


def constant_family(f: FnSpec):

    """
        ε ↦ the constant gauge ε, with the failure set of f as tag oracle
    """

    def family(eps: Fraction) -> Gauge:
        return Gauge(f"constant({eps})", lambda x: eps, f.failure_set.region.points_in)

    return family


class Command(LabCommand):
    help = 'Sampled Henstock-Kurzweil sums of a catalog function over [a, b]'
    config_options = ('fn', 'domain', 'tolerance')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--fn', required=True, help='Catalog function, alias, const:<rat> or <name>_deriv')
        parser.add_argument('--domain', nargs=2, metavar=('A', 'B'), help='Limits a b; b < a negates the integral')
        parser.add_argument('--tolerance', help='Convergence threshold on the final spread')

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        f: FnSpec = lookup(config['fn'])
        a, b = config['domain'] if config.get('domain') else (f.domain.lo, f.domain.hi)
        report: HKReport = hk_estimate(
            f, a, b, constant_family(f), config['eps'],
            samples=config['samples'], seed=config['seed'], tolerance=config.get('tolerance'),
        )

        #Last sampled partition, tagged under the smallest ε
        gauge: Gauge = constant_family(f)(report.rows[-1].eps)

        def table(stream: TextIO) -> int:
            return write_partition_csv(stream, report.witness, gauge, f)

        estimate = report.estimate
        shown: str = str(estimate) if estimate is not None else 'none'
        converged: str = 'converged' if report.converged else 'not converged'
        expected = expectation(config, None)
        return RunOutcome(
            HKReportSerializer(report).data,
            f"integrate {f.name} from {a} to {b}: {shown} ({converged}, spread {report.rows[-1].spread})",
            None if expected is None else report.converged == expected,
            table,
        )
