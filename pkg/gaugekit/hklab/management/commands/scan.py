from typing import Any, Dict

from django.core.management.base import CommandParser

from hklab.cov import CovInstance, CovScan, cov_scan_all_subintervals, lookup_instance
from hklab.serializers import CovScanSerializer

from ._base import LabCommand, RunOutcome, expectation


class Command(LabCommand):
    help = 'Check the change of variables on every grid subinterval and NV of F∘g on B'
    config_options = ('instance', 'grid')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--instance', required=True)
        parser.add_argument('--grid', nargs='+', metavar='LO:HI',
                            help='Subintervals, default the domain, its halves and the witness cuts')

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        inst: CovInstance = lookup_instance(config['instance'])
        scan: CovScan = cov_scan_all_subintervals(
            inst, config.get('grid'), config['eps'], config['seed'], config['samples'],
        )

        #hold: every cell should hold; fail: some cell should fail; auto: each cell as declared
        expected = expectation(config, None)
        if expected is None:
            matched: bool = all(entry.matches_expectation is not False for entry in scan.entries)
        else:
            matched = scan.all_hold == expected

        held: int = sum(entry.holds for entry in scan.entries)
        return RunOutcome(
            CovScanSerializer(scan).data,
            f"scan {inst.name}: {held}/{len(scan.entries)} cells hold, NV on B {scan.nv_on_b.verdict.value}, "
            f"conditions {'agree' if scan.equivalent_conditions else 'DISAGREE'}",
            matched,
        )
