from typing import Any, Dict, Optional

from django.core.management.base import CommandParser

from hklab.core import Gauge, Iv
from hklab.cov import CovReport, ftc_check
from hklab.funcs import FnSpec, lookup

from ._base import LabCommand, RunOutcome
from .cov import cov_outcome
from .partition import parse_gauge


class Command(LabCommand):
    help = "Check g(b) - g(a) against sampled sums of g' over [a, b]"
    config_options = ('fn', 'domain', 'gauge')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--fn', required=True)
        parser.add_argument('--domain', nargs=2, metavar=('A', 'B'))
        parser.add_argument('--gauge', help='Extra gauge on the failure set: constant:<r> or dist:<set>')

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        g: FnSpec = lookup(config['fn'])
        domain: Iv = config.get('interval') or g.domain
        caller: Optional[Gauge] = parse_gauge(config['gauge'], g, domain) if config.get('gauge') else None
        report: CovReport = ftc_check(g, domain, config['eps'], config['samples'], config['seed'], caller)
        return cov_outcome(report, config, g, g.failure_set, g.derivative())
