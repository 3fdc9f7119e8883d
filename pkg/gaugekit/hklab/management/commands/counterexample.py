from fractions import Fraction
from typing import Any, Dict, List

from django.core.management.base import CommandParser

from hklab.cov import SvcCheck, sample_svc_points, svc_composition_check
from hklab.exceptions import ConfigError, UnsupportedInstanceError
from hklab.serializers import SvcCheckSerializer

from ._base import LabCommand, RunOutcome, expectation


class Command(LabCommand):
    help = 'Check that F∘G has unbounded difference quotients at points of the fat Cantor set'
    config_options = ('svc', 'n', 'points', 'x_index')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--svc', action='store_true', help='The fat Cantor set construction (the only one)')
        parser.add_argument('-n', dest='n', type=int, nargs='+', help='Depths to check, default 2..12')
        parser.add_argument('--points', type=int, default=50, help='Points of S sampled from cell endpoints')
        parser.add_argument('--x-index', type=int, help='Check only this sampled point')

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        if not config['svc']:
            raise UnsupportedInstanceError("counterexample needs --svc, the only construction available")

        depths: List[int] = sorted(set(config['n']))
        points: List[Fraction] = sample_svc_points(config['points'], max(depths), config['seed'])
        if config.get('x_index') is not None:
            if config['x_index'] >= len(points):
                raise ConfigError(f"--x-index {config['x_index']} is past the {len(points)} sampled points")
            points = [points[config['x_index']]]

        checks: List[SvcCheck] = [svc_composition_check(n, x) for n in depths for x in points]
        failures: int = sum(not check.ok for check in checks)
        expected = expectation(config, True)
        return RunOutcome(
            {
                'depths': depths,
                'points': len(points),
                'failures': failures,
                'checks': SvcCheckSerializer(checks, many=True).data,
            },
            f"F∘G quotient bound at {len(points)} points of S, n = {depths[0]}..{depths[-1]}: {failures} failures",
            (failures == 0) == expected,
        )
