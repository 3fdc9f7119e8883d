from typing import Any, Dict, Optional, TextIO

from django.core.management.base import CommandParser

from hklab.core import format_rat
from hklab.cov import INSTANCES
from hklab.exceptions import UnsupportedInstanceError
from hklab.exports import write_realization_csv
from hklab.funcs import ALIASES, catalog
from hklab.serializers import CovInstanceSerializer, FnSpecDescriptorSerializer
from hklab.sets import SETS, GeneratedSet, PointSet, lookup_set, measure_at

from ._base import LabCommand, RunOutcome


class Command(LabCommand):
    help = 'List the catalog functions, instances and sets; --realize dumps a set realization'
    config_options = ('realize', 'depth')

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--realize', help='Generated set whose realization is dumped, e.g. S')
        parser.add_argument('--depth', type=int, default=4)

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        functions = catalog()
        report: Dict[str, Any] = {
            'functions': FnSpecDescriptorSerializer(list(functions.values()), many=True).data,
            'aliases': dict(sorted(ALIASES.items())),
            'instances': CovInstanceSerializer(list(INSTANCES.values()), many=True).data,
            'sets': sorted(SETS),
        }

        table = None
        name: Optional[str] = config.get('realize')
        if name:
            target: PointSet = lookup_set(name)
            if not isinstance(target, GeneratedSet):
                raise UnsupportedInstanceError(f"{target.name} has no realization")
            depth: int = config['depth']
            report['realization'] = {'set': target.name, 'depth': depth, 'measure': format_rat(measure_at(target, depth))}

            def table(stream: TextIO) -> int:
                return write_realization_csv(stream, target, depth)

        return RunOutcome(
            report,
            f"catalog: {len(functions)} functions, {len(INSTANCES)} instances, {len(SETS)} set names",
            None,
            table,
            'realization',
        )
