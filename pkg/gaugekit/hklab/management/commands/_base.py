import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TextIO

from django.core.management.base import BaseCommand, CommandError, CommandParser

from hklab.conf import lab_overrides
from hklab.exceptions import CousinDepthError, DomainError, ExitCode, GaugeKitError
from hklab.exports import render_report, report_path, sibling_path
from hklab.serializers import IvSerializer, RunConfigSerializer

logger = logging.getLogger(__name__)

CsvWriter = Callable[[TextIO], int]


@dataclass
class RunOutcome:

    """
        What a subcommand hands back: serialized report, one-line summary,
        whether the verdict matched the expectation (None when nothing was
        expected) and an optional CSV dump
    """

    report: Dict[str, Any]
    summary: str
    matched: Optional[bool] = None
    table: Optional[CsvWriter] = None
    table_label: str = 'witness'


def expectation(config: Dict[str, Any], default: Optional[bool]) -> Optional[bool]:
    return {'hold': True, 'fail': False}.get(config['expect'], default)


class LabCommand(BaseCommand):

    """
        Base of the laboratory subcommands

        Validates the run configuration, applies per-run overrides, writes
        the report file and maps failures onto exit codes.
    """

    #Options each subcommand forwards to RunConfigSerializer
    config_options: tuple = ()

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument('--seed', type=int, help='Seed of the randomized partitions')
        parser.add_argument('--samples', type=int, default=3, help='Partitions sampled per ε')
        parser.add_argument('--eps', nargs='+', help='ε schedule, e.g. 1/10 1/100 or 1e-3')
        parser.add_argument('--depth-cap', type=int, help='Bisection depth cap for this run')
        parser.add_argument('--out', help='Report file, REPORT_DIR/<command>-<seed>.json by default')
        parser.add_argument('--format', choices=['json', 'csv'], default='json')
        parser.add_argument('--expect', choices=['auto', 'hold', 'fail'], default='auto',
                            help='Expected verdict; auto uses the declared expectation')
        self.add_lab_arguments(parser)

    def add_lab_arguments(self, parser: CommandParser) -> None:
        pass

    def run(self, config: Dict[str, Any]) -> RunOutcome:
        raise NotImplementedError

    def validated_config(self, options: Dict[str, Any]) -> Dict[str, Any]:

        """
            This method validate the command-line options

            :param options: Parsed options
            :type options: dict

            :return: Validated configuration
            :rtype: dict
        """

        data: Dict[str, Any] = {
            'command': self.command_name,
            'seed': options.get('seed'),
            'samples': options.get('samples'),
            'depth_cap': options.get('depth_cap'),
            'out': options.get('out'),
            'format': options.get('format'),
            'expect': options.get('expect'),
        }
        if options.get('eps'):
            data['eps'] = options['eps']
        for name in self.config_options:
            if options.get(name) is not None:
                data[name] = options[name]

        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"config: {dict(serializer.errors)}", returncode=ExitCode.BAD_CONFIG)
        return serializer.validated_data

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    def handle(self, *args: Any, **options: Any) -> None:
        config: Dict[str, Any] = self.validated_config(options)
        path: Path = report_path(self.command_name, config.get('seed'), config.get('out'),
                                 'csv' if config['format'] == 'csv' else 'json')

        try:
            with lab_overrides(DEPTH_CAP=config.get('depth_cap')):
                outcome: RunOutcome = self.run(config)
        except GaugeKitError as exc:
            logger.error("%s failed: %s", self.command_name, exc.detail)
            path.write_bytes(render_report(self.command_name, {'error': self.describe_error(exc)}))
            raise CommandError(f"{exc.code}: {exc.detail}", returncode=exc.exit_code) from exc

        self.write(outcome, config, path)
        self.stdout.write(f"{outcome.summary} [{path}]")

        if outcome.matched is False:
            raise CommandError(f"verdict does not match the expectation: {outcome.summary}",
                               returncode=ExitCode.MISMATCH)

    def write(self, outcome: RunOutcome, config: Dict[str, Any], path: Path) -> None:
        if config['format'] == 'csv':
            if outcome.table is None:
                raise CommandError(f"{self.command_name} has no tabular output", returncode=ExitCode.BAD_CONFIG)
            with path.open('w', newline='') as stream:
                outcome.table(stream)
            return

        report: Dict[str, Any] = dict(outcome.report)
        if outcome.table is not None:
            table_path: Path = sibling_path(path, outcome.table_label)
            with table_path.open('w', newline='') as stream:
                outcome.table(stream)
            report[f"{outcome.table_label}_file"] = table_path.name
        path.write_bytes(render_report(self.command_name, report))

    @staticmethod
    def describe_error(exc: GaugeKitError) -> Dict[str, Any]:
        error: Dict[str, Any] = {'code': exc.code, 'exit_code': int(exc.exit_code), 'detail': exc.detail}
        if isinstance(exc, CousinDepthError):
            error['interval'] = IvSerializer(exc.interval).data
            error['gauge'] = exc.gauge
            error['depth'] = exc.depth
        elif isinstance(exc, DomainError) and exc.witness is not None:
            error['witness'] = str(exc.witness)
        return error
