"""
Report files: the versioned JSON envelope and the CSV dumps of
partitions and set realizations.
"""

import csv
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, TextIO

from rest_framework.renderers import JSONRenderer

from .conf import lab_setting
from .core import Gauge, TaggedPartition, ValueWithError, format_rat
from .sets import GeneratedSet, realize

logger = logging.getLogger(__name__)

PARTITION_HEADER: List[str] = ['tag', 'cell_lo', 'cell_hi', 'radius_at_tag', 'f_at_tag']
REALIZATION_HEADER: List[str] = ['depth', 'lo', 'hi']


def render_report(command: str, report: Dict[str, Any]) -> bytes:

    """
        Render serialized report data inside the schema envelope

        Key order is fixed by the serializers, so identical runs render
        to identical bytes.

        :param command: Subcommand that produced the report
        :type command: str
        :param report: Serializer output
        :type report: dict

        :return: UTF-8 JSON document
        :rtype: bytes
    """

    envelope: Dict[str, Any] = {'schema': lab_setting('SCHEMA'), 'command': command, 'report': report}
    return JSONRenderer().render(envelope) + b'\n'


def write_partition_csv(
    stream: TextIO,
    partition: TaggedPartition,
    gauge: Gauge,
    f: Callable[[Any], ValueWithError],
) -> int:

    """
        Dump one row per tagged cell; inexact values are written as the
        centre of their bracket

        :return: Number of rows written
        :rtype: int
    """

    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(PARTITION_HEADER)
    for item in partition:
        writer.writerow([
            format_rat(item.tag),
            format_rat(item.cell.lo),
            format_rat(item.cell.hi),
            format_rat(gauge.at(item.tag)),
            format_rat(f(item.tag).value),
        ])
    return len(partition)


def write_realization_csv(stream: TextIO, generated: GeneratedSet, depth: int) -> int:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(REALIZATION_HEADER)
    rows: int = 0
    for level in range(depth + 1):
        for cell in realize(generated, level):
            writer.writerow([level, format_rat(cell.lo), format_rat(cell.hi)])
            rows += 1
    return rows


def report_path(command: str, seed: Any, out: Any = None, suffix: str = 'json') -> Path:

    """
        Path of a report file: --out when given, otherwise
        REPORT_DIR/<command>-<seed>.<suffix>
    """

    path: Path = Path(out) if out else Path(lab_setting('REPORT_DIR')) / f"{command}-{seed if seed is not None else 'na'}.{suffix}"
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def sibling_path(path: Path, label: str) -> Path:
    #report.json -> report.witness.csv
    return path.with_name(f"{path.stem}.{label}.csv")
