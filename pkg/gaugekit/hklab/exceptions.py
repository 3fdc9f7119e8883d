from enum import IntEnum
from typing import Any, Optional


class ExitCode(IntEnum):

    """
        Process exit codes of the CLI, one per failure class
    """

    OK = 0
    MISMATCH = 1
    UNKNOWN_NAME = 2
    PARTITION_FAILURE = 3
    UNSUPPORTED = 4
    BAD_CONFIG = 5
    DOMAIN = 6


class GaugeKitError(Exception):

    """
        Base class of every laboratory failure
    """

    default_code: str = 'error'
    exit_code: ExitCode = ExitCode.DOMAIN

    def __init__(self, detail: str, code: Optional[str] = None) -> None:
        super().__init__(detail)
        self.detail: str = detail
        self.code: str = code or self.default_code


class DomainError(GaugeKitError):

    """
        A value lies outside the domain of a function or a set
    """

    default_code = 'domain'

    def __init__(self, detail: str, witness: Any = None) -> None:
        super().__init__(detail)
        #Point that triggered the failure
        self.witness: Any = witness


class NotInComplementError(DomainError):
    default_code = 'not_in_complement'


class UndecidedMembershipError(DomainError):

    """
        Exact set descent reached its depth cap without a decision
    """

    default_code = 'undecided'


class UnknownNameError(GaugeKitError):
    default_code = 'unknown_name'
    exit_code = ExitCode.UNKNOWN_NAME


class PartitionError(GaugeKitError):
    default_code = 'partition'
    exit_code = ExitCode.PARTITION_FAILURE


class CousinDepthError(PartitionError):

    """
        Bisection exhausted its depth budget; carries the smallest
        interval that no candidate tag could cover
    """

    default_code = 'depth_exhausted'

    def __init__(self, detail: str, interval: Any, gauge: str, depth: int) -> None:
        super().__init__(detail)
        self.interval: Any = interval
        self.gauge: str = gauge
        self.depth: int = depth


class InvalidGaugeError(PartitionError):
    default_code = 'invalid_gauge'


class UnsupportedInstanceError(GaugeKitError):

    """
        A certificate the construction needs is missing from the catalog
    """

    default_code = 'unsupported'
    exit_code = ExitCode.UNSUPPORTED


class ConfigError(GaugeKitError):
    default_code = 'config'
    exit_code = ExitCode.BAD_CONFIG
