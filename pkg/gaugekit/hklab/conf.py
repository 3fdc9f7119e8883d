from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Iterator

from django.conf import settings

DEFAULTS: Dict[str, Any] = {
    'DEPTH_CAP': 64,
    'DISTANCE_DEPTH_CAP': 200,
    'PRECISION_BITS': 96,
    'RANDOM_SPLIT_DEPTH': 3,
    'REPORT_DIR': 'reports',
    'SCHEMA': 'gaugekit/1',
}

#Per-run values set by command-line flags
_overrides: ContextVar[Dict[str, Any]] = ContextVar('gaugekit_overrides', default={})


def lab_setting(name: str) -> Any:

    """
        Return a laboratory tunable: a per-run override, then
        settings.GAUGEKIT, then the built-in default

        :param name: Key of the tunable, e.g. DEPTH_CAP
        :type name: str

        :return: The configured value
        :rtype: Any
    """

    overrides: Dict[str, Any] = _overrides.get()
    if name in overrides:
        return overrides[name]
    configured: Dict[str, Any] = getattr(settings, 'GAUGEKIT', {}) if settings.configured else {}
    if name in configured:
        return configured[name]
    return DEFAULTS[name]


@contextmanager
def lab_overrides(**values: Any) -> Iterator[None]:

    """
        Override tunables for the duration of a block; None values are ignored
    """

    token = _overrides.set({**_overrides.get(), **{k: v for k, v in values.items() if v is not None}})
    try:
        yield
    finally:
        _overrides.reset(token)
