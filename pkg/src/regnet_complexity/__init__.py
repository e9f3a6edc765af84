"""Regulatory network complexity package entry-point exports."""

from typing import TYPE_CHECKING

from .config import RegNetConfig, get_default_config
from .model import NetworkSpec, injectivity_analysis, validate
from .partition import complexity_trace, sequence_trace

if TYPE_CHECKING:  # pragma: no cover - imported for typing only
	from .pipeline import RunConfig as _RunConfig


def run(*args, **kwargs):
	from .pipeline import run as _run

	return _run(*args, **kwargs)


if TYPE_CHECKING:  # pragma: no cover
	RunConfig = _RunConfig
else:
	RunConfig = object  # placeholder for consumers without importing pipeline


__all__ = [
	"RegNetConfig",
	"get_default_config",
	"NetworkSpec",
	"validate",
	"injectivity_analysis",
	"complexity_trace",
	"sequence_trace",
	"run",
	"RunConfig",
]
