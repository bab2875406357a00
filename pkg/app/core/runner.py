"""
Executes one CLI invocation: loads the feature plugin, invokes the requested action,
emits the report and maps the outcome to an exit status.

    0  success
    1  a check failed (the failing item is logged and carried in the report)
    2  input error, or a kernel error raised on user input
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import app_constants
from app.core.emitters import FORMATS, emit
from app.core.errors import InputError, TorusInvError
from app.core.feature_manager import FeatureManager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    params: Dict = field(default_factory=dict)
    action: Optional[str] = None
    seed: int = app_constants.DEFAULT_SEED
    tolerance: float = app_constants.DEFAULT_TOLERANCE
    output_path: Optional[str] = None
    fmt: Optional[str] = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError(f"tolerance must be positive, got {self.tolerance}")
        if self.fmt is not None and self.fmt not in FORMATS:
            raise InputError(f"unknown output format {self.fmt!r}")

    @property
    def feature(self) -> str:
        return self.command.replace("-", "_")

    def to_params(self) -> Dict:
        params = dict(self.params)
        params.update(inputs=list(self.inputs), seed=self.seed, tolerance=self.tolerance)
        return params


def _write(text: str, output_path: Optional[str]) -> None:
    if output_path:
        Path(output_path).write_text(text, encoding="utf-8")
        logger.info("report written to %s", output_path)
    else:
        print(text, end="")


def run(config: RunConfig, manager: Optional[FeatureManager] = None) -> int:
    feature = config.feature
    if feature not in app_constants.APP_FEATURES:
        logger.error("unknown command %r", config.command)
        return EXIT_INPUT_ERROR
    owned = manager is None
    try:
        manager = manager or FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES, only=[feature])
        if feature not in manager.features:
            logger.error("feature %s failed to load", feature)
            return EXIT_CHECK_FAILED
        if config.action == "list":
            _write(manager.render_actions(feature), config.output_path)
            return EXIT_OK
        result = manager.invoke_feature(feature, config.action, config.to_params())
        fmt = config.fmt or manager.default_format(feature)
        _write(emit(result, fmt, config.seed), config.output_path)
    except InputError as exc:
        logger.error("input error: %s", exc)
        return EXIT_INPUT_ERROR
    except (TorusInvError, ValueError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT_ERROR
    finally:
        if owned and manager is not None:
            manager.shutdown()

    if not result.ok:
        logger.error("check failed: %s", getattr(result, "errors", None) or feature)
        return EXIT_CHECK_FAILED
    return EXIT_OK
