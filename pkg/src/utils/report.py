"""
Report rendering.

Structured reports are JSON documents ``{command, config, result}`` with
floats rounded to 9 significant digits and non-finite values written as
null. Human reports are indented ``key: value`` lines with 6 digits.
"""

import dataclasses
import json
import math
from enum import Enum
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel

from .config import RunConfig

STRUCTURED_DIGITS = 9
HUMAN_DIGITS = 6


class Report(BaseModel):
    command: str
    config: Dict[str, Any]
    result: Dict[str, Any]


def _round(value: float, digits: int):
    if not math.isfinite(value):
        return None
    return float(f"{value:.{digits}g}")


def normalise(value: Any, digits: int = STRUCTURED_DIGITS) -> Any:
    """Converts results (dataclasses, named tuples, arrays, enums) into JSON-ready values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value), digits)
    if isinstance(value, np.ndarray):
        return normalise(value.tolist(), digits)
    if isinstance(value, BaseModel):
        return normalise(value.model_dump(), digits)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: normalise(getattr(value, f.name), digits) for f in dataclasses.fields(value)}
    if isinstance(value, tuple) and hasattr(value, "_asdict"):
        return {k: normalise(v, digits) for k, v in value._asdict().items()}
    if isinstance(value, dict) or hasattr(value, "items"):
        return {str(k): normalise(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalise(v, digits) for v in value]
    return value


def build_report(config: RunConfig, result: Dict[str, Any], digits: int = STRUCTURED_DIGITS) -> Report:
    return Report(
        command=config.command,
        config=normalise(config.model_dump(), digits),
        result=normalise(result, digits),
    )


def render_structured(report: Report) -> str:
    return json.dumps(report.model_dump(), indent=2) + "\n"


def _human_lines(value: Any, indent: int):
    pad = "  " * indent
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _is_flat_list(item):
                yield f"{pad}{key}:"
                yield from _human_lines(item, indent + 1)
            else:
                yield f"{pad}{key}: {_human_scalar(item)}"
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat_list(item):
                yield f"{pad}-"
                yield from _human_lines(item, indent + 1)
            else:
                yield f"{pad}- {_human_scalar(item)}"


def _is_flat_list(value: Any) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def _human_scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return ", ".join(_human_scalar(v) for v in value)
    if isinstance(value, dict):
        return "{}"
    return str(value)


def render_human(report: Report) -> str:
    lines = [f"{report.command}"]
    lines.extend(_human_lines({"config": report.config, "result": report.result}, 1))
    return "\n".join(lines) + "\n"


def render(config: RunConfig, result: Dict[str, Any]) -> str:
    if config.output_format == "human":
        return render_human(build_report(config, result, HUMAN_DIGITS))
    return render_structured(build_report(config, result))


def parse_report(text: str) -> Report:
    """Parses a structured report back into the report schema."""
    return Report.model_validate_json(text)
