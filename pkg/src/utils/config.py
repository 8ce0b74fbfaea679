import argparse
import json
import logging
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

logger = logging.getLogger(__name__)

# Keys a JSON config file may override. The seed is deliberately absent:
# seeds come from --seed only.
FILE_KEYS = ("restarts", "tol", "mesh", "output_format")


class RunConfig(BaseModel):
    """
    Effective configuration of one run, echoed into every report.

    Defaults are fixed: restarts=32, seed=0, tol=1e-10, mesh=24, structured output.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: str
    inputs: List[str] = Field(default_factory=list)
    p: Optional[float] = None
    q: Optional[int] = None
    method: Optional[str] = None
    restarts: int = Field(default=32, ge=1)
    seed: int = Field(default=0, ge=0)
    tol: float = Field(default=1e-10, gt=0)
    mesh: int = Field(default=24, ge=2)
    output_format: Literal["structured", "human"] = "structured"


# ------------------------- Configuration Loading ------------------------- #
def _validated_value(key: str, value: Any, config_path: str) -> Optional[Any]:
    """Checks one config-file value against the RunConfig field; None when rejected."""
    try:
        RunConfig.model_validate({"command": "check", key: value})
    except ValidationError as exc:
        reason = exc.errors()[0]["msg"]
        logger.warning(
            "'%s' in '%s' is invalid (%s). Using the default.", key, config_path, reason
        )
        return None
    return value


def load_config_file(config_path: str) -> Dict[str, Any]:
    """
    Reads overrides from a JSON configuration file.

    Malformed files and malformed keys produce warnings and fall back to
    defaults. A ``seed`` key is refused.

    Args:
        config_path: Path to the JSON configuration file.

    Returns:
        The accepted overrides keyed by RunConfig field name.
    """
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config_data = json.load(f)
    except FileNotFoundError:
        logger.warning("Configuration file '%s' not found. Using defaults.", config_path)
        return {}
    except json.JSONDecodeError as exc:
        logger.warning("Configuration file '%s' is not valid JSON (%s). Using defaults.", config_path, exc)
        return {}

    if not isinstance(config_data, dict):
        logger.warning("Configuration file '%s' must hold a JSON object. Using defaults.", config_path)
        return {}

    if "seed" in config_data:
        logger.warning(
            "'seed' in '%s' is ignored: seeds are set with --seed only.", config_path
        )
    for key in sorted(set(config_data) - set(FILE_KEYS) - {"seed"}):
        logger.warning("Unknown key '%s' in '%s' is ignored.", key, config_path)

    overrides: Dict[str, Any] = {}
    for key in FILE_KEYS:
        if key in config_data:
            value = _validated_value(key, config_data[key], config_path)
            if value is not None:
                overrides[key] = value
    logger.debug("Loaded configuration overrides from '%s': %s", config_path, overrides)
    return overrides


def build_run_config(args: argparse.Namespace, inputs: List[str]) -> RunConfig:
    """
    Merges defaults, the optional config file and command-line flags, in
    increasing order of precedence.
    """
    values: Dict[str, Any] = {"command": args.command, "inputs": inputs}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))

    flag_fields = {
        "p": "p",
        "q": "q",
        "method": "method",
        "restarts": "restarts",
        "seed": "seed",
        "tol": "tol",
        "mesh": "mesh",
        "output_format": "format",
    }
    for field_name, attribute in flag_fields.items():
        value = getattr(args, attribute, None)
        if value is not None:
            values[field_name] = value
    return RunConfig(**values)
