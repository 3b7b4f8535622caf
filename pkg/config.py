import configparser
import logging
import math
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from errors import HyperbolicityError, InputError
from models import RunConfig

logger = logging.getLogger(__name__)

STATE_KEYS = ["h", "u", "sxx", "szz"]

# Section -> accepted keys, in canonical output order
SCHEMA: Dict[str, List[str]] = {
    "run": ["mode", "seed"],
    "params": ["g", "G", "zeta", "lambda"],
    "left": STATE_KEYS,
    "right": STATE_KEYS,
    "sampling": ["xi_min", "xi_max", "n_points"],
    "initial": ["kind", "x0", "h0", "amplitude", "width"],
    "grid": ["x_min", "x_max", "n_cells"],
    "time": ["t_end", "cfl", "boundary", "snapshot_times", "splitting"],
    "validate": [
        "n_states",
        "n_riemann",
        "n_weak_form",
        "n_test_functions",
        "n_convexity",
        "convergence_cells",
        "diagnostic_zeta",
    ],
    "output": ["dir"],
}

INT_KEYS = {"seed", "n_points", "n_cells", "n_states", "n_riemann", "n_weak_form", "n_test_functions", "n_convexity"}
TEXT_KEYS = {"mode", "kind", "boundary", "splitting", "dir"}
FLOAT_LIST_KEYS = {"snapshot_times"}
INT_LIST_KEYS = {"convergence_cells"}


class ConfigReader:
    """Reads the sectioned key-value run configuration into plain typed values"""

    def __init__(self, text: str):
        self.parser = configparser.ConfigParser(interpolation=None)
        # keep g and G distinct
        self.parser.optionxform = str  # type: ignore[assignment,method-assign]
        try:
            self.parser.read_string(text)
        except configparser.Error as e:
            raise InputError(f"malformed configuration: {e}")
        self._check_keys()

    def _check_keys(self) -> None:
        if self.parser.defaults():
            raise InputError("keys outside a section are not allowed", {"keys": list(self.parser.defaults())})
        for section in self.parser.sections():
            if section not in SCHEMA:
                raise InputError(f"unknown configuration section [{section}]", {"section": section})
            for key in self.parser.options(section):
                if key not in SCHEMA[section]:
                    raise InputError(f"unknown key '{key}' in section [{section}]", {"section": section, "key": key})

    def _get_text(self, section: str, key: str) -> Optional[str]:
        if not self.parser.has_option(section, key):
            return None
        return self.parser.get(section, key).strip()

    def _get_int(self, section: str, key: str) -> Optional[int]:
        text = self._get_text(section, key)
        if text is None:
            return None
        try:
            return int(text)
        except ValueError:
            raise InputError(f"[{section}] {key} must be an integer, got '{text}'", {"section": section, "key": key})

    def _get_float(self, section: str, key: str) -> Optional[float]:
        text = self._get_text(section, key)
        if text is None:
            return None
        try:
            return float(text)
        except ValueError:
            raise InputError(f"[{section}] {key} must be a number, got '{text}'", {"section": section, "key": key})

    def _get_list(self, section: str, key: str, kind: type) -> Optional[List[Any]]:
        text = self._get_text(section, key)
        if text is None:
            return None
        try:
            return [kind(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise InputError(f"[{section}] {key} must be a comma separated list, got '{text}'")

    def _get_value(self, section: str, key: str) -> Any:
        if key in INT_KEYS:
            return self._get_int(section, key)
        if key in TEXT_KEYS:
            return self._get_text(section, key)
        if key in FLOAT_LIST_KEYS:
            return self._get_list(section, key, float)
        if key in INT_LIST_KEYS:
            return self._get_list(section, key, int)
        return self._get_float(section, key)

    def section(self, name: str) -> Optional[Dict[str, Any]]:
        if not self.parser.has_section(name):
            return None
        values = {key: self._get_value(name, key) for key in self.parser.options(name)}
        return {k: v for k, v in values.items() if v is not None}

    def to_dict(self) -> Dict[str, Any]:
        run = self.section("run") or {}
        output = self.section("output") or {}
        data: Dict[str, Any] = {**run}
        if "dir" in output:
            data["output_dir"] = output["dir"]
        for name in ("params", "left", "right", "sampling", "initial", "grid", "time", "validate"):
            block = self.section(name)
            if block is not None:
                data[name] = block
        return data


def _to_input_error(e: ValidationError) -> InputError:
    problems = []
    for err in e.errors():
        location = ".".join(str(part) for part in err["loc"])
        problems.append(f"{location}: {err['msg']}")
        if "zeta" in err["loc"]:
            return HyperbolicityError(
                f"invalid slip parameter: {err['msg']} (hyperbolicity requires 0 <= zeta <= 1/2)",
                {"location": location},
            )
    return InputError("invalid configuration: " + "; ".join(problems), {"errors": problems})


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration"""
    data = ConfigReader(text).to_dict()
    if "mode" not in data:
        raise InputError("missing required key 'mode' in section [run]")
    if "params" not in data:
        raise InputError("missing required section [params]")
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        error = _to_input_error(e)
        logger.error(f"Configuration rejected: {error}")
        raise error
    logger.debug(f"Parsed configuration for mode '{config.mode.value}'")
    return config


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if math.isinf(value) and value > 0 else format(value, ".17g")
    if isinstance(value, list):
        return ", ".join(_format(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) == c"""
    blocks: Dict[str, Dict[str, Any]] = {
        "run": {"mode": config.mode, "seed": config.seed},
        "params": {"g": config.params.g, "G": config.params.G, "zeta": config.params.zeta,
                   "lambda": config.params.lam},
        "sampling": config.sampling.model_dump(),
        "initial": config.initial.model_dump(),
        "validate": config.validate_block.model_dump(),
        "output": {"dir": config.output_dir},
    }
    if config.left is not None:
        blocks["left"] = config.left.model_dump()
    if config.right is not None:
        blocks["right"] = config.right.model_dump()
    if config.grid is not None:
        blocks["grid"] = config.grid.model_dump()
    if config.time is not None:
        blocks["time"] = config.time.model_dump()

    lines: List[str] = []
    for section, keys in SCHEMA.items():
        if section not in blocks:
            continue
        lines.append(f"[{section}]")
        for key in keys:
            value = blocks[section].get(key)
            if value is not None:
                lines.append(f"{key} = {_format(value)}")
        lines.append("")
    return "\n".join(lines)
