"""
Run configuration files for the command-line harness.

A config file is flat ``key = value`` text; ``#`` starts a comment and blank
lines are ignored. Each subcommand has its own schema mapping keys to a
converter and a default (REQUIRED marks keys without one). Ranges are written
``start..stop`` or ``start..stop:step`` (inclusive) or as comma-separated lists.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple, Union

from .errors import ConfigError

logger = logging.getLogger(__name__)

REQUIRED = object()

RANGE_RE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*(?::\s*(\d+)\s*)?$")


def parse_range(text: str) -> List[int]:
    """
    Integer range or list.

    "2..10:2" gives [2, 4, 6, 8, 10]; "1,3,5" gives [1, 3, 5]; "7" gives [7].

    Raises:
        ConfigError: on malformed text or an empty result
    """
    match = RANGE_RE.match(text)
    if match:
        start, stop = int(match.group(1)), int(match.group(2))
        step = int(match.group(3) or 1)
        if step < 1:
            raise ConfigError(f"range step must be positive in {text!r}")
        values = list(range(start, stop + 1, step))
    else:
        values = parse_int_list(text)
    if not values:
        raise ConfigError(f"range {text!r} is empty")
    return values


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from e


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from e


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


Converter = Callable[[str], Any]
Schema = Dict[str, Tuple[Converter, Any]]

COMMON_SCHEMA: Schema = {
    "out": (str, None),
    "format": (str, None),
}

QUANTIZE_SCHEMA: Schema = {
    "poly": (str, REQUIRED),
    "sites": (int, 1),
    "two_j": (int, REQUIRED),
}

SWEEP_SCHEMA: Schema = {
    "observable": (str, REQUIRED),
    "range": (parse_range, REQUIRED),
    "f": (str, None),
    "g": (str, None),
    "sites": (int, 1),
    "model": (str, None),
    "d": (int, 2),
    "B": (float, 0.0),
    "scaling": (str, "per_site"),
    "family": (str, "coherent"),
    "theta": (parse_float_list, None),
    "phi": (parse_float_list, None),
    "symbol": (str, None),
    "beta": (float, 1.0),
    "fit": (parse_bool, True),
}

KMS_SCHEMA: Schema = {
    "mode": (str, "product"),
    "dims": (parse_int_list, [2, 3]),
    "beta": (float, 1.0),
    "times": (parse_float_list, [0.0, 0.5, 1.0]),
    "samples": (int, 20),
    "seed": (int, 42),
    "norm": (float, 1.0),
    "tolerance": (float, 1e-9),
}

RESOLVENT_SCHEMA: Schema = {
    "h1": (parse_float_list, None),
    "h2": (parse_float_list, None),
    "dims": (parse_int_list, None),
    "seed": (int, 42),
    "lambda": (float, REQUIRED),
    "nodes": (parse_range, [16, 32, 64, 128, 256]),
    "tolerance": (float, 1e-8),
}

SCHEMAS: Dict[str, Schema] = {
    "quantize": QUANTIZE_SCHEMA,
    "sweep": SWEEP_SCHEMA,
    "kms": KMS_SCHEMA,
    "resolvent": RESOLVENT_SCHEMA,
}

SWEEP_OBSERVABLES = ("dgr", "product", "norm_gap", "cw_defect", "norm_limit", "classical_limit")
KMS_MODES = ("gibbs", "product", "mixed")
OUTPUT_FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """Schema-validated settings of one subcommand run."""

    command: str
    values: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def get(self, key: str, default: Any = None) -> Any:
        value = self.values.get(key)
        return default if value is None else value

    def model_dump(self) -> Dict[str, Any]:
        """Config echo for JSON reports (output settings left out)."""
        return {k: v for k, v in sorted(self.values.items()) if k not in COMMON_SCHEMA and v is not None}


def parse_config_text(text: str) -> Dict[str, str]:
    """
    Split config text into raw key/value strings.

    Raises:
        ConfigError: on a line without '=' or a repeated key
    """
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def build_config(command: str, raw: Dict[str, str]) -> RunConfig:
    """
    Validate raw values against the command's schema.

    Raises:
        ConfigError: on an unknown command or key, a missing required key,
            an unconvertible value or a value out of range
    """
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}; expected one of {sorted(SCHEMAS)}")
    schema = {**SCHEMAS[command], **COMMON_SCHEMA}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown key(s) for {command}: {', '.join(unknown)}")

    values: Dict[str, Any] = {}
    for key, (convert, default) in schema.items():
        if key in raw:
            try:
                values[key] = convert(raw[key])
            except ConfigError:
                raise
            except ValueError as e:
                raise ConfigError(f"invalid value for {key!r}: {raw[key]!r}") from e
        elif default is REQUIRED:
            raise ConfigError(f"missing required key {key!r} for {command}")
        else:
            values[key] = default

    config = RunConfig(command=command, values=values)
    _validate(config)
    logger.debug(f"Loaded {command} config: {config.model_dump()}")
    return config


def load_config(command: str, path: Union[str, Path]) -> RunConfig:
    """Read and validate a config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return build_config(command, parse_config_text(text))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _validate(config: RunConfig) -> None:
    v = config.values
    if v.get("format") is not None:
        _require(v["format"] in OUTPUT_FORMATS, f"format must be one of {OUTPUT_FORMATS}, got {v['format']!r}")
    if "sites" in v:
        _require(v["sites"] >= 1, f"sites must be >= 1, got {v['sites']}")

    if config.command == "quantize":
        _require(v["two_j"] >= 1, f"two_j must be >= 1, got {v['two_j']}")

    elif config.command == "sweep":
        observable = v["observable"]
        _require(observable in SWEEP_OBSERVABLES, f"observable must be one of {SWEEP_OBSERVABLES}, got {observable!r}")
        _require(all(b > a for a, b in zip(v["range"], v["range"][1:])), "range must be strictly ascending")
        _require(v["range"][0] >= 1, f"range values must be >= 1, got {v['range'][0]}")
        if observable in ("dgr", "product"):
            _require(v["f"] is not None and v["g"] is not None, f"observable {observable!r} needs keys f and g")
        if observable in ("norm_gap", "classical_limit"):
            _require(v["f"] is not None, f"observable {observable!r} needs key f")
        if observable == "norm_limit":
            _require(v["model"] is not None, "observable 'norm_limit' needs key model")
        if observable == "cw_defect":
            _require(v["range"][0] >= 2, "cw_defect needs d >= 2")
            _require(v["scaling"] in ("per_site", "rescaled"), f"unknown scaling {v['scaling']!r}")
        if observable == "classical_limit":
            _require(v["family"] in ("coherent", "gibbs"), f"family must be coherent or gibbs, got {v['family']!r}")
            if v["family"] == "gibbs":
                _require(v["symbol"] is not None, "the gibbs family needs key symbol")
                _require(v["beta"] > 0, f"beta must be positive, got {v['beta']}")

    elif config.command == "kms":
        _require(v["mode"] in KMS_MODES, f"mode must be one of {KMS_MODES}, got {v['mode']!r}")
        _require(v["beta"] > 0, f"beta must be positive, got {v['beta']}")
        expected = 2 if v["mode"] == "product" else 1
        _require(len(v["dims"]) == expected, f"mode {v['mode']!r} needs {expected} dimension(s), got {v['dims']}")
        _require(all(n >= 1 for n in v["dims"]), f"dimensions must be positive, got {v['dims']}")
        _require(v["samples"] >= 1, f"samples must be >= 1, got {v['samples']}")
        _require(len(v["times"]) >= 1, "times must not be empty")

    elif config.command == "resolvent":
        _require(v["lambda"] != 0.0, "lambda must be nonzero: iλ would lie on the real spectrum line")
        explicit = v["h1"] is not None or v["h2"] is not None
        _require(explicit != (v["dims"] is not None), "give either h1 and h2 (diagonals) or dims, not both")
        if explicit:
            _require(bool(v["h1"]) and bool(v["h2"]), "both h1 and h2 are needed")
        else:
            _require(len(v["dims"]) == 2, f"dims must name two dimensions, got {v['dims']}")
        _require(all(m >= 1 for m in v["nodes"]), "node counts must be positive")
