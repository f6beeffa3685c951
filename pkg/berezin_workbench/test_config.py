#!/usr/bin/env python3
"""
Tests for run configuration parsing and validation
"""
import logging
import os
import sys

import pytest

logging.basicConfig(level=logging.DEBUG, format='%(levelname)s - %(name)s - %(message)s')

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from berezin_workbench.config import (
    build_config,
    load_config,
    parse_bool,
    parse_config_text,
    parse_float_list,
    parse_range,
)
from berezin_workbench.errors import ConfigError


def test_parse_range_forms():
    assert parse_range("2..10:2") == [2, 4, 6, 8, 10]
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("1, 3,5") == [1, 3, 5]
    assert parse_range("7") == [7]
    with pytest.raises(ConfigError, match="empty"):
        parse_range("5..1")
    with pytest.raises(ConfigError):
        parse_range("1..x")


def test_scalar_parsers():
    assert parse_float_list("0, 0.5,1e-1") == [0.0, 0.5, 0.1]
    assert parse_bool("Yes") is True
    assert parse_bool("off") is False
    with pytest.raises(ConfigError):
        parse_bool("maybe")


def test_parse_config_text():
    text = """
    # quantize one polynomial
    poly = x1*y2 - 0.5*z1   # trailing comment
    sites = 2

    two_j = 4
    """
    assert parse_config_text(text) == {"poly": "x1*y2 - 0.5*z1", "sites": "2", "two_j": "4"}
    with pytest.raises(ConfigError, match="duplicate key"):
        parse_config_text("a = 1\na = 2")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("no equals sign")


def test_defaults_and_conversion():
    config = build_config("kms", {"mode": "gibbs", "dims": "4"})
    assert config["dims"] == [4]
    assert config["beta"] == 1.0
    assert config["times"] == [0.0, 0.5, 1.0]
    assert config["tolerance"] == 1e-9
    assert config.get("out") is None
    assert config.get("out", "fallback") == "fallback"


def test_model_dump_leaves_out_output_settings():
    config = build_config("quantize", {"poly": "z1", "two_j": "2", "out": "q.json", "format": "json"})
    assert config.model_dump() == {"poly": "z1", "sites": 1, "two_j": 2}


@pytest.mark.parametrize("command, raw, message", [
    ("quantize", {"poly": "z1"}, "missing required key 'two_j'"),
    ("quantize", {"poly": "z1", "two_j": "two"}, "invalid value for 'two_j'"),
    ("quantize", {"poly": "z1", "two_j": "2", "colour": "red"}, "unknown key"),
    ("quantize", {"poly": "z1", "two_j": "0"}, "two_j must be >= 1"),
    ("quantize", {"poly": "z1", "two_j": "2", "format": "xml"}, "format must be one of"),
    ("sweep", {"observable": "dgr", "range": "2..8", "f": "x1"}, "needs keys f and g"),
    ("sweep", {"observable": "entropy", "range": "2..8"}, "observable must be one of"),
    ("sweep", {"observable": "norm_gap", "range": "4,2", "f": "x1"}, "strictly ascending"),
    ("sweep", {"observable": "cw_defect", "range": "1..4"}, "d >= 2"),
    ("sweep", {"observable": "norm_limit", "range": "1..4"}, "needs key model"),
    ("sweep", {"observable": "classical_limit", "range": "1..4", "f": "z1", "family": "gibbs"}, "needs key symbol"),
    ("kms", {"beta": "0"}, "beta must be positive"),
    ("kms", {"mode": "product", "dims": "2"}, "needs 2 dimension"),
    ("kms", {"mode": "thermal"}, "mode must be one of"),
    ("resolvent", {"lambda": "0", "h1": "0,1", "h2": "0,2"}, "lambda must be nonzero"),
    ("resolvent", {"lambda": "1"}, "either h1 and h2"),
    ("resolvent", {"lambda": "1", "h1": "0,1", "h2": "0,2", "dims": "2,3"}, "either h1 and h2"),
    ("resolvent", {"lambda": "1", "h1": "0,1"}, "both h1 and h2"),
    ("simulate", {}, "unknown command"),
])
def test_validation_errors(command, raw, message):
    with pytest.raises(ConfigError, match=message):
        build_config(command, raw)


def test_load_config(tmp_path):
    path = tmp_path / "res.cfg"
    path.write_text("h1 = 0, 1\nh2 = 0, 2\nlambda = 1\nnodes = 16,32\n", encoding="utf-8")
    config = load_config("resolvent", path)
    assert config["h1"] == [0.0, 1.0]
    assert config["nodes"] == [16, 32]
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("resolvent", tmp_path / "missing.cfg")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
