"""
Report serialization and output writing.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np


def format_float(value: float) -> str:
    """Shortest round-trip text of a double."""
    return repr(float(value))


def matrix_to_pairs(A) -> List[List[List[float]]]:
    """Row-major nested list of [re, im] pairs, the JSON layout of a complex matrix."""
    M = np.asarray(A, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def ensure_finite(values: Dict[str, float]) -> None:
    """Raise ValueError when any value is NaN or infinite."""
    for key, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} for {key!r}")


def rows_to_csv(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    """
    Render a numeric table as CSV text.

    UTF-8, comma-separated, header row, LF line endings, shortest round-trip floats.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if not isinstance(v, str) else v for v in row])
    return buffer.getvalue()


def dumps_json(payload: Dict[str, Any]) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(output_path: Union[str, Path], content: str) -> Path:
    """Write a report as UTF-8 with LF line endings, creating parent directories."""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(content)
    return output_path
