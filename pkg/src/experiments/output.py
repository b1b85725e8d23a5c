"""Deterministic CSV output with an audit-trail header comment"""

import csv
import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np

from ..errors import InvariantViolation

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Shortest round-trip text for floats; empty cell for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise InvariantViolation(f"non-finite value {value!r} in output")
        return repr(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    return value


def header_comment(metadata: Dict[str, Any]) -> str:
    return "# " + json.dumps(_jsonable(metadata), sort_keys=True)


def write_csv(
    path: Union[str, Path],
    metadata: Dict[str, Any],
    columns: Sequence[str],
    rows: Iterable[Dict[str, Any]],
) -> Path:
    """Write to a temporary sibling, then rename; a failed run leaves no file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False, newline=""
    )
    count = 0
    try:
        with handle:
            handle.write(header_comment(metadata) + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_value(row.get(column)) for column in columns])
                count += 1
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise
    logger.info("wrote %d rows to %s", count, path)
    return path
