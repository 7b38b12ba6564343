"""
Schema registry for ctxlab file formats.
Holds the JSON schemas every input file and report is validated against.
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

# Base directory for schemas
SCHEMAS_DIR = Path(__file__).parent / "schemas"

SCENARIO = "scenario_v1"
DISTRIBUTION = "distribution_v1"
LABELS = "labels_v1"
REPORT = "report_v1"


def _read_file(path: Path) -> str:
    """Read file content safely."""
    try:
        return path.read_text(encoding='utf-8')
    except FileNotFoundError:
        return ""


@lru_cache(maxsize=None)
def get_schema(name: str) -> Dict[str, Any]:
    text = _read_file(SCHEMAS_DIR / f"{name}.json")
    if not text:
        raise KeyError(f"No schema named {name!r} in {SCHEMAS_DIR}")
    return json.loads(text)
