"""
Stable input digests for reports
"""
import hashlib
import json
from typing import Any


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def get_digest(data: Any, length: int = 16) -> str:
    """sha256 of the canonical JSON form, truncated"""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()[:length]
