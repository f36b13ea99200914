"""Utility functions for curvelab.

This module provides logging setup, JSON conversion of results and
report persistence helpers.
"""

import dataclasses
import json
import logging
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from .field import FieldElement, FieldSpec
from .poly import MultiPoly

SCHEMA_VERSION = 1


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Setup logging configuration for curvelab.

    Args:
        level: Logging level name
        log_file: Optional file receiving a copy of the log
    """
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def format_rational(value: Any) -> str:
    """'p/q' for a Fraction, 'p' when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_jsonable(obj: Any) -> Any:
    """Convert results into JSON-ready data.

    Fractions become {"num", "den"}; objects with ``to_dict`` use it;
    dataclasses, tuples and sets are expanded recursively.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return {'num': obj.numerator, 'den': obj.denominator}
    if isinstance(obj, FieldSpec):
        return obj.to_json()
    if isinstance(obj, (FieldElement, MultiPoly)):
        return str(obj)
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.compare}
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    return str(obj)


def dump_json(payload: Any, indent: int = 2, sort_keys: bool = True) -> str:
    return json.dumps(to_jsonable(payload), indent=indent, sort_keys=sort_keys, ensure_ascii=False)


def save_json_report(payload: Dict[str, Any], filepath: Path, indent: int = 2, sort_keys: bool = True):
    """Save a report with its schema version; no timestamps go into the payload."""
    data = dict(payload)
    data.setdefault('schema_version', SCHEMA_VERSION)
    try:
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(dump_json(data, indent, sort_keys))
            f.write('\n')
    except Exception as e:
        logging.getLogger(__name__).error(f"Error saving report: {e}")
        raise


def timings_path(filepath: Path) -> Path:
    """Sibling '<stem>.timings.json' of a report path."""
    filepath = Path(filepath)
    return filepath.with_name(f"{filepath.stem}.timings.json")


def load_json_report(filepath: Path) -> Dict[str, Any]:
    """Load a JSON report; {} when it cannot be read."""
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            return json.load(f)
    except Exception as e:
        logging.getLogger(__name__).error(f"Error loading report: {e}")
        return {}
