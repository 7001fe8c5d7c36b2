"""
Report writers: a flat ``key = value`` text report for people and a JSON
document with the model's field names for tooling.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Sequence

from pydantic import BaseModel, TypeAdapter

from ..models.reports import ScfIteration

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "{:.10f}"
EV_SUFFIX = "_ev"
TRACE_ADAPTER = TypeAdapter(List[ScfIteration])


class UnitPreference(str, Enum):
    HARTREE = "hartree"
    EV = "eV"
    BOTH = "both"


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return FLOAT_FORMAT.format(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_format(v) for v in value)
    return str(value)


def _flatten(data: Dict[str, Any], prefix: str = "") -> List[tuple]:
    items = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(_flatten(value, f"{name}."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for index, entry in enumerate(value):
                items.extend(_flatten(entry, f"{name}.{index}."))
        else:
            items.append((name, value))
    return items


def to_key_value(report: BaseModel, units: UnitPreference = UnitPreference.BOTH) -> str:
    """Render a report as ``key = value`` lines.

    Energy fields have an ``_ev`` mirror; ``units`` selects which of the pair
    appear. Other fields are always written.
    """
    data = report.model_dump(mode="json")
    lines = []
    for key, value in _flatten(data):
        is_ev = key.endswith(EV_SUFFIX) and key[: -len(EV_SUFFIX)] in data
        has_ev = f"{key}{EV_SUFFIX}" in data
        if is_ev and units == UnitPreference.HARTREE:
            continue
        if has_ev and units == UnitPreference.EV:
            continue
        lines.append(f"{key} = {_format(value)}")
    return "\n".join(lines) + "\n"


def to_document(report: BaseModel) -> str:
    return report.model_dump_json(indent=2) + "\n"


def write_report(
    report: BaseModel, directory: Path, stem: str, units: UnitPreference = UnitPreference.BOTH
) -> Sequence[Path]:
    """Write ``<stem>.txt`` and ``<stem>.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    text_path = directory / f"{stem}.txt"
    json_path = directory / f"{stem}.json"
    text_path.write_text(to_key_value(report, units))
    json_path.write_text(to_document(report))
    logger.info(f"Wrote {text_path} and {json_path}")
    return text_path, json_path


def write_trace(trace: Sequence[ScfIteration], directory: Path, stem: str = "trace") -> Path:
    """Write the SCF convergence trace as a JSON list."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{stem}.json"
    path.write_bytes(TRACE_ADAPTER.dump_json(list(trace), indent=2) + b"\n")
    logger.info(f"Wrote convergence trace with {len(trace)} entries to {path}")
    return path


def read_key_value(text: str) -> Dict[str, str]:
    """Parse a flat report back into a dict of raw strings."""
    values = {}
    for line in text.splitlines():
        if " = " in line:
            key, value = line.split(" = ", 1)
            values[key.strip()] = value.strip()
    return values
