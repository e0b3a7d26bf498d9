"""JSON/CSV serialization of the analysis documents.

JSON numbers are rounded to 6 significant digits for reading; CSV keeps
full ``repr`` precision for plotting.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

from .budget import AuditReport, BlockBound, ComplexityEstimate, DigitPlan
from .channel import ChannelPoint, InfoBudget
from .montecarlo import MonteCarloReport

JSON_SIG_DIGITS = 6
# loose enough to absorb the 6-significant-digit rounding of every field
JSON_TOL = 1e-4

DOCUMENT_TYPES = {
    "channel": ChannelPoint,
    "info": InfoBudget,
    "plan": DigitPlan,
    "bound": BlockBound,
    "complexity": ComplexityEstimate,
    "montecarlo": MonteCarloReport,
    "audit": AuditReport,
}


def round_sig(x: float, digits: int = JSON_SIG_DIGITS) -> float:
    if x == 0.0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def _rounded(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round_sig(obj) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _rounded(obj.to_dict())
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(document: dict[str, Any]) -> str:
    return json.dumps(_rounded(document), indent=2)


def load_document(text: str) -> dict[str, Any]:
    """Parse a JSON document and rebuild every typed section.

    Rebuilding re-runs each type's invariant checks, so a document that
    parses here is internally consistent.
    """
    raw = json.loads(text)
    out: dict[str, Any] = {}
    for key, value in raw.items():
        cls = DOCUMENT_TYPES.get(key)
        if cls is not None and value is not None:
            out[key] = cls.from_dict(value, JSON_TOL)
        else:
            out[key] = value
    return out


def _csv_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_value(v) for v in row])
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def flatten(document: dict[str, Any]) -> dict[str, Any]:
    """``{"a": {"x": 1}}`` -> ``{"a.x": 1}`` for one-row CSV output."""
    flat: dict[str, Any] = {}
    for section, value in document.items():
        if hasattr(value, "to_dict"):
            value = value.to_dict()
        if isinstance(value, dict):
            for k, v in value.items():
                flat[f"{section}.{k}"] = v
        else:
            flat[section] = value
    return flat
