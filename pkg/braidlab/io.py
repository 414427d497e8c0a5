"""
Report writers
"""
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional

import fsspec
import numpy as np
import pandas as pd

from ._version import __version__

_log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
STDOUT = "-"


@dataclass
class Report:
    """Tabular part goes to CSV, the whole document to JSON."""

    doc: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None
    ok: bool = True


def _round(x: float) -> float:
    return float(FLOAT_FORMAT % x)


def jsonable(obj: Any) -> Any:
    """Plain JSON types, floats at 12 significant digits, complex arrays as real/imag pairs."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, pd.DataFrame):
        return jsonable(obj.to_dict(orient="records"))
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"real": jsonable(obj.real.tolist()), "imag": jsonable(obj.imag.tolist())}
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": _round(obj.real), "imag": _round(obj.imag)}
    return obj


def header_meta() -> Dict[str, str]:
    return {"generated_at": datetime.utcnow().isoformat(timespec="seconds") + "Z", "braidlab": __version__}


def render_csv(table: pd.DataFrame, header_timestamp: bool = True) -> str:
    body = table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if not header_timestamp:
        return body
    meta = header_meta()
    return f"# generated_at={meta['generated_at']} braidlab={meta['braidlab']}\n" + body


def render_json(report: Report, header_timestamp: bool = True) -> str:
    doc = dict(report.doc)
    if report.table is not None and "rows" not in doc:
        doc["rows"] = report.table
    if header_timestamp:
        doc = {"meta": header_meta(), **doc}
    return json.dumps(jsonable(doc), indent=2) + "\n"


def render(report: Report, fmt: str, header_timestamp: bool = True) -> str:
    if fmt == "csv":
        if report.table is None:
            raise ValueError("This report has no tabular form, use --format json")
        return render_csv(report.table, header_timestamp)
    if fmt == "json":
        return render_json(report, header_timestamp)
    raise ValueError(f"Unknown output format: '{fmt}'")


def write_text(text: str, out: str = STDOUT):
    if out in ("", STDOUT):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    _log.info(f"Writing {out}")
    with fsspec.open(out, "wt") as f:
        f.write(text)


def write_report(report: Report, out: str, fmt: str, header_timestamp: bool = True):
    write_text(render(report, fmt, header_timestamp), out)
