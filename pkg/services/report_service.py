"""Report Service - Structured records, tabular rendering and workbook export."""

import json
import logging
import os
from typing import Any, Dict, Iterable, List

import pandas as pd

logger = logging.getLogger(__name__)


def to_json_line(record: Dict[str, Any]) -> str:
    """One compact JSON object; floats use repr so they round-trip exactly."""
    return json.dumps(record, separators=(',', ':'), allow_nan=False)


def _flatten(record: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if key == 'trace':
            continue
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = ", ".join(str(v) for v in value)
        else:
            flat[name] = value
    return flat


def summary_frame(records: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    """One row per record, nested maps spread into dotted columns."""
    return pd.DataFrame([_flatten(record) for record in records])


def trace_frame(records: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    rows = []
    for record in records:
        for point in record.get('trace') or []:
            rows.append({'command': record.get('command'), 'method': record.get('method'),
                         'seed': record.get('seed'), **point})
    return pd.DataFrame(rows)


def render_human(record: Dict[str, Any]) -> str:
    """Field/value table, followed by the trace table when present."""
    flat = _flatten(record)
    table = pd.DataFrame({'field': list(flat.keys()),
                          'value': [("" if v is None else v) for v in flat.values()]})
    text = table.to_string(index=False)
    trace = trace_frame([record])
    if not trace.empty:
        text += "\n\n" + trace.drop(columns=['command', 'method', 'seed']).to_string(index=False)
    return text


def export_workbook(records: List[Dict[str, Any]], output_path: str) -> str:
    """
    Write a Summary sheet (and a Trace sheet when any record has one).

    Uses XlsxWriter formatting; falls back to plain pandas output.
    """
    folder = os.path.dirname(os.path.abspath(output_path))
    os.makedirs(folder, exist_ok=True)
    summary = summary_frame(records)
    trace = trace_frame(records)
    try:
        with pd.ExcelWriter(output_path, engine='xlsxwriter') as writer:
            workbook = writer.book
            header_fmt = workbook.add_format({'bold': True, 'bg_color': '#00A4A6', 'font_color': 'white',
                                              'border': 1, 'align': 'center', 'valign': 'vcenter'})
            for name, frame in (('Summary', summary), ('Trace', trace)):
                if frame.empty and name == 'Trace':
                    continue
                frame.to_excel(writer, sheet_name=name, index=False)
                worksheet = writer.sheets[name]
                for col, header in enumerate(frame.columns):
                    worksheet.write(0, col, header, header_fmt)
                worksheet.set_column(0, max(len(frame.columns) - 1, 0), 18)
    except ImportError:
        logger.info("XlsxWriter unavailable, writing workbook with the default engine")
        with pd.ExcelWriter(output_path) as writer:
            summary.to_excel(writer, sheet_name='Summary', index=False)
            if not trace.empty:
                trace.to_excel(writer, sheet_name='Trace', index=False)
    logger.info("Exported %d records to %s", len(records), output_path)
    return output_path
