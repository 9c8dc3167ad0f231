"""
File output for the triple-well toolkit.
JSON documents, CSV tables and plot-data columns.
"""

import csv
import io
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO

from pydantic import BaseModel

from ..models.report_models import SWEEP_COLUMNS, OutputFormat, SweepRow

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    """17 significant digits for floats, empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def flatten(data: Dict[str, Any], prefix: str = "") -> List[tuple]:
    """Nested report -> (dotted key, value) pairs in document order."""
    pairs = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            pairs.extend(flatten(value, f"{name}."))
        elif isinstance(value, list):
            for i, item in enumerate(value):
                pairs.append((f"{name}.{i}", item))
        else:
            pairs.append((name, value))
    return pairs


class OutputService:
    """Writes reports to a path or to stdout."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream if stream is not None else sys.stdout

    @contextmanager
    def _open(self, out: Optional[str]) -> Iterator[TextIO]:
        if out is None:
            yield self.stream
            self.stream.flush()
            return
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f
        logger.info(f"Wrote {path}")

    def render_json(self, model: BaseModel) -> str:
        # json uses the shortest repr that round-trips each double
        return json.dumps(model.model_dump(mode="json"), indent=2, allow_nan=False) + "\n"

    def render_table(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
        return buffer.getvalue()

    def write_document(self, model: BaseModel, fmt: OutputFormat, out: Optional[str] = None):
        """One report; CSV flattens it to key,value rows."""
        if fmt is OutputFormat.JSON:
            text = self.render_json(model)
        else:
            text = self.render_table(("key", "value"), flatten(model.model_dump(mode="json")))
        with self._open(out) as f:
            f.write(text)

    def write_sweep(self, rows: Iterable[SweepRow], fmt: OutputFormat, out: Optional[str] = None) -> int:
        """Stream sweep rows, flushing each one; returns the number written.

        If ``rows`` raises, everything before the failing point is already on disk.
        """
        written = 0
        with self._open(out) as f:
            if fmt is OutputFormat.CSV:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(SWEEP_COLUMNS)
                f.flush()
                for row in rows:
                    data = row.model_dump()
                    writer.writerow([format_cell(data[c]) for c in SWEEP_COLUMNS])
                    f.flush()
                    written += 1
            else:
                # JSON Lines, one object per point
                for row in rows:
                    f.write(json.dumps(row.model_dump(mode="json"), allow_nan=False) + "\n")
                    f.flush()
                    written += 1
        return written

    def write_plot_data(self, tables: Dict[str, tuple], out_dir: str, fmt: OutputFormat) -> List[Path]:
        """One file per table under ``out_dir``."""
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, (header, rows) in tables.items():
            if fmt is OutputFormat.CSV:
                path = directory / f"{name}.csv"
                text = self.render_table(header, rows)
            else:
                path = directory / f"{name}.json"
                columns = {column: [row[i] for row in rows] for i, column in enumerate(header)}
                text = json.dumps(columns, allow_nan=False) + "\n"
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            logger.info(f"Wrote {len(rows)} rows to {path}")
            paths.append(path)
        return paths
