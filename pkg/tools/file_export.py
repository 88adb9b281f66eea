"""
MUBTRIO File Export Tools - write reports and tables to disk
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd
from pydantic import BaseModel

from tools.matrix_io import file_digest

logger = logging.getLogger(__name__)


class FileExporter:
    """
    Export reports (pydantic models or dicts) and tables to files.

    Supports: JSON, CSV
    Every export returns {"status", "format", "path", "sha256"} so the
    caller can record the digest in the run log.
    """

    def export(self, payload: Union[BaseModel, Dict[str, Any], pd.DataFrame],
               path: Union[str, Path], format: str = None) -> Dict[str, Any]:
        """Export to the format named, or inferred from the file suffix."""
        path = Path(path)
        format = (format or path.suffix.lstrip(".") or "json").lower()

        exporters = {
            "json": self._export_json,
            "csv": self._export_csv,
        }

        exporter = exporters.get(format)
        if not exporter:
            raise ValueError(f"Unsupported format: {format}")

        path.parent.mkdir(parents=True, exist_ok=True)
        exporter(payload, path)
        logger.debug("exported %s to %s", format, path)
        return {
            "status": "completed",
            "format": format,
            "path": str(path),
            "sha256": file_digest(path),
        }

    def _export_json(self, payload, path: Path) -> None:
        if isinstance(payload, BaseModel):
            data = payload.model_dump(mode="json")
        elif isinstance(payload, pd.DataFrame):
            data = payload.to_dict(orient="records")
        else:
            data = payload
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")

    def _export_csv(self, payload, path: Path) -> None:
        if not isinstance(payload, pd.DataFrame):
            raise ValueError("CSV export needs a table")
        payload.to_csv(path, index=False, float_format="%.17g")
