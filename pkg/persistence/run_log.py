"""
MUBTRIO Run Log - append-only JSON Lines record of every CLI run
"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Union

from config import settings
from models.responses import RunRecord

logger = logging.getLogger(__name__)


class RunLog:
    """One RunRecord per line; records are only ever appended."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else settings.run_log

    def append(self, record: RunRecord) -> None:
        """Write the record as a single line in one write call."""
        line = json.dumps(record.model_dump(mode="json"), sort_keys=True) + "\n"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(line)

    def read_all(self) -> List[RunRecord]:
        """All records, oldest first; unparseable lines are skipped with a warning."""
        if not self.path.exists():
            return []
        records = []
        for n, line in enumerate(self.path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(RunRecord.model_validate_json(line))
            except ValueError as e:
                logger.warning("skipping run log line %d: %s", n, e)
        return records

    def last(self) -> Optional[RunRecord]:
        records = self.read_all()
        return records[-1] if records else None
