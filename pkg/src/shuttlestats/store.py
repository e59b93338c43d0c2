"""Append-only session store for live-tagged rounds.

Each accepted round is appended as one line of JSON with a timestamp and a
session id.  The store is the service's scratch dataset: it feeds the
running summaries and, once large enough, refits.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from shuttlestats.records import Dataset, RoundRecord


@dataclass(frozen=True)
class StoredRound:
    timestamp: str
    session_id: str
    record: RoundRecord


class SessionStore:
    """Line-delimited JSON log of tagged rounds; appends are serialized."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: RoundRecord, session_id: str = "default") -> StoredRound:
        entry = StoredRound(
            timestamp=datetime.now(timezone.utc).isoformat(),
            session_id=session_id,
            record=record,
        )
        line = json.dumps(
            {"ts": entry.timestamp, "session_id": entry.session_id, "round": record.to_json()},
            sort_keys=True,
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
        return entry

    def entries(self) -> list[StoredRound]:
        if not self.path.exists():
            return []
        out = []
        with self._lock:
            text = self.path.read_text(encoding="utf-8")
        for line in text.splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            out.append(
                StoredRound(
                    timestamp=doc["ts"],
                    session_id=doc["session_id"],
                    record=RoundRecord.from_json(doc["round"]),
                )
            )
        return out

    def rounds(self) -> Dataset:
        return Dataset(tuple(e.record for e in self.entries()), canonicalized=False)

    def __len__(self) -> int:
        return len(self.entries())
