"""Append-only point-count cache.

One JSON record per line: {"hash": ..., "n": ..., "count": ...}.  A corrupt
trailing record (interrupted write) is truncated on load.  Single-writer
contract: concurrent invocations must use distinct cache files.
"""

from __future__ import annotations

import json
import os


class CountCache:
    def __init__(self, path):
        self.path = path
        self.records = {}
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        good_bytes = 0
        with open(self.path, "rb") as fh:
            data = fh.read()
        pos = 0
        for line in data.splitlines(keepends=True):
            stripped = line.strip()
            if stripped:
                try:
                    rec = json.loads(stripped)
                    self.records[(rec["hash"], rec["n"])] = rec["count"]
                except (ValueError, KeyError):
                    # corrupt record: truncate the file here and stop
                    with open(self.path, "r+b") as fh:
                        fh.truncate(good_bytes)
                    return
            pos += len(line)
            if line.endswith(b"\n"):
                good_bytes = pos

    def get(self, variety_hash, n):
        return self.records.get((variety_hash, n))

    def put(self, variety_hash, n, count):
        if (variety_hash, n) in self.records:
            return
        self.records[(variety_hash, n)] = count
        os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"hash": variety_hash, "n": n, "count": count}) + "\n")
            fh.flush()


def default_cache():
    """Cache from the PICARDKIT_CACHE environment variable, if set."""
    path = os.environ.get("PICARDKIT_CACHE")
    if not path:
        return None
    if os.path.isdir(path):
        path = os.path.join(path, "counts.ndjson")
    return CountCache(path)
