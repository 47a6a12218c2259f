"""VerificationReport: fitted constants and pass/fail, serialised to JSON/CSV."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def _plain(obj):
    """numpy scalars/arrays and tuples -> JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for columns {self.columns}")
        self.rows.append(_plain(list(values)))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]


@dataclass
class VerificationReport:
    experiment: str
    config: dict = field(default_factory=dict)
    tables: dict[str, Table] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    passed: bool = True
    seed: int | None = None
    timestamp: str | None = None
    notes: list[str] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def table(self, name: str, columns: list[str]) -> Table:
        t = Table(list(columns))
        self.tables[name] = t
        return t

    def check(self, name: str, ok: bool, value=None, limit=None) -> bool:
        """Record a named pass/fail criterion; the report passes iff all do."""
        ok = bool(ok)
        self.summary.setdefault("checks", {})[name] = _plain({"passed": ok, "value": value, "limit": limit})
        self.passed = self.passed and ok
        return ok

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "experiment": self.experiment,
            "config": _plain(self.config),
            "seed": self.seed,
            "timestamp": self.timestamp,
            "passed": bool(self.passed),
            "summary": _plain(self.summary),
            "notes": list(self.notes),
            "tables": {k: {"columns": t.columns, "rows": _plain(t.rows)} for k, t in self.tables.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            experiment=d["experiment"],
            config=d.get("config", {}),
            tables={k: Table(list(v["columns"]), [list(r) for r in v["rows"]]) for k, v in d.get("tables", {}).items()},
            summary=d.get("summary", {}),
            passed=bool(d.get("passed", True)),
            seed=d.get("seed"),
            timestamp=d.get("timestamp"),
            notes=list(d.get("notes", [])),
            schema_version=int(d.get("schema_version", SCHEMA_VERSION)),
        )

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))


def config_hash(config: dict) -> str:
    canon = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def write_table_csv(table: Table, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def emit_report(report: VerificationReport, fmt: str, out_dir: str | Path) -> list[Path]:
    """Write ``<experiment>_<hash>.json`` and/or CSVs into ``out_dir``.

    The first table goes to ``<experiment>_<hash>.csv``; further tables to
    ``<experiment>_<hash>_<table>.csv``. A report without tables still yields
    a header-only CSV.
    """
    if fmt not in ("json", "csv", "both"):
        raise ValueError(f"format must be json, csv or both, got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{report.experiment}_{config_hash(report.config)}"
    paths = []
    if fmt in ("json", "both"):
        p = out / f"{stem}.json"
        p.write_text(report.to_json())
        paths.append(p)
    if fmt in ("csv", "both"):
        tables = list(report.tables.items()) or [("main", Table([]))]
        for i, (name, table) in enumerate(tables):
            p = out / (f"{stem}.csv" if i == 0 else f"{stem}_{name}.csv")
            paths.append(write_table_csv(table, p))
    return paths
