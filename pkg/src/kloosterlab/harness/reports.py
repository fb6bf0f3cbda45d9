"""Sweep records and diff-stable report emission (CSV + JSON mirror)."""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

SCHEMA_VERSION = 1

FIELDS = ("target", "q", "M", "N", "K", "r", "c", "a", "variant", "sample",
          "lhs", "rhs", "ratio", "status", "reason")


@dataclass(frozen=True)
class RatioRecord:
    """One sweep point: parameters, exact magnitude, bound value, ratio."""

    target: str
    q: int
    M: int | None = None
    N: int | None = None
    K: int | None = None
    r: int | None = None
    c: int | None = None
    a: int | None = None
    variant: str | None = None
    sample: int | None = None
    lhs: float | None = None
    rhs: float | None = None
    ratio: float | None = None
    status: str = "ok"
    reason: str | None = None

    def sort_key(self):
        return (self.target, self.q,
                *(-1 if v is None else v
                  for v in (self.M, self.N, self.K, self.r, self.c, self.a)),
                self.variant or "", -1 if self.sample is None else self.sample)


def make_record(target: str, *, lhs: float, rhs: float, **params) -> RatioRecord:
    ratio = lhs / rhs if rhs > 0 else float("inf")
    status = "ok" if ratio <= 1.0 else "violated"
    return RatioRecord(target=target, lhs=lhs, rhs=rhs, ratio=ratio,
                       status=status, **params)


def skipped_record(target: str, reason: str, **params) -> RatioRecord:
    return RatioRecord(target=target, status="skipped", reason=reason, **params)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_reports(records: list[RatioRecord], outdir: "str | Path",
                  name: str, meta: dict) -> tuple[Path, Path]:
    """CSV with the fixed header plus a JSON mirror; byte-stable for a
    fixed (records, meta)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{name}.csv"
    json_path = outdir / f"{name}.json"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FIELDS)
        for rec in records:
            writer.writerow([_cell(getattr(rec, f)) for f in FIELDS])
    payload = {
        "schema_version": SCHEMA_VERSION,
        "meta": meta,
        "records": [dataclasses.asdict(rec) for rec in records],
    }
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def summarize(records: list[RatioRecord]) -> dict:
    """Per-target maxima and status counts."""
    out: dict[str, dict] = {}
    for rec in records:
        entry = out.setdefault(rec.target, {"max_ratio": 0.0, "ok": 0,
                                            "violated": 0, "skipped": 0})
        entry[rec.status] += 1
        if rec.ratio is not None and rec.ratio > entry["max_ratio"]:
            entry["max_ratio"] = rec.ratio
    return out
