"""Per-step diagnostics and their serialization.

CSV uses the fixed header below with floats printed as shortest round-trip
decimals, so parse -> re-emit is byte identical.  JSONL carries one object
per record with the same keys.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

__all__ = ["TraceRecord", "TRACE_FIELDS", "write_csv", "read_csv", "write_jsonl", "read_jsonl"]

TRACE_FIELDS = (
    "step",
    "t",
    "objective",
    "energy",
    "group_drift",
    "skew_drift",
    "eig_err",
    "subspace_err",
    "elapsed_ns",
)


@dataclass(frozen=True)
class TraceRecord:
    step: int
    t: float
    objective: float
    energy: float
    group_drift: float
    skew_drift: float
    eig_err: float
    subspace_err: float
    elapsed_ns: int

    def as_dict(self) -> dict:
        return asdict(self)


def _format(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as stream:
        stream.write(",".join(TRACE_FIELDS) + "\n")
        for record in records:
            row = record.as_dict()
            stream.write(",".join(_format(row[name]) for name in TRACE_FIELDS) + "\n")


def read_csv(path) -> list[TraceRecord]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != ",".join(TRACE_FIELDS):
        raise ValueError(f"{path}: missing or wrong trace header")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(
            TraceRecord(
                step=int(parts[0]),
                t=float(parts[1]),
                objective=float(parts[2]),
                energy=float(parts[3]),
                group_drift=float(parts[4]),
                skew_drift=float(parts[5]),
                eig_err=float(parts[6]),
                subspace_err=float(parts[7]),
                elapsed_ns=int(parts[8]),
            )
        )
    return records


def write_jsonl(records, path) -> None:
    with open(path, "w") as stream:
        for record in records:
            stream.write(json.dumps(record.as_dict()) + "\n")


def read_jsonl(path) -> list[TraceRecord]:
    records = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            records.append(TraceRecord(**json.loads(line)))
    return records
