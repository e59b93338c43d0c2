"""Round records: data model, CSV ingestion, validation, canonicalization.

A round record captures the first three shots of one rally: who served and
from where, where the service landed, how the receiver moved and gripped,
where the return landed, and whether the server intercepted the return.
Rounds where the server's partner was better placed for the third shot
carry ``InterceptOutcome.NOT_APPLICABLE`` instead of being dropped, so the
return-landing analyses can still use them.

The interchange format is UTF-8 CSV with header
``Server,ServiceFrom,SLA,Receiver,RDH,Foot,Grip,RLA,Intercept``
(one row per round, zones as integers 1-9, enums as their display strings,
intercept as ``Yes``/``No``/``NA``).  An optional trailing ``ServiceType``
column may mark rows as ``Long``; those rows are only accepted when the
caller asks for them to be dropped, since the schema models short services
only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import IO, Callable, Iterable, Iterator, NamedTuple, Union

from shuttlestats.geometry import (
    FootFirst,
    GripType,
    Handedness,
    ServiceSide,
    SlaArea,
    mirror_round,
)

CSV_HEADER = (
    "Server",
    "ServiceFrom",
    "SLA",
    "Receiver",
    "RDH",
    "Foot",
    "Grip",
    "RLA",
    "Intercept",
)
SERVICE_TYPE_COLUMN = "ServiceType"


class InterceptOutcome(str, Enum):
    """Did the server intercept the return (hit it above his shoulder)?"""

    YES = "Yes"
    NO = "No"
    NOT_APPLICABLE = "NA"  # partner took the third shot; excluded from interception fits


class RowIssue(NamedTuple):
    row: int  # 1-based data row number (header not counted)
    column: str
    message: str

    def __str__(self) -> str:
        return f"row {self.row}: {self.column}: {self.message}"


class DataError(ValueError):
    """Malformed input data; carries one issue per offending row/field."""

    def __init__(self, message: str, issues: list[RowIssue] | None = None):
        self.issues = issues or []
        if self.issues:
            message = message + "\n" + "\n".join(str(i) for i in self.issues)
        super().__init__(message)


@dataclass(frozen=True)
class RoundRecord:
    """One rally's first-three-shots observation."""

    server: str
    service_from: ServiceSide
    sla: SlaArea
    receiver: str
    rdh: Handedness
    foot: FootFirst
    grip: GripType
    rla: int
    intercept: InterceptOutcome

    def __post_init__(self) -> None:
        if not self.server.strip():
            raise ValueError("server name must be non-empty")
        if not self.receiver.strip():
            raise ValueError("receiver name must be non-empty")
        if not isinstance(self.rla, int) or isinstance(self.rla, bool) or not 1 <= self.rla <= 9:
            raise ValueError(f"rla must be an integer in 1..9, got {self.rla!r}")

    def to_json(self) -> dict:
        return {
            "server": self.server,
            "service_from": self.service_from.value,
            "sla": self.sla.value,
            "receiver": self.receiver,
            "rdh": self.rdh.value,
            "foot": self.foot.value,
            "grip": self.grip.value,
            "rla": self.rla,
            "intercept": self.intercept.value,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "RoundRecord":
        return cls(
            server=str(payload["server"]),
            service_from=ServiceSide(payload["service_from"]),
            sla=SlaArea(payload["sla"]),
            receiver=str(payload["receiver"]),
            rdh=Handedness(payload["rdh"]),
            foot=FootFirst(payload["foot"]),
            grip=GripType(payload["grip"]),
            rla=int(payload["rla"]),
            intercept=InterceptOutcome(payload["intercept"]),
        )


@dataclass(frozen=True)
class Dataset:
    """Immutable ordered collection of round records."""

    rounds: tuple[RoundRecord, ...]
    canonicalized: bool = False

    def __post_init__(self) -> None:
        if self.canonicalized and any(r.rdh is not Handedness.RIGHT for r in self.rounds):
            raise ValueError("canonicalized dataset contains a left-handed receiver")

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self) -> Iterator[RoundRecord]:
        return iter(self.rounds)

    def filter(self, predicate: Callable[[RoundRecord], bool]) -> "Dataset":
        return Dataset(tuple(r for r in self.rounds if predicate(r)), self.canonicalized)

    def for_side(self, side: ServiceSide) -> "Dataset":
        return self.filter(lambda r: r.service_from is side)


def canonicalize(ds: Dataset) -> Dataset:
    """Mirror every left-handed receiver's round so all receivers are right-handed.

    Record count and order are preserved; already-canonical datasets pass
    through unchanged apart from the flag, so the operation is idempotent.
    """
    rounds = tuple(
        mirror_round(r) if r.rdh is Handedness.LEFT else r for r in ds.rounds
    )
    return Dataset(rounds, canonicalized=True)


_ENUM_COLUMNS: dict[str, type[Enum]] = {
    "ServiceFrom": ServiceSide,
    "SLA": SlaArea,
    "RDH": Handedness,
    "Foot": FootFirst,
    "Grip": GripType,
    "Intercept": InterceptOutcome,
}


def _parse_enum(column: str, text: str) -> Enum:
    cls = _ENUM_COLUMNS[column]
    try:
        return cls(text)
    except ValueError:
        allowed = "/".join(m.value for m in cls)
        raise ValueError(f"unknown value {text!r}, expected one of {allowed}") from None


Source = Union[str, Path, IO[str], IO[bytes]]


def _open_text(source: Source) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    if hasattr(source, "read"):
        probe = source.read(0)
        if isinstance(probe, bytes):
            return io.TextIOWrapper(source, encoding="utf-8", newline="")
        return source  # text file-like
    raise TypeError(f"cannot read CSV from {type(source).__name__}")


def load_csv(source: Source, *, drop_long: bool = False) -> Dataset:
    """Parse round records from CSV.

    Raises :class:`DataError` on a malformed header (fatal) or on any bad
    rows; every offending row is reported with its row number and column.
    The returned dataset is not canonicalized.
    """
    stream = _open_text(source)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: missing CSV header") from None

    header = [h.strip() for h in header]
    has_service_type = header == [*CSV_HEADER, SERVICE_TYPE_COLUMN]
    if not has_service_type and header != list(CSV_HEADER):
        raise DataError(
            "malformed CSV header: expected "
            + ",".join(CSV_HEADER)
            + f" (optionally + {SERVICE_TYPE_COLUMN}), got "
            + ",".join(header)
        )

    expected_len = len(CSV_HEADER) + (1 if has_service_type else 0)
    rounds: list[RoundRecord] = []
    issues: list[RowIssue] = []
    for rownum, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != expected_len:
            issues.append(RowIssue(rownum, "<row>", f"expected {expected_len} fields, got {len(row)}"))
            continue
        if has_service_type:
            service_type = row[9].strip()
            if service_type == "Long":
                if drop_long:
                    continue
                issues.append(
                    RowIssue(rownum, SERVICE_TYPE_COLUMN, "long service rows are not representable; pass drop_long=True to skip them")
                )
                continue
            if service_type != "Short":
                issues.append(RowIssue(rownum, SERVICE_TYPE_COLUMN, f"unknown value {service_type!r}, expected Short/Long"))
                continue

        fields: dict = {}
        row_ok = True
        for column, raw in zip(CSV_HEADER, row):
            text = raw.strip()
            if column in ("Server", "Receiver"):
                if not text:
                    issues.append(RowIssue(rownum, column, "player name must be non-empty"))
                    row_ok = False
                fields[column] = text
            elif column == "RLA":
                try:
                    zone = int(text)
                    if not 1 <= zone <= 9:
                        raise ValueError
                    fields[column] = zone
                except ValueError:
                    issues.append(RowIssue(rownum, column, f"value {text!r} outside 1..9"))
                    row_ok = False
            else:
                try:
                    fields[column] = _parse_enum(column, text)
                except ValueError as exc:
                    issues.append(RowIssue(rownum, column, str(exc)))
                    row_ok = False
        if row_ok:
            rounds.append(
                RoundRecord(
                    server=fields["Server"],
                    service_from=fields["ServiceFrom"],
                    sla=fields["SLA"],
                    receiver=fields["Receiver"],
                    rdh=fields["RDH"],
                    foot=fields["Foot"],
                    grip=fields["Grip"],
                    rla=fields["RLA"],
                    intercept=fields["Intercept"],
                )
            )

    if issues:
        raise DataError(f"{len(issues)} bad row(s) in CSV input", issues)
    return Dataset(tuple(rounds), canonicalized=False)


def dump_csv(ds: Dataset, sink: Union[str, Path, IO[str], None] = None) -> str | None:
    """Write a dataset back to CSV; returns the text when ``sink`` is None."""
    buffer = io.StringIO() if sink is None else None
    if isinstance(sink, (str, Path)):
        out: IO[str] = open(sink, "w", encoding="utf-8", newline="")
        close = True
    else:
        out = buffer if sink is None else sink
        close = False
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in ds.rounds:
            writer.writerow(
                [
                    r.server,
                    r.service_from.value,
                    r.sla.value,
                    r.receiver,
                    r.rdh.value,
                    r.foot.value,
                    r.grip.value,
                    r.rla,
                    r.intercept.value,
                ]
            )
    finally:
        if close:
            out.close()
    return buffer.getvalue() if buffer is not None else None
