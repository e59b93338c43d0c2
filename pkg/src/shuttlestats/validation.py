"""Rule classifiers and contingency tables for holdout validation.

Two deterministic one-variable classifiers are checked against a holdout
match: the first-step foot predicting return depth (left foot -> rear
court, right foot -> front court) and the grip predicting return path
(forehand -> right path, backhand -> left path).  The relaxed variants
also accept the middle band (middle court / center path) for either
predictor value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from shuttlestats.geometry import DepthGroup, FootFirst, GripType, PathGroup, depth_of, path_of
from shuttlestats.records import Dataset


class RuleMode(str, Enum):
    STRICT = "strict"
    RELAXED = "relaxed"


@dataclass(frozen=True)
class ContingencyTable:
    """2x3 counts of predictor value against grouped return outcome."""

    predictor: str
    row_labels: tuple[str, str]
    col_labels: tuple[str, str, str]
    counts: tuple[tuple[int, int, int], tuple[int, int, int]]

    @property
    def grand_total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def cell(self, row: str, col: str) -> int:
        return self.counts[self.row_labels.index(row)][self.col_labels.index(col)]

    def to_json(self) -> dict:
        return {
            "predictor": self.predictor,
            "columns": list(self.col_labels),
            "rows": {
                label: dict(zip(self.col_labels, row))
                for label, row in zip(self.row_labels, self.counts)
            },
            "total": self.grand_total,
        }

    def as_text(self) -> str:
        width = max(len(c) for c in self.col_labels) + 4
        lines = [f"{'':14s}" + "".join(f"{c:>{width}s}" for c in self.col_labels)]
        for label, row in zip(self.row_labels, self.counts):
            lines.append(f"{label:14s}" + "".join(f"{n:>{width}d}" for n in row))
        totals = [sum(self.counts[r][c] for r in range(2)) for c in range(3)]
        lines.append(f"{'Total':14s}" + "".join(f"{n:>{width}d}" for n in totals))
        return "\n".join(lines)


@dataclass(frozen=True)
class RuleSpec:
    """Maps each predictor value to the set of accepted outcome groups."""

    predictor: str  # "foot" or "grip"
    mode: RuleMode
    accepted: dict[str, frozenset[str]]


def foot_rule(mode: RuleMode) -> RuleSpec:
    accepted = {
        FootFirst.LEFT.value: {DepthGroup.REAR.value},
        FootFirst.RIGHT.value: {DepthGroup.FRONT.value},
    }
    if mode is RuleMode.RELAXED:
        for key in accepted:
            accepted[key] = accepted[key] | {DepthGroup.MIDDLE.value}
    return RuleSpec("foot", mode, {k: frozenset(v) for k, v in accepted.items()})


def grip_rule(mode: RuleMode) -> RuleSpec:
    # The strict grip rule is not evaluated in the source study; it is the
    # natural single-band counterpart and is labeled as such in reports.
    accepted = {
        GripType.FOREHAND.value: {PathGroup.RIGHT.value},
        GripType.BACKHAND.value: {PathGroup.LEFT.value},
    }
    if mode is RuleMode.RELAXED:
        for key in accepted:
            accepted[key] = accepted[key] | {PathGroup.CENTER.value}
    return RuleSpec("grip", mode, {k: frozenset(v) for k, v in accepted.items()})


def foot_contingency(ds: Dataset) -> ContingencyTable:
    """First-step foot against the return's depth band."""
    if not ds.canonicalized:
        raise ValueError("contingency tables require a canonicalized dataset")
    rows = (FootFirst.LEFT, FootFirst.RIGHT)
    cols = (DepthGroup.FRONT, DepthGroup.MIDDLE, DepthGroup.REAR)
    counts = [[0, 0, 0], [0, 0, 0]]
    for r in ds:
        counts[rows.index(r.foot)][cols.index(depth_of(r.rla))] += 1
    return ContingencyTable(
        predictor="foot",
        row_labels=tuple(f.value for f in rows),
        col_labels=tuple(c.value for c in cols),
        counts=tuple(tuple(row) for row in counts),
    )


def grip_contingency(ds: Dataset) -> ContingencyTable:
    """Grip against the return's path."""
    if not ds.canonicalized:
        raise ValueError("contingency tables require a canonicalized dataset")
    rows = (GripType.FOREHAND, GripType.BACKHAND)
    cols = (PathGroup.LEFT, PathGroup.CENTER, PathGroup.RIGHT)
    counts = [[0, 0, 0], [0, 0, 0]]
    for r in ds:
        counts[rows.index(r.grip)][cols.index(path_of(r.rla))] += 1
    return ContingencyTable(
        predictor="grip",
        row_labels=tuple(g.value for g in rows),
        col_labels=tuple(c.value for c in cols),
        counts=tuple(tuple(row) for row in counts),
    )


def rule_accuracy(table: ContingencyTable, rule: RuleSpec) -> float:
    """Fraction of rounds whose outcome group the rule accepts."""
    if table.grand_total == 0:
        raise ValueError("cannot compute accuracy on an empty table")
    if rule.predictor != table.predictor:
        raise ValueError(f"rule is for {rule.predictor!r}, table is for {table.predictor!r}")
    hits = 0
    for row_label, row in zip(table.row_labels, table.counts):
        accepted = rule.accepted[row_label]
        hits += sum(n for col, n in zip(table.col_labels, row) if col in accepted)
    return hits / table.grand_total
