"""Return-landing-area models: one multinomial fit per serving side.

Both fits share the same coding: indicator columns for the service band
(outside, middle; inside is the reference), the first-step foot (left;
right is the reference), and the grip (forehand; backhand is the implicit
reference since the forehand indicator is what enters the design), with
return zone 5 as the reference response category.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shuttlestats.geometry import FootFirst, GripType, ServiceSide, SlaArea, ZONES
from shuttlestats.glm.design import (
    CategoricalFactor,
    DesignSpec,
    MultinomialResponse,
    build_design,
    encode_row,
)
from shuttlestats.glm.newton import FitError, MultinomialFit, fit_multinomial
from shuttlestats.glm.stats import WaldReport, format_p, odds_ratio, wald
from shuttlestats.records import Dataset

SLA_FACTOR = CategoricalFactor("sla", ("Inside", "Outside", "Middle"), "Inside")
FOOT_FACTOR = CategoricalFactor("foot", ("Right", "Left"), "Right")
GRIP_FACTOR = CategoricalFactor("grip", ("Backhand", "Forehand"), "Backhand")
RLA_RESPONSE = MultinomialResponse("rla", tuple(str(z) for z in ZONES), "5")
RLA_DESIGN = DesignSpec((SLA_FACTOR, FOOT_FACTOR, GRIP_FACTOR), RLA_RESPONSE)

# Row order of the 12-combination probability table.
TABLE_SLA_ORDER = (SlaArea.INSIDE, SlaArea.OUTSIDE, SlaArea.MIDDLE)
TABLE_FOOT_ORDER = (FootFirst.RIGHT, FootFirst.LEFT)
TABLE_GRIP_ORDER = (GripType.BACKHAND, GripType.FOREHAND)


@dataclass(frozen=True)
class RlaModelPair:
    """Per-side zone models; a side missing from the data is a labeled absence."""

    left: MultinomialFit | None
    right: MultinomialFit | None
    failures: dict[str, str]

    def for_side(self, side: ServiceSide) -> MultinomialFit | None:
        return self.left if side is ServiceSide.LEFT else self.right


def fit_rla_models(ds: Dataset, *, backend: str | None = None) -> RlaModelPair:
    """Fit the two per-side zone models on a canonicalized dataset."""
    if not ds.canonicalized:
        raise ValueError("fit_rla_models requires a canonicalized dataset")
    fits: dict[ServiceSide, MultinomialFit | None] = {}
    failures: dict[str, str] = {}
    for side in ServiceSide:
        try:
            design, y = build_design(ds, RLA_DESIGN, lambda r, s=side: r.service_from is s)
            fits[side] = fit_multinomial(
                design.values, y,
                RLA_RESPONSE.categories, RLA_RESPONSE.reference,
                columns=design.columns, backend=backend,
            )
        except (FitError, ValueError) as exc:
            fits[side] = None
            failures[side.value] = f"serving from the {side.value.lower()}: {exc}"
    return RlaModelPair(left=fits[ServiceSide.LEFT], right=fits[ServiceSide.RIGHT], failures=failures)


@dataclass(frozen=True)
class ProbabilityRow:
    sla: SlaArea
    foot: FootFirst
    grip: GripType
    probs: np.ndarray  # zone 1..9 probabilities, summing to 1


@dataclass(frozen=True)
class ProbabilityTable:
    """Predicted zone probabilities for all 12 predictor combinations."""

    rows: tuple[ProbabilityRow, ...]

    def row_for(self, sla: SlaArea, foot: FootFirst, grip: GripType) -> ProbabilityRow:
        for row in self.rows:
            if (row.sla, row.foot, row.grip) == (sla, foot, grip):
                return row
        raise KeyError((sla, foot, grip))

    def to_json(self) -> list[dict]:
        return [
            {
                "sla": row.sla.value,
                "foot": row.foot.value,
                "grip": row.grip.value,
                "probabilities": {str(z): float(p) for z, p in zip(ZONES, row.probs)},
            }
            for row in self.rows
        ]

    def as_text(self) -> str:
        lines = [
            f"{'SLA':9s}{'Foot':7s}{'Grip':10s}" + "".join(f"{'No.' + str(z):>7s}" for z in ZONES)
        ]
        for row in self.rows:
            cells = "".join(f"{p:7.2f}" for p in row.probs)
            lines.append(f"{row.sla.value:9s}{row.foot.value:7s}{row.grip.value:10s}" + cells)
        return "\n".join(lines)


def probability_table(fit: MultinomialFit) -> ProbabilityTable:
    """Evaluate the fit at all 12 predictor combinations (exact values kept)."""
    rows = []
    for sla in TABLE_SLA_ORDER:
        for foot in TABLE_FOOT_ORDER:
            for grip in TABLE_GRIP_ORDER:
                x = encode_row(
                    RLA_DESIGN.factors,
                    {"sla": sla.value, "foot": foot.value, "grip": grip.value},
                )
                rows.append(ProbabilityRow(sla, foot, grip, fit.predict_proba(x)))
    return ProbabilityTable(tuple(rows))


@dataclass(frozen=True)
class EffectInterpretation:
    column: str  # e.g. "foot=Left"
    category: str  # zone label
    estimate: float
    ratio: float
    p: float
    text: str

    def to_json(self) -> dict:
        return {
            "column": self.column,
            "zone": self.category,
            "estimate": self.estimate,
            "odds_ratio": self.ratio,
            "p": self.p,
            "text": self.text,
        }


def interpret(
    fit: MultinomialFit,
    report: WaldReport | None = None,
    *,
    p_max: float = 0.2,
) -> list[EffectInterpretation]:
    """Odds-ratio readings for every slope parameter below the display threshold."""
    if report is None:
        report = wald(fit)
    out = []
    for row in report.filtered(p_max):
        ratio = odds_ratio(row.estimate)
        factor_name, level = row.column.split("=", 1)
        direction = "multiplied by" if row.estimate != 0.0 else "unchanged at"
        text = (
            f"With {factor_name}={level}, the probability ratio of zone {row.category} "
            f"to zone {fit.reference} is {direction} {ratio:.2f} "
            f"(vs the {factor_name} reference; p={format_p(row.p)})."
        )
        out.append(
            EffectInterpretation(
                column=row.column,
                category=row.category,
                estimate=row.estimate,
                ratio=ratio,
                p=row.p,
                text=text,
            )
        )
    return out
