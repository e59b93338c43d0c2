"""Interception models: where a server's third-shot attack succeeds.

Rounds the partner handled are excluded.  The left-side model is selected
by forward BIC over the service band, foot, grip, and the return path
(left path as reference); the right-side model regresses on the eight
non-reference zone indicators directly (zone 5 as reference) and is
reported through the usual p-value display filter, with no selection.
"""

from __future__ import annotations

from dataclasses import dataclass

from shuttlestats.geometry import PathGroup, ServiceSide, ZONES
from shuttlestats.glm.design import (
    BinaryResponse,
    CategoricalFactor,
    DesignSpec,
    build_design,
)
from shuttlestats.glm.newton import BinaryFit, FitError, fit_logistic
from shuttlestats.glm.stats import WaldReport, format_p, odds_ratio, wald
from shuttlestats.glm.stepwise import SelectionError, SelectionResult, stepwise_bic
from shuttlestats.rla import FOOT_FACTOR, GRIP_FACTOR, SLA_FACTOR
from shuttlestats.records import Dataset, InterceptOutcome, RoundRecord

PATH_FACTOR = CategoricalFactor("rla_path", ("Left", "Center", "Right"), "Left")
ZONE_FACTOR = CategoricalFactor("rla", tuple(str(z) for z in ZONES), "5")
INTERCEPT_RESPONSE = BinaryResponse("intercept", success="Yes")

LEFT_CANDIDATES = (SLA_FACTOR, FOOT_FACTOR, GRIP_FACTOR, PATH_FACTOR)
RIGHT_DESIGN = DesignSpec((ZONE_FACTOR,), INTERCEPT_RESPONSE)


def _applicable(side: ServiceSide):
    def keep(r: RoundRecord) -> bool:
        return r.service_from is side and r.intercept is not InterceptOutcome.NOT_APPLICABLE

    return keep


@dataclass(frozen=True)
class InterceptModelPair:
    left_selection: SelectionResult | None  # forward-BIC trace plus final fit
    right_fit: BinaryFit | None
    failures: dict[str, str]

    @property
    def left_fit(self) -> BinaryFit | None:
        return self.left_selection.fit if self.left_selection is not None else None


def fit_intercept_models(ds: Dataset, *, backend: str | None = None) -> InterceptModelPair:
    """Fit both per-side interception models on a canonicalized dataset."""
    if not ds.canonicalized:
        raise ValueError("fit_intercept_models requires a canonicalized dataset")

    failures: dict[str, str] = {}
    left_selection: SelectionResult | None = None
    try:
        left_selection = stepwise_bic(
            ds, LEFT_CANDIDATES, INTERCEPT_RESPONSE,
            row_filter=_applicable(ServiceSide.LEFT), backend=backend,
        )
    except (SelectionError, FitError, ValueError) as exc:
        failures["Left"] = f"serving from the left: {exc}"

    right_fit: BinaryFit | None = None
    try:
        design, y = build_design(ds, RIGHT_DESIGN, _applicable(ServiceSide.RIGHT))
        right_fit = fit_logistic(design.values, y, columns=design.columns, backend=backend)
    except (FitError, ValueError) as exc:
        failures["Right"] = f"serving from the right: {exc}"

    return InterceptModelPair(left_selection=left_selection, right_fit=right_fit, failures=failures)


@dataclass(frozen=True)
class OddsInterpretation:
    side: str
    column: str
    estimate: float
    ratio: float
    p: float | None
    text: str

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "column": self.column,
            "estimate": self.estimate,
            "odds_ratio": self.ratio,
            "p": self.p,
            "text": self.text,
        }


def _describe(side: str, column: str, reference: str, estimate: float, p: float | None) -> OddsInterpretation:
    ratio = odds_ratio(estimate)
    ptxt = format_p(p) if p is not None else "n/a"
    _, level = column.split("=", 1)
    text = (
        f"Serving from the {side.lower()}: a return to {level} changes the interception "
        f"odds by a factor of {ratio:.2f} relative to {reference} (p={ptxt})."
    )
    return OddsInterpretation(side, column, estimate, ratio, p, text)


def intercept_odds_report(
    pair: InterceptModelPair, *, p_max: float = 0.2
) -> list[OddsInterpretation]:
    """Odds ratios versus each model's reference (left path, or zone 5)."""
    out: list[OddsInterpretation] = []
    if pair.left_fit is not None:
        report = wald(pair.left_fit)
        for row in report.filtered(p_max):
            out.append(_describe("Left", row.column, "the left path", row.estimate, row.p))
    if pair.right_fit is not None:
        report = wald(pair.right_fit)
        for row in report.filtered(p_max):
            out.append(_describe("Right", row.column, "zone 5", row.estimate, row.p))
    return out


def wald_reports(pair: InterceptModelPair) -> dict[str, WaldReport]:
    reports: dict[str, WaldReport] = {}
    if pair.left_fit is not None:
        reports["Left"] = wald(pair.left_fit)
    if pair.right_fit is not None:
        reports["Right"] = wald(pair.right_fit)
    return reports
