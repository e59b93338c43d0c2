"""Forward stepwise model selection by BIC at factor granularity.

Candidate factors enter or leave as whole blocks of indicator columns.
Selection starts from the intercept-only model and at each step adds the
candidate giving the largest BIC decrease, stopping when no addition
helps; ties break deterministically in declared candidate order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

from shuttlestats.glm.design import (
    BinaryResponse,
    CategoricalFactor,
    DesignSpec,
    MultinomialResponse,
    Response,
    build_design,
)
from shuttlestats.glm.newton import (
    BinaryFit,
    FitError,
    MultinomialFit,
    fit_logistic,
    fit_multinomial,
)
from shuttlestats.records import Dataset, RoundRecord

Fit = Union[MultinomialFit, BinaryFit]


class SelectionError(RuntimeError):
    def __init__(self, message: str, trace: list["SelectionStep"]):
        self.trace = trace
        super().__init__(message)


@dataclass(frozen=True)
class SelectionStep:
    added: str | None  # factor added at this step; None for the starting model
    bic: float
    candidate_bics: dict[str, float]


@dataclass(frozen=True)
class SelectionResult:
    algorithm: str
    selected: tuple[str, ...]
    factors: tuple[CategoricalFactor, ...]  # the selected factors, in entry order
    fit: Fit
    trace: tuple[SelectionStep, ...]

    @property
    def final_bic(self) -> float:
        return self.fit.bic


def _fit_subset(
    ds: Dataset,
    factors: Sequence[CategoricalFactor],
    response: Response,
    row_filter: Callable[[RoundRecord], bool] | None,
    backend: str | None,
) -> Fit:
    design, y = build_design(ds, DesignSpec(tuple(factors), response), row_filter)
    if isinstance(response, MultinomialResponse):
        return fit_multinomial(
            design.values, y, response.categories, response.reference,
            columns=design.columns, backend=backend,
        )
    return fit_logistic(design.values, y, columns=design.columns, backend=backend)


def stepwise_bic(
    ds: Dataset,
    candidates: Sequence[CategoricalFactor],
    response: Response,
    *,
    row_filter: Callable[[RoundRecord], bool] | None = None,
    backend: str | None = None,
) -> SelectionResult:
    """Forward BIC selection over candidate factors.

    Fit errors abort the search and carry the trace accumulated so far.
    """
    if not candidates:
        raise ValueError("no candidate factors given")
    trace: list[SelectionStep] = []
    selected: list[CategoricalFactor] = []
    try:
        current = _fit_subset(ds, selected, response, row_filter, backend)
    except FitError as exc:
        raise SelectionError(f"intercept-only fit failed: {exc}", trace) from exc
    trace.append(SelectionStep(None, current.bic, {}))

    remaining = list(candidates)
    while remaining:
        candidate_bics: dict[str, float] = {}
        best_factor = None
        best_fit = None
        for factor in remaining:
            try:
                fit = _fit_subset(ds, [*selected, factor], response, row_filter, backend)
            except FitError as exc:
                raise SelectionError(
                    f"fit failed while trying factor {factor.name!r}: {exc}", trace
                ) from exc
            candidate_bics[factor.name] = fit.bic
            if fit.bic < current.bic and (best_fit is None or fit.bic < best_fit.bic):
                best_factor, best_fit = factor, fit
        if best_factor is None:
            # record the rejected probe so the stopping decision is auditable
            trace.append(SelectionStep(None, current.bic, candidate_bics))
            break
        selected.append(best_factor)
        remaining.remove(best_factor)
        current = best_fit
        trace.append(SelectionStep(best_factor.name, current.bic, candidate_bics))

    return SelectionResult(
        algorithm="forward",
        selected=tuple(f.name for f in selected),
        factors=tuple(selected),
        fit=current,
        trace=tuple(trace),
    )
