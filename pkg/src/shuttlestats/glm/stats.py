"""Wald reports, BIC, odds ratios, and the normal CDF they rest on."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from shuttlestats.glm.newton import BinaryFit, MultinomialFit

# Hastings-type rational approximation to the standard normal CDF
# (Abramowitz & Stegun 26.2.17), absolute error < 7.5e-8.
_P = 0.2316419
_B = (0.319381530, -0.356563782, 1.781477937, -1.821255978, 1.330274429)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def normal_cdf(x: float) -> float:
    """Standard normal CDF, accurate to better than 7.5e-8 everywhere."""
    if x < 0.0:
        return 1.0 - normal_cdf(-x)
    t = 1.0 / (1.0 + _P * x)
    poly = t * (_B[0] + t * (_B[1] + t * (_B[2] + t * (_B[3] + t * _B[4]))))
    return 1.0 - _INV_SQRT_2PI * math.exp(-0.5 * x * x) * poly


def two_sided_p(z: float) -> float:
    p = 2.0 * (1.0 - normal_cdf(abs(z)))
    return min(max(p, 0.0), 1.0)


def format_p(p: float) -> str:
    """Four-decimal p-value display, with tiny values shown as <0.0001."""
    return "<0.0001" if p < 0.00005 else f"{p:.4f}"


def odds_ratio(estimate: float) -> float:
    """Multiplicative change in the probability ratio per unit of a predictor."""
    return math.exp(estimate)


def bic(log_likelihood: float, n_params: int, n_obs: int) -> float:
    """Bayesian information criterion, counting every free parameter."""
    penalty = n_params * math.log(n_obs) if n_params else 0.0
    return -2.0 * log_likelihood + penalty


@dataclass(frozen=True)
class WaldRow:
    category: str | None  # response category; None for binary fits
    column: str  # "intercept" or a design column label
    estimate: float
    se: float | None  # None when the covariance diagonal is not positive
    z: float | None
    p: float | None

    def to_json(self) -> dict:
        return {
            "category": self.category,
            "column": self.column,
            "estimate": self.estimate,
            "se": self.se,
            "z": self.z,
            "p": self.p,
        }


@dataclass(frozen=True)
class WaldReport:
    rows: tuple[WaldRow, ...]

    def filtered(self, p_max: float = 0.2, include_intercepts: bool = False) -> tuple[WaldRow, ...]:
        """Rows below a p-value display threshold (the full set stays on the report)."""
        return tuple(
            r
            for r in self.rows
            if (include_intercepts or r.column != "intercept")
            and r.p is not None
            and r.p < p_max
        )

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.rows]

    def as_text(self, p_max: float | None = None) -> str:
        rows = self.rows if p_max is None else self.filtered(p_max)
        lines = [f"{'Variable':24s}{'Category':>10s}{'Estimate (SE)':>22s}{'p-value':>10s}"]
        for r in rows:
            cat = r.category if r.category is not None else ""
            if r.se is None:
                est = f"{r.estimate:.4f} (undefined)"
                ptxt = "n/a"
            else:
                est = f"{r.estimate:.4f} ({r.se:.4f})"
                ptxt = format_p(r.p)
            lines.append(f"{r.column:24s}{cat:>10s}{est:>22s}{ptxt:>10s}")
        return "\n".join(lines)


def wald(fit: Union[MultinomialFit, BinaryFit]) -> WaldReport:
    """Wald statistics for every parameter of a fit.

    Standard errors come from the observed-information covariance; entries
    whose covariance diagonal is not positive are reported with an
    undefined marker rather than a fabricated value.
    """
    labels = fit.param_labels()
    estimates = fit.flat_params()
    variances = fit.cov.diagonal()
    rows = []
    for (category, column), estimate, var in zip(labels, estimates, variances):
        if var > 0.0:
            se = math.sqrt(var)
            z = estimate / se
            p = two_sided_p(z)
            rows.append(WaldRow(category, column, float(estimate), se, z, p))
        else:
            rows.append(WaldRow(category, column, float(estimate), None, None, None))
    return WaldReport(tuple(rows))
