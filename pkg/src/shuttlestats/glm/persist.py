"""Versioned JSON persistence for fitted models.

A model document carries the design spec, parameter estimates keyed by
response category and column label, the row-major covariance with its
parameter order, fit statistics, and diagnostics.  The document digest
(sha256 over the canonical JSON, truncated) doubles as the model version
reported by the prediction service.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

from shuttlestats.glm.design import DesignSpec, MultinomialResponse, encode_row
from shuttlestats.glm.newton import BinaryFit, FitDiagnostics, MultinomialFit

FORMAT_VERSION = 1

Fit = Union[MultinomialFit, BinaryFit]


class ModelFormatError(ValueError):
    """The model document is not something this version can read."""


def _digest(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(canonical).hexdigest()[:12]


def fit_document(fit: Fit, spec: DesignSpec) -> dict:
    """Serializable document for a fitted model."""
    if isinstance(fit, MultinomialFit):
        kind = "multinomial"
        params = {
            category: {
                "intercept": fit.intercept_of(category),
                **{col: fit.coef_of(category, col) for col in fit.columns},
            }
            for category in fit.nonref_categories
        }
    else:
        kind = "binary"
        params = {
            "intercept": fit.intercept,
            **{col: fit.coef_of(col) for col in fit.columns},
        }
    param_order = [
        {"category": category, "column": column} for category, column in fit.param_labels()
    ]
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "design": spec.to_json(),
        "columns": list(fit.columns),
        "params": params,
        "covariance": {
            "param_order": param_order,
            "values": [float(v) for v in fit.cov.ravel()],
        },
        "log_likelihood": fit.log_likelihood,
        "n_obs": fit.n_obs,
        "n_params": fit.n_params,
        "bic": fit.bic,
        "diagnostics": fit.diagnostics.to_json(),
    }
    doc["model_version"] = _digest(doc)
    return doc


@dataclass(frozen=True)
class LoadedModel:
    fit: Fit
    spec: DesignSpec
    version: str

    def predict_proba_at(self, levels: dict[str, str]) -> np.ndarray:
        """Category probabilities at a predictor combination given by level names."""
        if not isinstance(self.fit, MultinomialFit):
            raise TypeError("probability vectors are only defined for multinomial fits")
        x = encode_row(self.spec.factors, levels)
        return self.fit.predict_proba(x)


def _diagnostics_from(doc: dict) -> FitDiagnostics:
    d = doc["diagnostics"]
    return FitDiagnostics(
        iterations=int(d["iterations"]),
        final_grad_norm=float(d["final_grad_norm"]),
        converged=bool(d["converged"]),
        separation_suspected=bool(d["separation_suspected"]),
        ridge_used=bool(d["ridge_used"]),
        backend=str(d["backend"]),
    )


def model_from_document(doc: dict) -> LoadedModel:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {doc.get('format_version')!r}"
        )
    spec = DesignSpec.from_json(doc["design"])
    columns = tuple(doc["columns"])
    m = int(doc["n_params"])
    cov = np.asarray(doc["covariance"]["values"], dtype=np.float64).reshape(m, m)
    diagnostics = _diagnostics_from(doc)

    fit: Fit
    if doc["kind"] == "multinomial":
        response = spec.response
        if not isinstance(response, MultinomialResponse):
            raise ModelFormatError("multinomial document with a non-multinomial design")
        nonref = tuple(c for c in response.categories if c != response.reference)
        coef = np.array(
            [
                [doc["params"][cat]["intercept"]]
                + [doc["params"][cat][col] for col in columns]
                for cat in nonref
            ],
            dtype=np.float64,
        )
        fit = MultinomialFit(
            categories=response.categories,
            reference=response.reference,
            columns=columns,
            coef=coef,
            cov=cov,
            log_likelihood=float(doc["log_likelihood"]),
            n_obs=int(doc["n_obs"]),
            diagnostics=diagnostics,
        )
    elif doc["kind"] == "binary":
        fit = BinaryFit(
            columns=columns,
            intercept=float(doc["params"]["intercept"]),
            coef=np.array([doc["params"][col] for col in columns], dtype=np.float64),
            cov=cov,
            log_likelihood=float(doc["log_likelihood"]),
            n_obs=int(doc["n_obs"]),
            diagnostics=diagnostics,
        )
    else:
        raise ModelFormatError(f"unknown model kind {doc['kind']!r}")
    return LoadedModel(fit=fit, spec=spec, version=str(doc["model_version"]))


def write_fit(path: Union[str, Path], fit: Fit, spec: DesignSpec) -> str:
    """Write a model document; returns its version digest."""
    doc = fit_document(fit, spec)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return doc["model_version"]


def read_fit(source: Union[str, Path, IO[str]]) -> LoadedModel:
    if isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    else:
        doc = json.load(source)
    return model_from_document(doc)
