"""From-scratch maximum-likelihood fitting of multinomial and binary logit models."""

from shuttlestats.glm.backend import active_backend, available_backends, get_kernels
from shuttlestats.glm.design import (
    BinaryResponse,
    CategoricalFactor,
    DesignError,
    DesignMatrix,
    DesignSpec,
    MultinomialResponse,
    build_design,
    encode_row,
)
from shuttlestats.glm.newton import (
    BinaryFit,
    CollinearityError,
    FitDiagnostics,
    FitError,
    MultinomialFit,
    NonConvergenceError,
    fit_logistic,
    fit_multinomial,
    predict_proba,
)
from shuttlestats.glm.persist import (
    LoadedModel,
    ModelFormatError,
    fit_document,
    model_from_document,
    read_fit,
    write_fit,
)
from shuttlestats.glm.stats import (
    WaldReport,
    WaldRow,
    bic,
    format_p,
    normal_cdf,
    odds_ratio,
    two_sided_p,
    wald,
)
from shuttlestats.glm.stepwise import (
    SelectionError,
    SelectionResult,
    SelectionStep,
    stepwise_bic,
)

__all__ = [
    "BinaryFit",
    "BinaryResponse",
    "CategoricalFactor",
    "CollinearityError",
    "DesignError",
    "DesignMatrix",
    "DesignSpec",
    "FitDiagnostics",
    "FitError",
    "LoadedModel",
    "ModelFormatError",
    "MultinomialFit",
    "MultinomialResponse",
    "NonConvergenceError",
    "SelectionError",
    "SelectionResult",
    "SelectionStep",
    "WaldReport",
    "WaldRow",
    "active_backend",
    "available_backends",
    "bic",
    "build_design",
    "encode_row",
    "fit_document",
    "fit_logistic",
    "fit_multinomial",
    "format_p",
    "get_kernels",
    "model_from_document",
    "normal_cdf",
    "odds_ratio",
    "predict_proba",
    "read_fit",
    "stepwise_bic",
    "two_sided_p",
    "wald",
    "write_fit",
]
