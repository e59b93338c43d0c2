"""Dummy-coded design matrices for categorical predictors.

Every predictor is a categorical factor with declared levels and a declared
reference level; the design matrix carries one 0/1 indicator column per
non-reference level, in declared order, and the intercept is implicit.
Responses are either multinomial (a declared category set with a reference
category) or binary (one level counted as success).

Factor values are read off round records through a small named-feature
registry, so a design can be described by plain strings and round-tripped
through the model persistence format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from shuttlestats.geometry import depth_of, path_of
from shuttlestats.records import Dataset, RoundRecord


class DesignError(ValueError):
    """A dataset value fell outside the declared design."""


#: Named features a factor or response can read from a round record.
FEATURES: dict[str, Callable[[RoundRecord], str]] = {
    "service_from": lambda r: r.service_from.value,
    "sla": lambda r: r.sla.value,
    "rdh": lambda r: r.rdh.value,
    "foot": lambda r: r.foot.value,
    "grip": lambda r: r.grip.value,
    "rla": lambda r: str(r.rla),
    "rla_path": lambda r: path_of(r.rla).value,
    "rla_depth": lambda r: depth_of(r.rla).value,
    "intercept": lambda r: r.intercept.value,
}


@dataclass(frozen=True)
class CategoricalFactor:
    """A categorical predictor with a declared reference level."""

    name: str
    levels: tuple[str, ...]
    reference: str

    def __post_init__(self) -> None:
        if len(self.levels) < 2:
            raise ValueError(f"factor {self.name!r} needs at least 2 levels")
        if len(set(self.levels)) != len(self.levels):
            raise ValueError(f"factor {self.name!r} has duplicate levels")
        if self.reference not in self.levels:
            raise ValueError(
                f"reference {self.reference!r} is not a level of factor {self.name!r}"
            )
        if self.name not in FEATURES:
            raise ValueError(f"unknown feature {self.name!r}")

    @property
    def indicator_levels(self) -> tuple[str, ...]:
        return tuple(l for l in self.levels if l != self.reference)

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(f"{self.name}={l}" for l in self.indicator_levels)

    def value_of(self, record: RoundRecord) -> str:
        value = FEATURES[self.name](record)
        if value not in self.levels:
            raise DesignError(f"factor {self.name!r}: unseen level {value!r}")
        return value


@dataclass(frozen=True)
class MultinomialResponse:
    name: str
    categories: tuple[str, ...]
    reference: str

    def __post_init__(self) -> None:
        if self.reference not in self.categories:
            raise ValueError(f"reference category {self.reference!r} not in category set")
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("duplicate response categories")
        if self.name not in FEATURES:
            raise ValueError(f"unknown feature {self.name!r}")


@dataclass(frozen=True)
class BinaryResponse:
    name: str
    success: str

    def __post_init__(self) -> None:
        if self.name not in FEATURES:
            raise ValueError(f"unknown feature {self.name!r}")


Response = Union[MultinomialResponse, BinaryResponse]


@dataclass(frozen=True)
class DesignSpec:
    """Predictor factors plus the response specification."""

    factors: tuple[CategoricalFactor, ...]
    response: Response

    def __post_init__(self) -> None:
        names = [f.name for f in self.factors]
        if len(set(names)) != len(names):
            raise ValueError("duplicate factors in design")

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(c for f in self.factors for c in f.columns)

    def to_json(self) -> dict:
        doc: dict = {
            "factors": [
                {"name": f.name, "levels": list(f.levels), "reference": f.reference}
                for f in self.factors
            ]
        }
        if isinstance(self.response, MultinomialResponse):
            doc["response"] = {
                "kind": "multinomial",
                "name": self.response.name,
                "categories": list(self.response.categories),
                "reference": self.response.reference,
            }
        else:
            doc["response"] = {
                "kind": "binary",
                "name": self.response.name,
                "success": self.response.success,
            }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "DesignSpec":
        factors = tuple(
            CategoricalFactor(f["name"], tuple(f["levels"]), f["reference"])
            for f in doc["factors"]
        )
        r = doc["response"]
        response: Response
        if r["kind"] == "multinomial":
            response = MultinomialResponse(r["name"], tuple(r["categories"]), r["reference"])
        else:
            response = BinaryResponse(r["name"], r["success"])
        return cls(factors, response)


@dataclass(frozen=True)
class DesignMatrix:
    """0/1 indicator matrix with labeled columns (intercept implicit)."""

    values: np.ndarray
    columns: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("design values do not match column labels")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]


def encode_row(factors: Sequence[CategoricalFactor], values: dict[str, str]) -> np.ndarray:
    """Indicator row for one predictor combination given as {factor: level}."""
    cells: list[float] = []
    for factor in factors:
        level = values.get(factor.name)
        if level is None:
            raise DesignError(f"missing value for factor {factor.name!r}")
        if level not in factor.levels:
            raise DesignError(f"factor {factor.name!r}: unseen level {level!r}")
        cells.extend(1.0 if level == ind else 0.0 for ind in factor.indicator_levels)
    return np.asarray(cells, dtype=np.float64)


def build_design(
    ds: Dataset,
    spec: DesignSpec,
    row_filter: Callable[[RoundRecord], bool] | None = None,
) -> tuple[DesignMatrix, np.ndarray]:
    """Encode a dataset into an indicator matrix and a response vector.

    The response is a vector of category indices into the declared category
    set for a multinomial response, or 0/1 for a binary response.  Raises
    :class:`DesignError` for values outside the declared levels and for an
    empty filtered dataset.
    """
    records = [r for r in ds if row_filter is None or row_filter(r)]
    if not records:
        raise DesignError("no rounds left after filtering; cannot build a design")

    columns = spec.columns
    X = np.zeros((len(records), len(columns)), dtype=np.float64)
    for i, record in enumerate(records):
        offset = 0
        for factor in spec.factors:
            value = factor.value_of(record)
            for k, level in enumerate(factor.indicator_levels):
                if value == level:
                    X[i, offset + k] = 1.0
            offset += len(factor.indicator_levels)

    extractor = FEATURES[spec.response.name]
    if isinstance(spec.response, MultinomialResponse):
        index = {c: j for j, c in enumerate(spec.response.categories)}
        y = np.empty(len(records), dtype=np.int64)
        for i, record in enumerate(records):
            value = extractor(record)
            if value not in index:
                raise DesignError(
                    f"response {spec.response.name!r}: unseen category {value!r}"
                )
            y[i] = index[value]
    else:
        y = np.fromiter(
            (1 if extractor(r) == spec.response.success else 0 for r in records),
            dtype=np.int64,
            count=len(records),
        )
    return DesignMatrix(X, columns), y
