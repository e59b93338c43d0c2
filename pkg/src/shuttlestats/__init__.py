"""Rally analytics for badminton men's doubles serve/return play.

The package covers the full pipeline: round-record ingestion and
canonicalization, landing-area summaries, from-scratch maximum-likelihood
fitting of the per-side return-zone and interception models, rule-based
holdout validation, and a CLI plus HTTP service for prediction and live
tagging.
"""

from shuttlestats.geometry import (
    DepthGroup,
    FootFirst,
    GripType,
    Handedness,
    PathGroup,
    ServiceSide,
    SlaArea,
    ZONES,
    depth_of,
    mirror_round,
    mirror_zone,
    path_of,
    zone_at,
)
from shuttlestats.records import (
    DataError,
    Dataset,
    InterceptOutcome,
    RoundRecord,
    canonicalize,
    dump_csv,
    load_csv,
)
from shuttlestats.summaries import (
    InterceptionReport,
    RlaSummary,
    SlaSummary,
    interception_rates,
    summarize_rla,
    summarize_sla,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "Dataset",
    "DepthGroup",
    "FootFirst",
    "GripType",
    "Handedness",
    "InterceptOutcome",
    "InterceptionReport",
    "PathGroup",
    "RlaSummary",
    "RoundRecord",
    "ServiceSide",
    "SlaArea",
    "SlaSummary",
    "ZONES",
    "canonicalize",
    "depth_of",
    "dump_csv",
    "interception_rates",
    "load_csv",
    "mirror_round",
    "mirror_zone",
    "path_of",
    "summarize_rla",
    "summarize_sla",
    "zone_at",
    "__version__",
]
