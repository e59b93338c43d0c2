"""Descriptive summaries: service/return landing distributions, interception rates.

All summaries require a canonicalized dataset so left- and right-handed
rounds are on a common footing.  Proportions are kept as exact floats and
rounded only by the display helpers.
"""

from __future__ import annotations

from dataclasses import dataclass

from shuttlestats.geometry import (
    CROSSING_ZONES,
    ServiceSide,
    SlaArea,
    ZONES,
)
from shuttlestats.records import Dataset, InterceptOutcome


def _require_canonical(ds: Dataset) -> None:
    if not ds.canonicalized:
        raise ValueError("summaries require a canonicalized dataset; call canonicalize() first")


@dataclass(frozen=True)
class SlaSummary:
    """Counts of service landing areas by serving side."""

    counts: dict[ServiceSide, dict[SlaArea, int]]

    @property
    def totals(self) -> dict[SlaArea, int]:
        return {a: sum(self.counts[s][a] for s in ServiceSide) for a in SlaArea}

    @property
    def grand_total(self) -> int:
        return sum(self.totals.values())

    @property
    def proportions(self) -> dict[SlaArea, float]:
        """Share of each area over all services; empty for an empty dataset."""
        total = self.grand_total
        if total == 0:
            return {}
        return {a: n / total for a, n in self.totals.items()}

    def to_json(self) -> dict:
        return {
            "counts": {s.value: {a.value: self.counts[s][a] for a in SlaArea} for s in ServiceSide},
            "totals": {a.value: n for a, n in self.totals.items()},
            "proportions": {a.value: p for a, p in self.proportions.items()},
        }

    def as_text(self) -> str:
        areas = list(SlaArea)
        lines = ["Service landing area distribution"]
        lines.append(f"{'':24s}" + "".join(f"{a.value:>10s}" for a in areas))
        for side in ServiceSide:
            row = self.counts[side]
            lines.append(f"Serving from the {side.value.lower():7s}" + "".join(f"{row[a]:>10d}" for a in areas))
        props = self.proportions
        total_cells = []
        for a in areas:
            cell = f"{self.totals[a]}"
            if props:
                cell += f" ({100 * props[a]:.1f}%)"
            total_cells.append(f"{cell:>14s}")
        lines.append(f"{'Total':24s}" + "".join(total_cells))
        return "\n".join(lines)


@dataclass(frozen=True)
class RlaSummary:
    """Counts of return landing zones by serving side."""

    counts: dict[ServiceSide, dict[int, int]]

    @property
    def totals(self) -> dict[int, int]:
        return {z: sum(self.counts[s][z] for s in ServiceSide) for z in ZONES}

    @property
    def grand_total(self) -> int:
        return sum(self.totals.values())

    @property
    def proportions(self) -> dict[int, float]:
        total = self.grand_total
        if total == 0:
            return {}
        return {z: n / total for z, n in self.totals.items()}

    @property
    def crossing_share(self) -> float | None:
        """Share of returns landing in the crossing zones {2,4,5,6,8}."""
        total = self.grand_total
        if total == 0:
            return None
        return sum(self.totals[z] for z in sorted(CROSSING_ZONES)) / total

    @property
    def corner_share(self) -> float | None:
        total = self.grand_total
        if total == 0:
            return None
        crossing = self.crossing_share
        return 1.0 - crossing if crossing is not None else None

    def to_json(self) -> dict:
        return {
            "counts": {s.value: {str(z): self.counts[s][z] for z in ZONES} for s in ServiceSide},
            "totals": {str(z): n for z, n in self.totals.items()},
            "proportions": {str(z): p for z, p in self.proportions.items()},
            "crossing_share": self.crossing_share,
        }

    def as_text(self) -> str:
        lines = ["Return landing area distribution"]
        lines.append(f"{'':24s}" + "".join(f"{'No.' + str(z):>8s}" for z in ZONES))
        for side in ServiceSide:
            row = self.counts[side]
            lines.append(f"Serving from {side.value.lower():11s}" + "".join(f"{row[z]:>8d}" for z in ZONES))
        lines.append(f"{'Total':24s}" + "".join(f"{self.totals[z]:>8d}" for z in ZONES))
        props = self.proportions
        if props:
            lines.append(f"{'':24s}" + "".join(f"{100 * props[z]:>7.1f}%" for z in ZONES))
            lines.append(f"Crossing-zone share: {100 * self.crossing_share:.1f}%")
        return "\n".join(lines)


@dataclass(frozen=True)
class PlayerInterception:
    interceptions: int
    services: int  # rounds served with an applicable third-shot outcome

    @property
    def rate(self) -> float:
        return self.interceptions / self.services


@dataclass(frozen=True)
class InterceptionReport:
    """Per-server interception counts over rounds with an applicable outcome."""

    players: dict[str, PlayerInterception]

    @property
    def overall_rate(self) -> float | None:
        services = sum(p.services for p in self.players.values())
        if services == 0:
            return None
        return sum(p.interceptions for p in self.players.values()) / services

    def over_threshold(self, threshold: float = 0.30) -> list[tuple[str, PlayerInterception]]:
        qualifying = [(name, p) for name, p in self.players.items() if p.rate > threshold]
        return sorted(qualifying, key=lambda item: item[1].rate, reverse=True)

    def to_json(self) -> dict:
        return {
            "players": {
                name: {"interceptions": p.interceptions, "services": p.services, "rate": p.rate}
                for name, p in sorted(self.players.items())
            },
            "overall_rate": self.overall_rate,
        }

    def as_text(self, threshold: float = 0.30) -> str:
        lines = [f"Players with interception rate over {100 * threshold:.0f}%"]
        for name, p in self.over_threshold(threshold):
            lines.append(f"  {name:20s} {p.interceptions:3d}/{p.services:<3d} {100 * p.rate:6.2f}%")
        overall = self.overall_rate
        if overall is not None:
            lines.append(f"Overall interception rate: {100 * overall:.2f}%")
        return "\n".join(lines)


def summarize_sla(ds: Dataset) -> SlaSummary:
    """Service landing area counts by serving side."""
    _require_canonical(ds)
    counts = {s: {a: 0 for a in SlaArea} for s in ServiceSide}
    for r in ds:
        counts[r.service_from][r.sla] += 1
    return SlaSummary(counts)


def summarize_rla(ds: Dataset) -> RlaSummary:
    """Return landing zone counts by serving side."""
    _require_canonical(ds)
    counts = {s: {z: 0 for z in ZONES} for s in ServiceSide}
    for r in ds:
        counts[r.service_from][r.rla] += 1
    return RlaSummary(counts)


def interception_rates(ds: Dataset) -> InterceptionReport:
    """Per-server interception report.

    Rounds where the partner took the third shot do not count as services;
    servers with no applicable rounds are omitted (their rate is undefined).
    """
    _require_canonical(ds)
    raw: dict[str, list[int]] = {}
    for r in ds:
        if r.intercept is InterceptOutcome.NOT_APPLICABLE:
            continue
        cell = raw.setdefault(r.server, [0, 0])
        cell[1] += 1
        if r.intercept is InterceptOutcome.YES:
            cell[0] += 1
    return InterceptionReport(
        {name: PlayerInterception(yes, total) for name, (yes, total) in raw.items()}
    )
